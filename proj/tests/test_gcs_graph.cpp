#include <gtest/gtest.h>

#include <set>
#include <sstream>

#include "ixg/gcs_graph.hpp"
#include "ixg/generators.hpp"

using namespace ixg;

namespace {

Point P(std::initializer_list<double> v) {
    Point p(static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (double x : v) p[i++] = x;
    return p;
}

ConvexSet Box(std::initializer_list<double> lo, std::initializer_list<double> hi) {
    return ConvexSet::box(P(lo), P(hi));
}

std::vector<ConvexSet> chain() {
    return {Box({0, 0}, {2, 1}), Box({1.5, 0}, {3.5, 1}), Box({3, 0}, {5, 1})};
}

int count_components(const GcsGraph& g) {
    const auto lab = connected_components(g);
    return static_cast<int>(std::set<int>(lab.begin(), lab.end()).size());
}

}  // namespace

TEST(BuildGraph, Chain) {
    const auto g = build_graph(chain());
    EXPECT_EQ(g.num_vertices(), 3);
    EXPECT_EQ(g.num_edges(), 4);
    EXPECT_TRUE(g.has_edge(0, 1));
    EXPECT_TRUE(g.has_edge(1, 0));
    EXPECT_TRUE(g.has_edge(1, 2));
    EXPECT_TRUE(g.has_edge(2, 1));
    EXPECT_FALSE(g.has_edge(0, 2));
    EXPECT_EQ(g.out_degree(1), 2);
    EXPECT_EQ(g.in_degree(0), 1);
}

TEST(BuildGraph, SingleBoxAndErrors) {
    EXPECT_EQ(build_graph({Box({0, 0}, {1, 1})}).num_edges(), 0);
    EXPECT_THROW(build_graph({}), ArgumentError);
    EXPECT_THROW(build_graph({Box({0, 0}, {1, 1}), Box({0}, {1})}), ArgumentError);
    Eigen::MatrixXd A(1, 2);
    A << 1, 0;
    EXPECT_THROW(build_graph({ConvexSet(A, Eigen::VectorXd::Ones(1))}), ArgumentError);
}

TEST(BuildGraph, FacetContactNeedsMargin) {
    const std::vector<ConvexSet> touching{Box({0, 0}, {1, 1}), Box({1, 0}, {2, 1})};
    EXPECT_EQ(build_graph(touching).num_edges(), 0);
    EXPECT_EQ(build_graph(touching, 0.0).num_edges(), 2);
}

TEST(BuildGraph, EdgeListExport) {
    std::ostringstream os;
    build_graph(chain()).write_edge_list(os);
    EXPECT_EQ(os.str(), "0 1\n1 0\n1 2\n2 1\n");
}

TEST(BuildGraph, MatchesBruteForceOnRandomBoxes) {
    BoundingBox bounds{P({0, 0, 0}), P({1, 1, 1})};
    const auto sets = generate_box_world(bounds, 25, 3);
    const auto g = build_graph(sets);
    for (int u = 0; u < g.num_vertices(); ++u)
        for (int v = 0; v < g.num_vertices(); ++v)
            if (u != v) {
                EXPECT_EQ(g.has_edge(u, v), intersects(sets[u], sets[v], g.margin())) << u << ' ' << v;
            }
}

TEST(WireQuery, CountsEdges) {
    const std::vector<ConvexSet> sets{Box({0, 0}, {2, 2}), Box({1, 0}, {3, 2}), Box({2.5, 0}, {5, 2})};
    const auto g = build_graph(sets);
    const Query q{P({1.5, 1}), P({4, 1}), std::nullopt, std::nullopt};
    const auto w = wire_query(g, q);
    EXPECT_EQ(w.num_vertices(), g.num_vertices() + 2);
    EXPECT_EQ(w.num_edges(), g.num_edges() + 3);
    EXPECT_EQ(w.start_id(), 3);
    EXPECT_EQ(w.goal_id(), 4);
    EXPECT_EQ(w.successors(w.start_id()), (std::vector<int>{0, 1}));
    EXPECT_EQ(w.predecessors(w.goal_id()), (std::vector<int>{2}));
    EXPECT_TRUE(w.predecessors(w.start_id()).empty());
    EXPECT_TRUE(w.successors(w.goal_id()).empty());
    for (const auto& e : g.edges()) EXPECT_TRUE(w.has_edge(e.first, e.second));
    EXPECT_EQ(w.num_regions(), 3);
    EXPECT_TRUE(w.is_query_vertex(3));
    EXPECT_FALSE(w.is_query_vertex(2));
}

TEST(WireQuery, SameSetGivesThreeVertexPath) {
    const auto g = build_graph(chain());
    const auto w = wire_query(g, {P({0.2, 0.5}), P({0.8, 0.5}), std::nullopt, std::nullopt});
    EXPECT_TRUE(w.has_edge(w.start_id(), 0));
    EXPECT_TRUE(w.has_edge(0, w.goal_id()));
}

TEST(WireQuery, OutsideCoverReportsEndpoint) {
    const auto g = build_graph(chain());
    try {
        wire_query(g, {P({9, 9}), P({0.5, 0.5}), std::nullopt, std::nullopt});
        FAIL() << "expected QueryOutsideCover";
    } catch (const QueryOutsideCover& e) {
        EXPECT_EQ(e.endpoint(), QueryOutsideCover::Endpoint::Start);
    }
    try {
        wire_query(g, {P({0.5, 0.5}), P({9, 9}), std::nullopt, std::nullopt});
        FAIL() << "expected QueryOutsideCover";
    } catch (const QueryOutsideCover& e) {
        EXPECT_EQ(e.endpoint(), QueryOutsideCover::Endpoint::Goal);
    }
    const auto w = wire_query(g, {P({0.5, 0.5}), P({4, 0.5}), std::nullopt, std::nullopt});
    EXPECT_THROW(wire_query(w, {P({0.5, 0.5}), P({4, 0.5}), std::nullopt, std::nullopt}), StateError);
    EXPECT_THROW(wire_query(g, {P({0.5}), P({4, 0.5}), std::nullopt, std::nullopt}), ArgumentError);
}

TEST(Maze, TwoByTwo) {
    const auto m = generate_maze(2, 2, 11);
    EXPECT_EQ(m.sets.size(), 4u);
    EXPECT_EQ(m.openings.size(), 3u);
    EXPECT_EQ(build_graph(m.sets).num_edges(), 6);
}

TEST(Maze, EdgesMatchOpenings) {
    const auto m = generate_maze(5, 5, 7);
    const auto g = build_graph(m.sets);
    EXPECT_EQ(m.openings.size(), 24u);
    EXPECT_EQ(g.num_edges(), 2 * static_cast<int>(m.openings.size()));
    for (const auto& [a, b] : m.openings) EXPECT_TRUE(g.has_edge(a, b));
    EXPECT_EQ(count_components(g), 1);
}

TEST(Maze, FullSizeAndDeterminism) {
    const auto m = generate_maze(50, 50, 1);
    EXPECT_EQ(m.sets.size(), 2500u);
    EXPECT_EQ(m.openings.size(), 2499u);
    const auto again = generate_maze(50, 50, 1);
    EXPECT_EQ(m.openings, again.openings);
    EXPECT_NE(generate_maze(50, 50, 2).openings, m.openings);
    EXPECT_THROW(generate_maze(1, 5, 1), ArgumentError);
}

TEST(Maze, CellGeometry) {
    const auto m = generate_maze(4, 6, 3);
    for (int r = 0; r < m.rows; ++r)
        for (int c = 0; c < m.cols; ++c) {
            const Point center = P({c + 0.5, r + 0.5});
            EXPECT_TRUE(contains(m.sets[m.cell(r, c)], center));
        }
    // Closed neighbors do not touch.
    const auto g = build_graph(m.sets);
    for (int r = 0; r < m.rows; ++r)
        for (int c = 0; c + 1 < m.cols; ++c)
            EXPECT_EQ(g.has_edge(m.cell(r, c), m.cell(r, c + 1)), m.is_open(m.cell(r, c), m.cell(r, c + 1)));
}

TEST(BoxWorld, Examples) {
    BoundingBox bounds{P({0, 0, 0}), P({10, 10, 10})};
    const auto one = generate_box_world(bounds, 1, 5);
    ASSERT_EQ(one.size(), 1u);
    const auto bb = bounding_box(one[0]);
    EXPECT_EQ(bb.lo, bounds.lo);
    EXPECT_EQ(bb.hi, bounds.hi);

    const auto ten = generate_box_world(bounds, 10, 5);
    EXPECT_EQ(ten.size(), 10u);
    EXPECT_EQ(count_components(build_graph(ten)), 1);

    const auto again = generate_box_world(bounds, 10, 5);
    for (std::size_t i = 0; i < ten.size(); ++i) EXPECT_EQ(ten[i].offsets(), again[i].offsets());
    EXPECT_THROW(generate_box_world(bounds, 0, 5), ArgumentError);
}

TEST(BoxWorld, ChainConnectivityAndContainment) {
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
        BoundingBox bounds{P({0, 0}), P({1, 1})};
        const auto sets = generate_box_world(bounds, 12, seed, 0.04, 0.1);
        const auto g = build_graph(sets);
        EXPECT_EQ(count_components(g), 1) << "seed " << seed;
        for (std::size_t k = 1; k < sets.size(); ++k) {
            bool overlaps_earlier = false;
            for (std::size_t j = 0; j < k; ++j) overlaps_earlier = overlaps_earlier || g.has_edge(int(k), int(j));
            EXPECT_TRUE(overlaps_earlier) << "seed " << seed << " box " << k;
        }
        for (const auto& s : sets) {
            const auto bb = bounding_box(s);
            EXPECT_GE(bb.lo.minCoeff(), -1e-12);
            EXPECT_LE(bb.hi.maxCoeff(), 1 + 1e-12);
        }
        for (const auto& [u, v] : g.edges()) EXPECT_TRUE(intersects(sets[u], sets[v], g.margin()));
    }
}
