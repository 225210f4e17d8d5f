#include <gtest/gtest.h>

#include <sstream>

#include "ixg/generators.hpp"
#include "ixg/harness/oracle.hpp"
#include "ixg/lbg.hpp"
#include "ixg/search.hpp"

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

GcsGraph chain_graph() {
    return build_graph({Box({0, 0}, {2, 1}), Box({1.5, 0}, {3.5, 1}), Box({3, 0}, {5, 1})});
}

LbgOptions options(InterfaceCost mode = InterfaceCost::Zero) {
    LbgOptions o;
    o.weights = CostWeights(1, 1);
    o.velocity = VelocitySet::uniform(2, 1.0);
    o.interface_cost = mode;
    return o;
}

int count_kind(const LowerBoundGraph& l, LbgEdgeKind k) {
    int n = 0;
    for (const auto& e : l.edges()) n += e.kind == k;
    return n;
}

}  // namespace

TEST(BuildLbg, Chain) {
    const auto g = chain_graph();
    const auto lbg = build_lbg(g, options());
    EXPECT_EQ(lbg.triplets().size(), 2u);
    EXPECT_EQ(count_kind(lbg, LbgEdgeKind::Triplet), 2);
    EXPECT_GE(lbg.num_vertices(), 2);
    EXPECT_LE(lbg.num_vertices(), 4);
    EXPECT_EQ(lbg.infeasible_triplets(), 0);
    for (const auto& v : lbg.vertices()) {
        EXPECT_TRUE(contains(g.set(v.iface_a), v.point, 1e-9));
        EXPECT_TRUE(contains(g.set(v.iface_b), v.point, 1e-9));
    }
    // Gap between the two interfaces is 1 in x: length 1, time 1.
    for (const auto& e : lbg.edges()) {
        if (e.kind == LbgEdgeKind::Triplet) {
            EXPECT_NEAR(e.cost, 2.0, 1e-6);
        } else {
            EXPECT_EQ(e.cost, 0.0);
        }
    }
}

TEST(BuildLbg, SingleVertexIsEmpty) {
    const auto lbg = build_lbg(build_graph({Box({0, 0}, {1, 1})}), options());
    EXPECT_EQ(lbg.num_vertices(), 0);
    EXPECT_EQ(lbg.num_edges(), 0);
}

TEST(BuildLbg, InterfaceClosureForLeafPair) {
    // Two sets: no vertex has two neighbors, so no triplets; the shared
    // interface still gets a vertex.
    const auto g = build_graph({Box({0, 0}, {2, 1}), Box({1.5, 0}, {3.5, 1})});
    const auto lbg = build_lbg(g, options());
    EXPECT_TRUE(lbg.triplets().empty());
    ASSERT_EQ(lbg.num_vertices(), 1);
    EXPECT_TRUE(lbg.vertex(0).closure);
}

TEST(BuildLbg, ChordInterfaceCosts) {
    const auto g = build_graph(generate_maze(3, 3, 4).sets);
    const auto lbg = build_lbg(g, options(InterfaceCost::Chord));
    for (const auto& e : lbg.edges()) {
        if (e.kind == LbgEdgeKind::Interface) {
            EXPECT_NEAR(e.cost, chord_cost(lbg.vertex(e.from).point, lbg.vertex(e.to).point, lbg.options()), 1e-12);
        }
    }
}

TEST(ChordCost, LengthPlusMinTime) {
    EXPECT_NEAR(chord_cost(P({0, 0}), P({3, 4}), options()), 5.0 + 4.0, 1e-12);
}

TEST(LookupTriplet, Examples) {
    const auto lbg = build_lbg(chain_graph(), options());
    const auto fwd = lookup_triplet(lbg, 0, 1, 2);
    const auto back = lookup_triplet(lbg, 2, 1, 0);
    ASSERT_TRUE(fwd.has_value());
    ASSERT_TRUE(back.has_value());
    EXPECT_LT(fwd->start()[0], fwd->end()[0]);
    EXPECT_GT(back->start()[0], back->end()[0]);
    EXPECT_FALSE(lookup_triplet(lbg, 0, 1, 0).has_value());
    EXPECT_FALSE(lookup_triplet(lbg, 1, 2, 0).has_value());
}

TEST(UpdateLbg, AddsEdgesToEveryMember) {
    const auto g = build_graph(generate_maze(4, 4, 2).sets);
    const auto lbg = build_lbg(g, options());
    const Point q = P({1.5, 1.5});
    const auto holders = containing_sets(g, q);
    ASSERT_EQ(holders.size(), 1u);
    const int k = static_cast<int>(lbg.members(holders[0]).size());
    ASSERT_GT(k, 0);
    const auto up = update_lbg(g, lbg, q);
    EXPECT_EQ(up.num_vertices(), lbg.num_vertices() + 1);
    EXPECT_EQ(up.num_edges(), lbg.num_edges() + 2 * k);
    for (int e = lbg.num_edges(); e < up.num_edges(); ++e) {
        EXPECT_EQ(up.edges()[e].kind, LbgEdgeKind::Query);
        EXPECT_GE(up.edges()[e].cost, 0.0);
    }
    const auto twice = update_lbg(g, up, q);
    EXPECT_EQ(twice.num_vertices(), up.num_vertices());
    EXPECT_EQ(twice.num_edges(), up.num_edges());
    EXPECT_THROW(update_lbg(g, lbg, P({-5, -5})), QueryOutsideCover);
}

TEST(UpdateLbg, PointInTwoSets) {
    const auto g = chain_graph();
    const auto lbg = build_lbg(g, options());
    const Point q = P({1.75, 0.5});
    ASSERT_EQ(containing_sets(g, q).size(), 2u);
    std::vector<int> members = lbg.members(0);
    members.insert(members.end(), lbg.members(1).begin(), lbg.members(1).end());
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
    const auto up = update_lbg(g, lbg, q);
    EXPECT_EQ(up.num_edges(), lbg.num_edges() + 2 * static_cast<int>(members.size()));
}

TEST(UpdateLbg, QueryEdgeCostsAreRelaxedLowerBounds) {
    const auto g = chain_graph();
    const auto lbg = build_lbg(g, options());
    const Point q = P({0.5, 0.5});
    const auto up = update_lbg(g, lbg, q);
    for (int e = lbg.num_edges(); e < up.num_edges(); ++e) {
        const auto& ed = up.edges()[e];
        const int other = ed.from == lbg.num_vertices() ? ed.to : ed.from;
        // Never above the chord to the vertex itself.
        EXPECT_LE(ed.cost, chord_cost(q, up.vertex(other).point, up.options()) + 1e-9);
    }
}

TEST(BackwardDijkstra, HandBuiltChain) {
    const auto g = build_graph({Box({0, 0}, {1, 1}), Box({5, 5}, {6, 6})});
    LowerBoundGraph lbg;
    LbgAccess::options(lbg) = options();
    LbgAccess::members(lbg).assign(2, {});
    const int a = LbgAccess::add_vertex(lbg, {P({0.1, 0.1}), 0, 0, 0, false});
    const int b = LbgAccess::add_vertex(lbg, {P({0.5, 0.5}), 0, 0, 0, false});
    const int far = LbgAccess::add_vertex(lbg, {P({5.5, 5.5}), 1, 1, 1, false});
    LbgAccess::members(lbg)[0] = {a, b};
    LbgAccess::members(lbg)[1] = {far};
    const int goal = LbgAccess::add_vertex(lbg, {P({0.9, 0.9}), -1, -1, -1, false});
    LbgAccess::queries(lbg).push_back(goal);
    LbgAccess::add_edge(lbg, b, goal, 1.0, LbgEdgeKind::Query);
    LbgAccess::add_edge(lbg, a, b, 2.0, LbgEdgeKind::Triplet);
    const auto h = backward_dijkstra(lbg, g, P({0.9, 0.9}));
    EXPECT_EQ(h.vertex[goal], 0.0);
    EXPECT_EQ(h.vertex[b], 1.0);
    EXPECT_EQ(h.vertex[a], 3.0);
    EXPECT_TRUE(std::isinf(h.vertex[far]));
    EXPECT_EQ(h.l(0), 0.0);  // holds the goal
    EXPECT_TRUE(std::isinf(h.l(1)));
    EXPECT_THROW(backward_dijkstra(lbg, g, P({0.2, 0.9})), StateError);
}

TEST(BackwardDijkstra, GoalAndDisconnectedComponent) {
    const auto g = build_graph({Box({0, 0}, {2, 1}), Box({1.5, 0}, {3.5, 1}), Box({3, 0}, {5, 1}),
                                Box({10, 10}, {11, 11})});
    const Query q{P({0.5, 0.5}), P({4.5, 0.5}), std::nullopt, std::nullopt};
    const auto pb = prepare(g, build_lbg(g, options()), q);
    EXPECT_EQ(pb.heuristic.l(pb.graph.goal_id()), 0.0);
    EXPECT_EQ(pb.heuristic.l(2), 0.0);
    EXPECT_TRUE(std::isinf(pb.heuristic.l(3)));
    EXPECT_GT(pb.heuristic.l(0), 0.0);
    EXPECT_GE(pb.heuristic.l(0), pb.heuristic.l(1));
}

TEST(SizeBounds, MazeFiveByFive) {
    const auto g = build_graph(generate_maze(5, 5, 7).sets);
    const auto lbg = build_lbg(g, options());
    const auto rep = size_report(lbg, g);
    long long bound = 0;
    for (int i = 0; i < g.num_vertices(); ++i) bound += 2LL * g.in_degree(i) * g.out_degree(i);
    EXPECT_EQ(rep.vertex_bound, bound);
    EXPECT_LE(rep.vertices, bound);
    EXPECT_LE(rep.edges, rep.edge_bound);
    EXPECT_LE(rep.max_degree, rep.degree_bound);
    EXPECT_TRUE(rep.degree_ok);
    EXPECT_TRUE(rep.ok());
}

TEST(SizeBounds, RandomBoxWorlds) {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto g = build_graph(generate_box_world({P({0, 0}), P({1, 1})}, 10, seed, 0.04, 0.1));
        LbgOptions o = options();
        const auto rep = size_report(build_lbg(g, o), g);
        EXPECT_TRUE(rep.ok()) << "seed " << seed;
    }
}

TEST(LbgCache, RoundTrip) {
    const auto g = build_graph(generate_maze(3, 4, 9).sets);
    const auto lbg = build_lbg(g, options(InterfaceCost::Chord));
    std::stringstream ss;
    save_lbg(ss, lbg, "abc");
    const auto back = load_lbg(ss, "abc");
    ASSERT_EQ(back.num_vertices(), lbg.num_vertices());
    ASSERT_EQ(back.num_edges(), lbg.num_edges());
    for (int v = 0; v < lbg.num_vertices(); ++v) {
        EXPECT_LT((back.vertex(v).point - lbg.vertex(v).point).norm(), 1e-12);
        EXPECT_EQ(back.vertex(v).iface_a, lbg.vertex(v).iface_a);
    }
    for (int e = 0; e < lbg.num_edges(); ++e) {
        EXPECT_NEAR(back.edges()[e].cost, lbg.edges()[e].cost, 1e-12);
        EXPECT_EQ(back.edges()[e].kind, lbg.edges()[e].kind);
    }
    EXPECT_EQ(back.triplets().size(), lbg.triplets().size());
    EXPECT_EQ(back.options().interface_cost, InterfaceCost::Chord);
    for (int s = 0; s < g.num_vertices(); ++s) EXPECT_EQ(back.members(s), lbg.members(s));
}

TEST(LbgCache, RejectsMismatchAndGarbage) {
    const auto g = chain_graph();
    std::stringstream ss;
    save_lbg(ss, build_lbg(g, options()), "key-1");
    EXPECT_THROW(load_lbg(ss, "key-2"), StateError);
    std::stringstream junk("not an lbg");
    EXPECT_THROW(load_lbg(junk), ParseError);
    std::stringstream full;
    save_lbg(full, build_lbg(g, options()), "k");
    const std::string text = full.str();
    std::stringstream cut(text.substr(0, text.size() / 2));
    EXPECT_THROW(load_lbg(cut), ParseError);
}

// Heuristic at the start never exceeds the true optimum at either
// continuity order (zero-cost interface edges). The oracle starts from the
// heuristic as incumbent, so any path it returns undercuts the bound.
TEST(Admissibility, SmallWorlds) {
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
        const auto g = build_graph(generate_box_world({P({0, 0}), P({1, 1})}, 6, seed, 0.04, 0.1));
        const auto lbg = build_lbg(g, options());
        for (int s = 0; s < g.num_vertices(); ++s)
            for (int t = 0; t < g.num_vertices(); ++t) {
                if (s == t) continue;
                const Query q{chebyshev_center(g.set(s)).center, chebyshev_center(g.set(t)).center, std::nullopt,
                              std::nullopt};
                const auto pb = prepare(g, lbg, q);
                const double l = pb.heuristic.l(pb.graph.start_id());
                ASSERT_TRUE(std::isfinite(l));
                for (int j : {0, 1}) {
                    PlannerConfig cfg;
                    cfg.weights = CostWeights(1, 1);
                    cfg.velocity = VelocitySet::uniform(2, 1.0);
                    cfg.continuity = j;
                    OracleOptions oo;
                    oo.branch_and_bound = true;
                    oo.initial_bound = l - 1e-6;
                    const auto cheaper = oracle_enumerate(pb.graph, q, 1, cfg, oo);
                    EXPECT_EQ(cheaper.status, PlanStatus::Infeasible)
                        << "seed " << seed << " " << s << "->" << t << " j=" << j << " l=" << l
                        << " path cost " << cheaper.cost;
                }
            }
    }
}
