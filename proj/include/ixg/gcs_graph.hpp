#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "ixg/errors.hpp"
#include "ixg/geometry/convex_set.hpp"

namespace ixg {

/// Graph of convex sets. Vertex ids are dense and follow input order; a
/// wired query appends its start and goal singletons as the last two ids.
class GcsGraph {
public:
    GcsGraph() = default;

    int num_vertices() const noexcept { return static_cast<int>(sets_.size()); }
    int num_edges() const noexcept { return static_cast<int>(edges_.size()); }
    int dim() const noexcept { return sets_.empty() ? 0 : sets_.front().dim(); }
    double margin() const noexcept { return margin_; }

    const ConvexSet& set(int id) const { return sets_.at(static_cast<std::size_t>(id)); }
    const std::vector<ConvexSet>& sets() const noexcept { return sets_; }
    const std::vector<std::pair<int, int>>& edges() const noexcept { return edges_; }
    const std::vector<int>& successors(int id) const { return succ_.at(static_cast<std::size_t>(id)); }
    const std::vector<int>& predecessors(int id) const { return pred_.at(static_cast<std::size_t>(id)); }
    int out_degree(int id) const { return static_cast<int>(successors(id).size()); }
    int in_degree(int id) const { return static_cast<int>(predecessors(id).size()); }

    bool has_edge(int u, int v) const {
        if (u < 0 || u >= num_vertices()) return false;
        const auto& s = succ_[static_cast<std::size_t>(u)];
        return std::binary_search(s.begin(), s.end(), v);
    }

    /// True for the singleton start/goal vertices added by wire_query.
    bool is_query_vertex(int id) const { return id == start_id_ || id == goal_id_; }
    int start_id() const noexcept { return start_id_; }
    int goal_id() const noexcept { return goal_id_; }
    bool wired() const noexcept { return start_id_ >= 0; }

    /// Number of original (non-query) vertices.
    int num_regions() const noexcept { return wired() ? num_vertices() - 2 : num_vertices(); }

    /// Edge list text, one `u v` per line.
    void write_edge_list(std::ostream& os) const {
        for (const auto& [u, v] : edges_) os << u << ' ' << v << '\n';
    }

private:
    friend GcsGraph build_graph(std::vector<ConvexSet> sets, double margin);
    friend struct GraphBuilder;

    void add_edge(int u, int v) {
        edges_.emplace_back(u, v);
        succ_[static_cast<std::size_t>(u)].push_back(v);
        pred_[static_cast<std::size_t>(v)].push_back(u);
    }
    void finalize() {
        std::sort(edges_.begin(), edges_.end());
        for (auto& s : succ_) std::sort(s.begin(), s.end());
        for (auto& p : pred_) std::sort(p.begin(), p.end());
    }

    std::vector<ConvexSet> sets_;
    std::vector<std::pair<int, int>> edges_;
    std::vector<std::vector<int>> succ_;
    std::vector<std::vector<int>> pred_;
    double margin_ = 1e-9;
    int start_id_ = -1;
    int goal_id_ = -1;
};

struct GraphBuilder {
    static GcsGraph wire(const GcsGraph& g, const ConvexSet& start, const ConvexSet& goal,
                         const std::vector<int>& start_sets, const std::vector<int>& goal_sets) {
        GcsGraph out = g;
        out.start_id_ = out.num_vertices();
        out.sets_.push_back(start);
        out.goal_id_ = out.num_vertices();
        out.sets_.push_back(goal);
        out.succ_.resize(out.sets_.size());
        out.pred_.resize(out.sets_.size());
        for (int v : start_sets) out.add_edge(out.start_id_, v);
        for (int v : goal_sets) out.add_edge(v, out.goal_id_);
        out.finalize();
        return out;
    }
};

/// Overlap graph: (u, v) is an edge iff intersects(set u, set v, margin).
inline GcsGraph build_graph(std::vector<ConvexSet> sets, double margin = 1e-9) {
    if (sets.empty()) throw ArgumentError("build_graph: no sets");
    const int d = sets.front().dim();
    for (const auto& s : sets)
        if (s.dim() != d) throw ArgumentError("build_graph: mixed dimensions");

    std::vector<BoundingBox> boxes;
    boxes.reserve(sets.size());
    for (const auto& s : sets) {
        BoundingBox bb = bounding_box(s);
        if (!bb.lo.allFinite() || !bb.hi.allFinite())
            throw ArgumentError("build_graph: unbounded set " + s.label());
        if ((bb.hi - bb.lo).minCoeff() < -1e-12)
            throw EmptySet("build_graph: empty set " + s.label());
        boxes.push_back(std::move(bb));
    }

    GcsGraph g;
    g.margin_ = margin;
    g.sets_ = std::move(sets);
    const int n = g.num_vertices();
    g.succ_.assign(static_cast<std::size_t>(n), {});
    g.pred_.assign(static_cast<std::size_t>(n), {});

    // Sweep along axis 0 so only boxes overlapping in x are tested exactly.
    std::vector<int> order(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        return boxes[static_cast<std::size_t>(a)].lo[0] < boxes[static_cast<std::size_t>(b)].lo[0];
    });
    for (std::size_t ia = 0; ia < order.size(); ++ia) {
        const int a = order[ia];
        const auto& ba = boxes[static_cast<std::size_t>(a)];
        for (std::size_t ib = ia + 1; ib < order.size(); ++ib) {
            const int b = order[ib];
            const auto& bb = boxes[static_cast<std::size_t>(b)];
            if (bb.lo[0] > ba.hi[0] - margin + 1e-12) break;
            if (!ba.overlaps(bb, margin - 1e-12)) continue;
            if (intersects(g.sets_[static_cast<std::size_t>(a)], g.sets_[static_cast<std::size_t>(b)],
                           margin)) {
                g.add_edge(a, b);
                g.add_edge(b, a);
            }
        }
    }
    g.finalize();
    return g;
}

struct Query {
    Point start;
    Point goal;
    std::optional<Eigen::VectorXd> start_velocity;  // unconstrained when absent
    std::optional<Eigen::VectorXd> goal_velocity;
};

/// Ids of the original regions containing p.
inline std::vector<int> containing_sets(const GcsGraph& g, const Point& p, double tol = 0.0) {
    std::vector<int> ids;
    for (int i = 0; i < g.num_regions(); ++i)
        if (contains(g.set(i), p, tol)) ids.push_back(i);
    return ids;
}

/// Adds singleton start/goal vertices: start -> every set holding q.start,
/// every set holding q.goal -> goal.
inline GcsGraph wire_query(const GcsGraph& g, const Query& q) {
    if (g.wired()) throw StateError("wire_query: graph already has a query");
    if (q.start.size() != g.dim() || q.goal.size() != g.dim())
        throw ArgumentError("wire_query: dimension mismatch");
    const auto from = containing_sets(g, q.start);
    if (from.empty())
        throw QueryOutsideCover(QueryOutsideCover::Endpoint::Start,
                                "wire_query: start lies outside every convex set");
    const auto to = containing_sets(g, q.goal);
    if (to.empty())
        throw QueryOutsideCover(QueryOutsideCover::Endpoint::Goal,
                                "wire_query: goal lies outside every convex set");
    return GraphBuilder::wire(g, ConvexSet::singleton(q.start, "start"),
                              ConvexSet::singleton(q.goal, "goal"), from, to);
}

/// Connected components over the undirected view; returns a label per vertex.
inline std::vector<int> connected_components(const GcsGraph& g) {
    std::vector<int> parent(static_cast<std::size_t>(g.num_vertices()));
    for (std::size_t i = 0; i < parent.size(); ++i) parent[i] = static_cast<int>(i);
    auto find = [&](int x) {
        while (parent[static_cast<std::size_t>(x)] != x) {
            parent[static_cast<std::size_t>(x)] =
                parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
            x = parent[static_cast<std::size_t>(x)];
        }
        return x;
    };
    for (const auto& [u, v] : g.edges()) parent[static_cast<std::size_t>(find(u))] = find(v);
    std::vector<int> label(parent.size());
    for (std::size_t i = 0; i < parent.size(); ++i) label[i] = find(static_cast<int>(i));
    return label;
}

}  // namespace ixg
