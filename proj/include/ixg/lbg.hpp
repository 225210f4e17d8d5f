#pragma once

// Lower bound graph: relaxed triplet trajectories through each set, joined on
// the interfaces, give an admissible cost-to-go after a backward Dijkstra.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <istream>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <queue>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "ixg/errors.hpp"
#include "ixg/gcs_graph.hpp"
#include "ixg/geometry/convex_set.hpp"
#include "ixg/trajopt/sequence.hpp"
#include "ixg/trajopt/trajectory.hpp"

namespace ixg {

enum class LbgEdgeKind { Triplet, Interface, Query };

inline const char* to_string(LbgEdgeKind k) {
    switch (k) {
        case LbgEdgeKind::Triplet: return "triplet";
        case LbgEdgeKind::Interface: return "interface";
        case LbgEdgeKind::Query: return "query";
    }
    return "?";
}

/// Cost of edges between vertices on the same interface.
///   Zero:  0, as nothing moves between two points of one interface in the
///          relaxed graph. Admissible.
///   Chord: a*|dx| + b*min_time(dx). Tighter, but not a lower bound once two
///          triplets meet at different points of a shared interface.
enum class InterfaceCost { Zero, Chord };

struct LbgVertex {
    Point point;
    int owner = -1;  // center set of the triplet that produced it (-1 for query points)
    int iface_a = -1;  // interface (a, b) with a < b; -1 for query points
    int iface_b = -1;
    bool closure = false;  // added to cover an interface no triplet reached
};

struct LbgEdge {
    int from = -1;
    int to = -1;
    double cost = 0.0;
    LbgEdgeKind kind = LbgEdgeKind::Triplet;
};

struct LbgOptions {
    CostWeights weights;
    VelocitySet velocity;
    InterfaceCost interface_cost = InterfaceCost::Zero;
    double merge_tol = 1e-9;
};

using TripletKey = std::tuple<int, int, int>;

class LowerBoundGraph {
public:
    LowerBoundGraph() = default;

    int num_vertices() const noexcept { return static_cast<int>(vertices_.size()); }
    int num_edges() const noexcept { return static_cast<int>(edges_.size()); }
    const std::vector<LbgVertex>& vertices() const noexcept { return vertices_; }
    const std::vector<LbgEdge>& edges() const noexcept { return edges_; }
    const LbgVertex& vertex(int v) const { return vertices_.at(static_cast<std::size_t>(v)); }
    const std::vector<int>& out_edges(int v) const { return out_.at(static_cast<std::size_t>(v)); }
    const std::vector<int>& in_edges(int v) const { return in_.at(static_cast<std::size_t>(v)); }
    const LbgOptions& options() const noexcept { return opt_; }

    /// LBG vertices lying inside set `id` (within merge tolerance).
    const std::vector<int>& members(int id) const {
        static const std::vector<int> none;
        if (id < 0 || static_cast<std::size_t>(id) >= members_.size()) return none;
        return members_[static_cast<std::size_t>(id)];
    }
    int num_sets() const noexcept { return static_cast<int>(members_.size()); }

    const std::map<TripletKey, Trajectory>& triplets() const noexcept { return triplets_; }
    int infeasible_triplets() const noexcept { return infeasible_triplets_; }

    /// Query vertex ids inserted so far.
    const std::vector<int>& query_vertices() const noexcept { return queries_; }

    /// Index of an existing vertex within merge tolerance of p, or -1.
    int find_query_vertex(const Point& p) const {
        for (int v : queries_)
            if ((vertices_[static_cast<std::size_t>(v)].point - p).norm() <= opt_.merge_tol) return v;
        return -1;
    }

private:
    friend struct LbgAccess;

    int add_vertex(LbgVertex v) {
        vertices_.push_back(std::move(v));
        out_.emplace_back();
        in_.emplace_back();
        return num_vertices() - 1;
    }
    void add_edge(int u, int v, double c, LbgEdgeKind k) {
        if (!(c >= 0.0)) c = 0.0;
        out_[static_cast<std::size_t>(u)].push_back(num_edges());
        in_[static_cast<std::size_t>(v)].push_back(num_edges());
        edges_.push_back({u, v, c, k});
    }

    std::vector<LbgVertex> vertices_;
    std::vector<LbgEdge> edges_;
    std::vector<std::vector<int>> out_;
    std::vector<std::vector<int>> in_;
    std::vector<std::vector<int>> members_;
    std::map<TripletKey, Trajectory> triplets_;
    std::vector<int> queries_;
    int infeasible_triplets_ = 0;
    LbgOptions opt_;
};

struct LbgAccess {
    static int add_vertex(LowerBoundGraph& g, LbgVertex v) { return g.add_vertex(std::move(v)); }
    static void add_edge(LowerBoundGraph& g, int u, int v, double c, LbgEdgeKind k) { g.add_edge(u, v, c, k); }
    static std::vector<std::vector<int>>& members(LowerBoundGraph& g) { return g.members_; }
    static std::map<TripletKey, Trajectory>& triplets(LowerBoundGraph& g) { return g.triplets_; }
    static std::vector<int>& queries(LowerBoundGraph& g) { return g.queries_; }
    static int& infeasible(LowerBoundGraph& g) { return g.infeasible_triplets_; }
    static LbgOptions& options(LowerBoundGraph& g) { return g.opt_; }
};

/// Straight-line lower bound a*|dx| + b*min_time(dx).
inline double chord_cost(const Point& x, const Point& y, const LbgOptions& o) {
    const Eigen::VectorXd dx = y - x;
    double t = 0.0;
    if (o.velocity.dim() == dx.size()) t = o.velocity.min_time(dx);
    return o.weights.a * dx.norm() + o.weights.b * t;
}

namespace detail {

inline SeqProgram relaxed_program(const ConvexSet& center, int center_id, const LbgOptions& o) {
    SeqProgram p;
    p.sets = {center};
    p.set_ids = {center_id};
    p.order = 1;
    p.continuity = 0;
    p.weights = o.weights;
    p.velocity = o.velocity;
    return p;
}

// Vertices sitting inside set `id` or its neighbors' overlaps are found by
// testing the tagged sets and their neighbors.
inline void register_member(LowerBoundGraph& lbg, const GcsGraph& g, int v, std::initializer_list<int> seeds) {
    auto& mem = LbgAccess::members(lbg);
    const Point& p = lbg.vertex(v).point;
    const double tol = lbg.options().merge_tol;
    std::vector<int> cand;
    for (int s : seeds) {
        if (s < 0) continue;
        cand.push_back(s);
        for (int n : g.successors(s))
            if (n < g.num_regions()) cand.push_back(n);
    }
    std::sort(cand.begin(), cand.end());
    cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
    for (int s : cand)
        if (contains(g.set(s), p, tol)) mem[static_cast<std::size_t>(s)].push_back(v);
}

}  // namespace detail

/// Builds the LBG of `g` (query vertices, if wired, are ignored).
///
/// For every center c and ordered neighbor pair (p, s), p != s, solves the
/// relaxed one-segment program from Q_p ∩ Q_c to Q_c ∩ Q_s inside Q_c (order
/// 1, no continuity or boundary velocity). Order 1 attains the same optimum
/// as any higher order in this relaxation, since a straight segment is
/// always available and cheapest. Interfaces no triplet touches get their
/// Chebyshev center so every edge of g is represented.
inline LowerBoundGraph build_lbg(const GcsGraph& g, const LbgOptions& opt) {
    LowerBoundGraph lbg;
    LbgAccess::options(lbg) = opt;
    auto& o = LbgAccess::options(lbg);
    if (o.velocity.dim() == 0)
        o.velocity = VelocitySet(Eigen::VectorXd::Constant(std::max(1, g.dim()), std::numeric_limits<double>::infinity()));
    const int n = g.num_regions();
    LbgAccess::members(lbg).assign(static_cast<std::size_t>(n), {});

    std::map<std::pair<int, int>, ConvexSet> iface;
    auto interface_set = [&](int a, int b) -> const ConvexSet& {
        const auto key = std::minmax(a, b);
        auto it = iface.find(key);
        if (it == iface.end()) it = iface.emplace(key, intersection(g.set(key.first), g.set(key.second))).first;
        return it->second;
    };
    // Vertices per interface, for merging.
    std::map<std::pair<int, int>, std::vector<int>> on_iface;
    auto vertex_at = [&](const Point& p, int owner, int a, int b, bool closure) {
        const auto key = std::minmax(a, b);
        auto& list = on_iface[key];
        for (int v : list)
            if ((lbg.vertex(v).point - p).norm() <= o.merge_tol) return v;
        const int v = LbgAccess::add_vertex(lbg, {p, owner, key.first, key.second, closure});
        list.push_back(v);
        detail::register_member(lbg, g, v, {key.first, key.second});
        return v;
    };

    for (int c = 0; c < n; ++c) {
        std::vector<int> nb;
        for (int x : g.successors(c))
            if (x < n) nb.push_back(x);
        for (std::size_t i = 0; i < nb.size(); ++i) {
            for (std::size_t j = 0; j < nb.size(); ++j) {
                if (i == j) continue;
                const int p = nb[i];
                const int s = nb[j];
                SeqProgram prog = detail::relaxed_program(g.set(c), c, o);
                prog.start.region = interface_set(p, c);
                prog.finish.region = interface_set(c, s);
                const SolveResult res = solve_sequence(std::move(prog));
                if (!res.ok()) {
                    ++LbgAccess::infeasible(lbg);
                    continue;
                }
                const int u = vertex_at(res.trajectory.start(), c, p, c, false);
                const int v = vertex_at(res.trajectory.end(), c, c, s, false);
                LbgAccess::add_edge(lbg, u, v, res.cost, LbgEdgeKind::Triplet);
                LbgAccess::triplets(lbg).emplace(TripletKey{p, c, s}, res.trajectory);
            }
        }
    }

    // Interface closures.
    for (const auto& [u, w] : g.edges()) {
        if (u >= w || w >= n) continue;
        if (!on_iface[{u, w}].empty()) continue;
        vertex_at(chebyshev_center(interface_set(u, w)).center, -1, u, w, true);
    }

    // Interface edges between every pair of vertices inside both sets of an edge.
    for (const auto& [u, w] : g.edges()) {
        if (u >= w || w >= n) continue;
        const auto& mu = lbg.members(u);
        const auto& mw = lbg.members(w);
        std::vector<int> both;
        std::set_intersection(mu.begin(), mu.end(), mw.begin(), mw.end(), std::back_inserter(both));
        for (int x : both)
            for (int y : both) {
                if (x == y) continue;
                const double c = o.interface_cost == InterfaceCost::Zero
                                     ? 0.0
                                     : chord_cost(lbg.vertex(x).point, lbg.vertex(y).point, o);
                LbgAccess::add_edge(lbg, x, y, c, LbgEdgeKind::Interface);
            }
    }
    return lbg;
}

/// Relaxed lower bound on moving inside `set` between q and some point of
/// `region` (q first when `from_q`).
inline double query_edge_cost(const ConvexSet& set, int set_id, const ConvexSet& region, const Point& q,
                              bool from_q, const LbgOptions& o) {
    SeqProgram prog = detail::relaxed_program(set, set_id, o);
    if (from_q) {
        prog.start.point = q;
        prog.finish.region = region;
    } else {
        prog.start.region = region;
        prog.finish.point = q;
    }
    const SolveResult res = solve_sequence(std::move(prog));
    if (res.ok()) return res.cost;
    // Region meets the set only on its boundary: fall back to the chord bound
    // toward the region's bounding box.
    const BoundingBox bb = bounding_box(region);
    const Point nearest = q.cwiseMax(bb.lo).cwiseMin(bb.hi);
    return chord_cost(q, nearest, o);
}

/// Inserts q and connects it both ways to every LBG vertex in each set that
/// contains q. The cost toward a triplet vertex is the relaxed cost between q
/// and the nearest point of that vertex's interface; toward another query
/// point it is the chord bound. Repeated points are a no-op.
inline void update_lbg_in_place(const GcsGraph& g, LowerBoundGraph& lbg, const Point& q) {
    if (lbg.find_query_vertex(q) >= 0) return;
    const auto sets = containing_sets(g, q);
    if (sets.empty())
        throw QueryOutsideCover(QueryOutsideCover::Endpoint::Point, "update_lbg: point lies outside every convex set");
    const LbgOptions& o = lbg.options();
    auto& mem = LbgAccess::members(lbg);
    if (mem.size() < static_cast<std::size_t>(g.num_regions())) mem.resize(static_cast<std::size_t>(g.num_regions()));

    // Cheapest cost per neighbor vertex over all containing sets.
    std::map<int, std::pair<double, double>> best;  // v -> (q->v, v->q)
    std::map<std::pair<int, int>, ConvexSet> iface;
    for (int s : sets) {
        for (int v : lbg.members(s)) {
            const LbgVertex& lv = lbg.vertex(v);
            double to = 0.0;
            double from = 0.0;
            if (lv.iface_a < 0) {
                to = from = chord_cost(q, lv.point, o);
            } else {
                const auto key = std::make_pair(lv.iface_a, lv.iface_b);
                auto it = iface.find(key);
                if (it == iface.end())
                    it = iface.emplace(key, intersection(g.set(key.first), g.set(key.second))).first;
                to = query_edge_cost(g.set(s), s, it->second, q, true, o);
                from = query_edge_cost(g.set(s), s, it->second, q, false, o);
            }
            auto [pos, inserted] = best.emplace(v, std::make_pair(to, from));
            if (!inserted) {
                pos->second.first = std::min(pos->second.first, to);
                pos->second.second = std::min(pos->second.second, from);
            }
        }
    }
    const int qv = LbgAccess::add_vertex(lbg, {q, -1, -1, -1, false});
    LbgAccess::queries(lbg).push_back(qv);
    for (const auto& [v, c] : best) {
        if (std::isfinite(c.first)) LbgAccess::add_edge(lbg, qv, v, c.first, LbgEdgeKind::Query);
        if (std::isfinite(c.second)) LbgAccess::add_edge(lbg, v, qv, c.second, LbgEdgeKind::Query);
    }
    for (int s : sets) mem[static_cast<std::size_t>(s)].push_back(qv);
}

inline LowerBoundGraph update_lbg(const GcsGraph& g, const LowerBoundGraph& lbg, const Point& q) {
    LowerBoundGraph out = lbg;
    update_lbg_in_place(g, out, q);
    return out;
}

struct HeuristicTable {
    std::vector<double> vertex;  // cost-to-goal per LBG vertex
    std::vector<double> set;     // l per graph vertex (wired ids included)

    double l(int id) const {
        if (id < 0 || static_cast<std::size_t>(id) >= set.size()) return std::numeric_limits<double>::infinity();
        return set[static_cast<std::size_t>(id)];
    }
};

/// Backward Dijkstra from the goal query vertex. l(Q) is the least label over
/// LBG vertices inside Q, and 0 for sets containing the goal. When `g` is
/// wired, the start vertex gets its query label and the goal vertex 0.
inline HeuristicTable backward_dijkstra(const LowerBoundGraph& lbg, const GcsGraph& g, const Point& goal) {
    const int gv = lbg.find_query_vertex(goal);
    if (gv < 0) throw StateError("backward_dijkstra: goal not inserted into the LBG");
    const double inf = std::numeric_limits<double>::infinity();
    HeuristicTable h;
    h.vertex.assign(static_cast<std::size_t>(lbg.num_vertices()), inf);
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    h.vertex[static_cast<std::size_t>(gv)] = 0.0;
    pq.emplace(0.0, gv);
    while (!pq.empty()) {
        const auto [d, v] = pq.top();
        pq.pop();
        if (d > h.vertex[static_cast<std::size_t>(v)]) continue;
        for (int e : lbg.in_edges(v)) {
            const LbgEdge& ed = lbg.edges()[static_cast<std::size_t>(e)];
            const double nd = d + ed.cost;
            if (nd < h.vertex[static_cast<std::size_t>(ed.from)]) {
                h.vertex[static_cast<std::size_t>(ed.from)] = nd;
                pq.emplace(nd, ed.from);
            }
        }
    }
    h.set.assign(static_cast<std::size_t>(g.num_vertices()), inf);
    for (int s = 0; s < g.num_regions(); ++s) {
        if (contains(g.set(s), goal, lbg.options().merge_tol)) {
            h.set[static_cast<std::size_t>(s)] = 0.0;
            continue;
        }
        for (int v : lbg.members(s))
            h.set[static_cast<std::size_t>(s)] = std::min(h.set[static_cast<std::size_t>(s)], h.vertex[static_cast<std::size_t>(v)]);
    }
    if (g.wired()) {
        h.set[static_cast<std::size_t>(g.goal_id())] = 0.0;
        const Point start = bounding_box(g.set(g.start_id())).lo;
        const int sv = lbg.find_query_vertex(start);
        double ls = inf;
        if (sv >= 0) ls = h.vertex[static_cast<std::size_t>(sv)];
        for (int s : g.successors(g.start_id())) ls = std::min(ls, h.set[static_cast<std::size_t>(s)]);
        h.set[static_cast<std::size_t>(g.start_id())] = ls;
    }
    return h;
}

/// Cached relaxed trajectory for the triplet (p, c, s), if it was built.
inline std::optional<Trajectory> lookup_triplet(const LowerBoundGraph& lbg, int p, int c, int s) {
    const auto it = lbg.triplets().find({p, c, s});
    if (it == lbg.triplets().end()) return std::nullopt;
    return it->second;
}

// ---------------------------------------------------------------------------
// Size bounds

struct LbgSizeReport {
    long long vertices = 0;
    long long vertex_bound = 0;  // 2 * sum_i |E_in(Q_i)| |E_out(Q_i)|
    long long edges = 0;
    long long edge_bound = 0;    // ordered neighbor pairs (p != s) + ordered pairs on each interface
    int max_degree = 0;
    int degree_bound = 0;        // m * (max vertices on one interface - 1) + max triplet out-degree
    int max_interfaces = 0;      // m: most interfaces a single vertex lies on
    bool degree_ok = true;       // per vertex: degree <= sum over its interfaces (n_e - 1) + triplet out-degree
    bool ok() const { return vertices <= vertex_bound && edges <= edge_bound && max_degree <= degree_bound && degree_ok; }
};

/// Size counts and bounds, ignoring inserted query vertices.
inline LbgSizeReport size_report(const LowerBoundGraph& lbg, const GcsGraph& g) {
    LbgSizeReport r;
    const int n = g.num_regions();
    auto is_query = [&](int v) { return lbg.vertex(v).iface_a < 0; };
    long long triplet_pairs = 0;
    for (int i = 0; i < n; ++i) {
        long long din = 0, dout = 0, both = 0;
        for (int p : g.predecessors(i)) din += p < n;
        for (int s : g.successors(i)) {
            dout += s < n;
            both += s < n && g.has_edge(s, i);
        }
        r.vertex_bound += 2 * din * dout;
        triplet_pairs += din * dout - both;
    }
    std::vector<int> iface_share(static_cast<std::size_t>(lbg.num_vertices()), 0);
    std::vector<int> iface_count(static_cast<std::size_t>(lbg.num_vertices()), 0);
    int max_iface = 0;
    long long iface_pairs = 0;
    for (const auto& [u, w] : g.edges()) {
        if (u >= w || w >= n) continue;
        std::vector<int> both;
        for (int v : lbg.members(u))
            if (!is_query(v)) both.push_back(v);
        std::vector<int> on;
        const auto& mw = lbg.members(w);
        std::set_intersection(both.begin(), both.end(), mw.begin(), mw.end(), std::back_inserter(on));
        const auto k = static_cast<long long>(on.size());
        iface_pairs += k * (k - 1);
        max_iface = std::max(max_iface, static_cast<int>(k));
        for (int v : on) {
            iface_share[static_cast<std::size_t>(v)] += static_cast<int>(k - 1);
            r.max_interfaces = std::max(r.max_interfaces, ++iface_count[static_cast<std::size_t>(v)]);
        }
    }
    r.edge_bound = triplet_pairs + iface_pairs;

    std::vector<int> trip_out(static_cast<std::size_t>(lbg.num_vertices()), 0);
    int max_trip = 0;
    for (const auto& e : lbg.edges()) {
        if (is_query(e.from) || is_query(e.to)) continue;
        ++r.edges;
        if (e.kind == LbgEdgeKind::Triplet)
            max_trip = std::max(max_trip, ++trip_out[static_cast<std::size_t>(e.from)]);
    }
    for (int v = 0; v < lbg.num_vertices(); ++v) {
        if (is_query(v)) continue;
        ++r.vertices;
        int deg = 0;
        for (int e : lbg.out_edges(v)) deg += !is_query(lbg.edges()[static_cast<std::size_t>(e)].to);
        r.max_degree = std::max(r.max_degree, deg);
        if (deg > iface_share[static_cast<std::size_t>(v)] + trip_out[static_cast<std::size_t>(v)]) r.degree_ok = false;
    }
    r.degree_bound = std::max(1, r.max_interfaces) * std::max(0, max_iface - 1) + max_trip;
    return r;
}

// ---------------------------------------------------------------------------
// Cache file

inline constexpr const char* kLbgMagic = "ixg-lbg";
inline constexpr int kLbgVersion = 1;

/// Text dump: header, options, vertices, edges, triplet trajectories.
inline void save_lbg(std::ostream& os, const LowerBoundGraph& lbg, const std::string& scenario_key) {
    const auto& o = lbg.options();
    os.precision(17);
    os << kLbgMagic << ' ' << kLbgVersion << '\n';
    os << "key " << (scenario_key.empty() ? "-" : scenario_key) << '\n';
    os << "weights " << o.weights.a << ' ' << o.weights.b << '\n';
    os << "vmax " << o.velocity.vmax.size();
    for (Eigen::Index i = 0; i < o.velocity.vmax.size(); ++i) os << ' ' << o.velocity.vmax[i];
    os << '\n';
    os << "interface " << (o.interface_cost == InterfaceCost::Zero ? "zero" : "chord") << '\n';
    os << "sets " << lbg.num_sets() << '\n';
    os << "infeasible_triplets " << lbg.infeasible_triplets() << '\n';
    const int d = lbg.num_vertices() ? static_cast<int>(lbg.vertex(0).point.size()) : 0;
    os << "vertices " << lbg.num_vertices() << ' ' << d << '\n';
    for (const auto& v : lbg.vertices()) {
        os << v.owner << ' ' << v.iface_a << ' ' << v.iface_b << ' ' << (v.closure ? 1 : 0);
        for (Eigen::Index i = 0; i < v.point.size(); ++i) os << ' ' << v.point[i];
        os << '\n';
    }
    os << "edges " << lbg.num_edges() << '\n';
    for (const auto& e : lbg.edges()) os << e.from << ' ' << e.to << ' ' << e.cost << ' ' << to_string(e.kind) << '\n';
    os << "members\n";
    for (int s = 0; s < lbg.num_sets(); ++s) {
        os << lbg.members(s).size();
        for (int v : lbg.members(s)) os << ' ' << v;
        os << '\n';
    }
    os << "queries " << lbg.query_vertices().size();
    for (int v : lbg.query_vertices()) os << ' ' << v;
    os << '\n';
    os << "triplets " << lbg.triplets().size() << '\n';
    for (const auto& [key, traj] : lbg.triplets()) {
        const auto& seg = traj.segments().front();
        os << std::get<0>(key) << ' ' << std::get<1>(key) << ' ' << std::get<2>(key) << ' ' << seg.duration << ' '
           << seg.control_points.size();
        for (const auto& cp : seg.control_points)
            for (Eigen::Index i = 0; i < cp.size(); ++i) os << ' ' << cp[i];
        os << '\n';
    }
    os << "end\n";
}

/// Reads a dump written by save_lbg. Throws ParseError on a malformed file
/// and StateError when `expected_key` is non-empty and differs.
inline LowerBoundGraph load_lbg(std::istream& is, const std::string& expected_key = {}) {
    auto fail = [](const std::string& what) -> void { throw ParseError("load_lbg: " + what); };
    auto expect = [&](const char* word) {
        std::string w;
        if (!(is >> w) || w != word) fail(std::string("expected '") + word + "'");
    };
    std::string magic;
    int version = 0;
    if (!(is >> magic >> version) || magic != kLbgMagic) fail("not an LBG cache file");
    if (version != kLbgVersion) fail("unsupported version " + std::to_string(version));
    LowerBoundGraph lbg;
    auto& o = LbgAccess::options(lbg);
    std::string key;
    expect("key");
    is >> key;
    if (!expected_key.empty() && key != expected_key) throw StateError("load_lbg: cache key mismatch");
    double a = 0, b = 0;
    expect("weights");
    is >> a >> b;
    o.weights = CostWeights(a, b);
    int dv = 0;
    expect("vmax");
    is >> dv;
    Eigen::VectorXd vm(dv);
    for (int i = 0; i < dv; ++i) {
        std::string tok;
        is >> tok;
        vm[i] = std::stod(tok);
    }
    if (dv > 0) o.velocity = VelocitySet(vm);
    std::string mode;
    expect("interface");
    is >> mode;
    if (mode == "zero") o.interface_cost = InterfaceCost::Zero;
    else if (mode == "chord") o.interface_cost = InterfaceCost::Chord;
    else fail("unknown interface mode " + mode);
    int nsets = 0;
    expect("sets");
    is >> nsets;
    expect("infeasible_triplets");
    is >> LbgAccess::infeasible(lbg);
    int nv = 0, d = 0;
    expect("vertices");
    is >> nv >> d;
    for (int i = 0; i < nv; ++i) {
        LbgVertex v;
        int closure = 0;
        is >> v.owner >> v.iface_a >> v.iface_b >> closure;
        v.closure = closure != 0;
        v.point.resize(d);
        for (int m = 0; m < d; ++m) is >> v.point[m];
        LbgAccess::add_vertex(lbg, std::move(v));
    }
    int ne = 0;
    expect("edges");
    is >> ne;
    for (int i = 0; i < ne; ++i) {
        int u = 0, v = 0;
        double c = 0;
        std::string kind;
        is >> u >> v >> c >> kind;
        if (u < 0 || v < 0 || u >= nv || v >= nv) fail("edge endpoint out of range");
        const LbgEdgeKind k = kind == "triplet" ? LbgEdgeKind::Triplet
                              : kind == "interface" ? LbgEdgeKind::Interface
                                                    : LbgEdgeKind::Query;
        LbgAccess::add_edge(lbg, u, v, c, k);
    }
    expect("members");
    auto& mem = LbgAccess::members(lbg);
    mem.assign(static_cast<std::size_t>(nsets), {});
    for (int s = 0; s < nsets; ++s) {
        std::size_t k = 0;
        is >> k;
        mem[static_cast<std::size_t>(s)].resize(k);
        for (auto& v : mem[static_cast<std::size_t>(s)]) is >> v;
    }
    std::size_t nq = 0;
    expect("queries");
    is >> nq;
    LbgAccess::queries(lbg).resize(nq);
    for (auto& v : LbgAccess::queries(lbg)) is >> v;
    std::size_t nt = 0;
    expect("triplets");
    is >> nt;
    for (std::size_t i = 0; i < nt; ++i) {
        int p = 0, c = 0, s = 0;
        std::size_t ncp = 0;
        TrajectorySegment seg;
        is >> p >> c >> s >> seg.duration >> ncp;
        seg.set_id = c;
        for (std::size_t j = 0; j < ncp; ++j) {
            Point cp(d);
            for (int m = 0; m < d; ++m) is >> cp[m];
            seg.control_points.push_back(std::move(cp));
        }
        LbgAccess::triplets(lbg).emplace(TripletKey{p, c, s}, Trajectory({std::move(seg)}, 0));
    }
    expect("end");
    if (!is) fail("truncated file");
    return lbg;
}

}  // namespace ixg
