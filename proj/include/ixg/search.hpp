#pragma once

// IxG (set-space best-first search with a CLOSED list) and IxG* (path-space
// search with lower-bound pruning), both interleaving sequence solves.

#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <queue>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "ixg/errors.hpp"
#include "ixg/gcs_graph.hpp"
#include "ixg/lbg.hpp"
#include "ixg/trajopt/sequence.hpp"

namespace ixg {

/// g + eps * l.
inline double key(double g, double l, double eps) {
    if (!std::isfinite(l)) return std::numeric_limits<double>::infinity();
    return g + eps * l;
}

enum class UpperBoundMode { Paper, Tight };

struct PlannerConfig {
    double epsilon = 1.0;
    bool allow_cycles = false;
    int max_visits_per_vertex = 3;
    bool escalate_visits = false;  // double the visit budget and retry on Infeasible
    int max_visits_cap = 16;
    UpperBoundMode upper_bound_mode = UpperBoundMode::Tight;
    bool use_upper_bound = true;  // IxG*: run IxG first and prune against it
    int order = 3;
    int continuity = 1;
    CostWeights weights;
    VelocitySet velocity;
    double validate_tol = 1e-6;
    double prune_tol = 1e-9;
    long long max_expansions = 1000000;
    double max_seconds = std::numeric_limits<double>::infinity();
    bool trace = false;

    void check() const {
        if (!(epsilon >= 1.0)) throw ArgumentError("PlannerConfig: epsilon must be >= 1");
        if (max_visits_per_vertex < 1) throw ArgumentError("PlannerConfig: max_visits_per_vertex must be >= 1");
        if (order < 1) throw ArgumentError("PlannerConfig: order must be >= 1");
        if (continuity < 0 || continuity > 1) throw ArgumentError("PlannerConfig: continuity must be 0 or 1");
        if (continuity == 1 && order < 1) throw ArgumentError("PlannerConfig: C1 needs order >= 1");
    }
};

enum class PlanStatus { Solved, Infeasible, BudgetExhausted };

inline const char* to_string(PlanStatus s) {
    switch (s) {
        case PlanStatus::Solved: return "Solved";
        case PlanStatus::Infeasible: return "Infeasible";
        case PlanStatus::BudgetExhausted: return "BudgetExhausted";
    }
    return "?";
}

struct PlanStats {
    long long expansions = 0;
    std::vector<int> expansions_per_vertex;
    long long reexpansions = 0;     // sum over vertices of max(0, pops - 1)
    long long solve_calls = 0;      // solve_sequence invocations, upper-bound run included
    long long upper_bound_solve_calls = 0;
    long long cached_solves = 0;    // sequence solves answered from the per-plan memo
    long long counter_delta = 0;    // process-wide solve counter change over the call
    long long pruned = 0;
    int max_decision_vars = 0;
    double wall_seconds = 0.0;
    double upper_bound = std::numeric_limits<double>::infinity();
    double start_lower_bound = 0.0;
    double certificate = std::numeric_limits<double>::infinity();  // cost / certified lower bound
    int visits_budget_used = 0;
};

struct PlanResult {
    PlanStatus status = PlanStatus::Infeasible;
    std::vector<int> path;  // graph ids, start and goal vertices included
    Trajectory trajectory;
    double cost = std::numeric_limits<double>::infinity();
    PlanStats stats;
    std::vector<std::string> trace;  // one line per pop when cfg.trace
};

/// Wired graph, LBG with both query points, and the heuristic.
struct PlanningProblem {
    GcsGraph graph;
    Query query;
    LowerBoundGraph lbg;
    HeuristicTable heuristic;
    double prepare_seconds = 0.0;
};

/// Wires `q` into `g`, inserts both endpoints into a copy of `base`, and runs
/// the backward Dijkstra.
inline PlanningProblem prepare(const GcsGraph& g, const LowerBoundGraph& base, const Query& q) {
    const auto t0 = std::chrono::steady_clock::now();
    PlanningProblem p;
    p.query = q;
    p.graph = g.wired() ? g : wire_query(g, q);
    p.lbg = base;
    update_lbg_in_place(p.graph, p.lbg, q.start);
    update_lbg_in_place(p.graph, p.lbg, q.goal);
    p.heuristic = backward_dijkstra(p.lbg, p.graph, q.goal);
    p.prepare_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return p;
}

namespace detail {

struct CachedSolve {
    bool ok = false;
    Trajectory trajectory;
    double cost = std::numeric_limits<double>::infinity();
    int num_vars = 0;
};

// Sequence solves memoized by id sequence for one planning call.
class SolveCache {
public:
    SolveCache(const PlanningProblem& pb, const PlannerConfig& cfg) : pb_(pb), cfg_(cfg) {}

    const CachedSolve& solve(const std::vector<int>& path, const Trajectory* warm, PlanStats& st) {
        auto it = memo_.find(path);
        if (it != memo_.end()) {
            ++st.cached_solves;
            return it->second;
        }
        SeqProgram prog = make_program(pb_.graph, path, &pb_.query, cfg_.order, cfg_.continuity, cfg_.weights,
                                       cfg_.velocity);
        if (warm != nullptr && !warm->empty()) prog.warm_start = *warm;
        ++st.solve_calls;
        const SolveResult res = solve_sequence(std::move(prog));
        CachedSolve c;
        c.num_vars = res.num_vars;
        st.max_decision_vars = std::max(st.max_decision_vars, res.num_vars);
        if (res.ok()) {
            const bool complete = path.back() == pb_.graph.goal_id();
            const ValidityReport rep = validate(res.trajectory, pb_.graph, cfg_.velocity, cfg_.validate_tol,
                                                complete ? &pb_.query : nullptr);
            bool start_ok = (res.trajectory.start() - pb_.query.start).norm() <= cfg_.validate_tol;
            if (rep.valid() && start_ok) {
                c.ok = true;
                c.trajectory = res.trajectory;
                c.cost = res.cost;
            }
        }
        return memo_.emplace(path, std::move(c)).first->second;
    }

private:
    const PlanningProblem& pb_;
    const PlannerConfig& cfg_;
    std::map<std::vector<int>, CachedSolve> memo_;
};

// Parent trajectory with its last segment swapped for the cached triplet
// through that set, as a seed for the extended program.
inline std::optional<Trajectory> warm_start_for(const PlanningProblem& pb, const std::vector<int>& path,
                                                const Trajectory& parent, int succ) {
    if (parent.empty()) return std::nullopt;
    Trajectory w = parent;
    const auto n = path.size();
    if (n >= 3 && succ != pb.graph.goal_id()) {
        const int pred = path[n - 2];
        const int c = path[n - 1];
        if (auto t = lookup_triplet(pb.lbg, pred, c, succ)) {
            TrajectorySegment seg = t->segments().front();
            seg.set_id = c;
            seg.control_points.front() = w.segments().back().control_points.front();
            w.segments().back() = seg;
        }
    }
    return w;
}

inline std::string path_string(const std::vector<int>& path) {
    std::ostringstream os;
    for (std::size_t i = 0; i < path.size(); ++i) os << (i ? " " : "") << path[i];
    return os.str();
}

inline void finish_stats(PlanStats& st, const std::chrono::steady_clock::time_point& t0, long long calls0) {
    st.counter_delta = solve_call_counter().load() - calls0;
    st.reexpansions = 0;
    for (int c : st.expansions_per_vertex) st.reexpansions += std::max(0, c - 1);
    st.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

inline bool out_of_budget(const PlanStats& st, const PlannerConfig& cfg, const std::chrono::steady_clock::time_point& t0) {
    if (st.expansions >= cfg.max_expansions) return true;
    if (std::isfinite(cfg.max_seconds) &&
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() > cfg.max_seconds)
        return true;
    return false;
}

inline void check_problem(const PlanningProblem& pb, const PlannerConfig& cfg) {
    cfg.check();
    if (!pb.graph.wired()) throw StateError("plan: graph has no wired query");
    const auto& o = pb.lbg.options();
    if (std::abs(o.weights.a - cfg.weights.a) > 1e-12 || std::abs(o.weights.b - cfg.weights.b) > 1e-12)
        throw ArgumentError("plan: LBG was built with different cost weights");
}

inline PlanResult ixg_impl(const PlanningProblem& pb, const PlannerConfig& cfg, SolveCache& cache) {
    const auto t0 = std::chrono::steady_clock::now();
    const GcsGraph& g = pb.graph;
    const int n = g.num_vertices();
    const int start = g.start_id();
    const int goal = g.goal_id();
    const double inf = std::numeric_limits<double>::infinity();
    const long long calls0 = solve_call_counter().load();

    PlanResult out;
    auto& st = out.stats;
    st.expansions_per_vertex.assign(static_cast<std::size_t>(n), 0);
    st.start_lower_bound = pb.heuristic.l(start);

    struct Node {
        double g = std::numeric_limits<double>::infinity();
        std::vector<int> path;
        Trajectory traj;
        long long version = 0;
    };
    std::vector<Node> nodes(static_cast<std::size_t>(n));
    std::vector<char> closed(static_cast<std::size_t>(n), 0);
    struct Item {
        double key, g;
        long long seq;
        int id;
        long long version;
    };
    auto worse = [](const Item& a, const Item& b) {
        if (a.key != b.key) return a.key > b.key;
        if (a.g != b.g) return a.g < b.g;
        return a.seq > b.seq;
    };
    std::priority_queue<Item, std::vector<Item>, decltype(worse)> open(worse);
    long long seq = 0;

    nodes[static_cast<std::size_t>(start)].g = 0.0;
    nodes[static_cast<std::size_t>(start)].path = {start};
    open.push({key(0.0, pb.heuristic.l(start), cfg.epsilon), 0.0, seq++, start, 0});

    while (!open.empty()) {
        const Item it = open.top();
        open.pop();
        Node& cur = nodes[static_cast<std::size_t>(it.id)];
        if (closed[static_cast<std::size_t>(it.id)] || it.version != cur.version) continue;
        if (out_of_budget(st, cfg, t0)) {
            out.status = PlanStatus::BudgetExhausted;
            finish_stats(st, t0, calls0);
            return out;
        }
        ++st.expansions;
        ++st.expansions_per_vertex[static_cast<std::size_t>(it.id)];
        if (cfg.trace) {
            std::ostringstream os;
            os << "pop key=" << it.key << " g=" << cur.g << " l=" << pb.heuristic.l(it.id) << " path=" << path_string(cur.path);
            out.trace.push_back(os.str());
        }
        if (it.id == goal) {
            out.status = PlanStatus::Solved;
            out.path = cur.path;
            out.trajectory = cur.traj;
            out.cost = cur.g;
            st.certificate = st.start_lower_bound > 0.0 ? out.cost / st.start_lower_bound : inf;
            finish_stats(st, t0, calls0);
            return out;
        }
        closed[static_cast<std::size_t>(it.id)] = 1;
        const std::vector<int> base = cur.path;
        const Trajectory parent = cur.traj;
        for (int s : g.successors(it.id)) {
            if (closed[static_cast<std::size_t>(s)]) continue;
            const double l = pb.heuristic.l(s);
            if (!std::isfinite(l)) continue;
            std::vector<int> path = base;
            path.push_back(s);
            const auto warm = warm_start_for(pb, base, parent, s);
            const CachedSolve& res = cache.solve(path, warm ? &*warm : nullptr, st);
            if (!res.ok) continue;
            Node& nx = nodes[static_cast<std::size_t>(s)];
            if (res.cost < nx.g) {
                nx.g = res.cost;
                nx.path = std::move(path);
                nx.traj = res.trajectory;
                ++nx.version;
                open.push({key(nx.g, l, cfg.epsilon), nx.g, seq++, s, nx.version});
            }
        }
    }
    out.status = PlanStatus::Infeasible;
    finish_stats(st, t0, calls0);
    return out;
}

inline PlanResult ixg_star_impl(const PlanningProblem& pb, const PlannerConfig& cfg, int max_visits) {
    const auto t0 = std::chrono::steady_clock::now();
    const GcsGraph& g = pb.graph;
    const int n = g.num_vertices();
    const int start = g.start_id();
    const int goal = g.goal_id();
    const double inf = std::numeric_limits<double>::infinity();
    const long long calls0 = solve_call_counter().load();

    PlanResult out;
    auto& st = out.stats;
    st.expansions_per_vertex.assign(static_cast<std::size_t>(n), 0);
    st.start_lower_bound = pb.heuristic.l(start);
    st.visits_budget_used = max_visits;
    SolveCache cache(pb, cfg);

    double u = inf;
    if (cfg.use_upper_bound) {
        PlannerConfig sub = cfg;
        sub.trace = false;
        const PlanResult ub = ixg_impl(pb, sub, cache);
        st.upper_bound_solve_calls = ub.stats.solve_calls;
        st.solve_calls += ub.stats.solve_calls;
        st.cached_solves += ub.stats.cached_solves;
        st.max_decision_vars = std::max(st.max_decision_vars, ub.stats.max_decision_vars);
        if (ub.status == PlanStatus::Solved) u = cfg.epsilon * ub.cost;
    }
    st.upper_bound = u;
    const double bound = cfg.upper_bound_mode == UpperBoundMode::Paper ? cfg.epsilon * u : u;
    auto pruned = [&](double k) { return k > bound + cfg.prune_tol * std::max(1.0, std::abs(bound)); };

    struct PathNode {
        int parent;
        int vertex;
        int depth;
        double g;
        Trajectory traj;
    };
    std::vector<PathNode> nodes;
    auto path_of = [&](int idx) {
        std::vector<int> p(static_cast<std::size_t>(nodes[static_cast<std::size_t>(idx)].depth));
        for (int i = idx; i >= 0; i = nodes[static_cast<std::size_t>(i)].parent)
            p[static_cast<std::size_t>(nodes[static_cast<std::size_t>(i)].depth - 1)] = nodes[static_cast<std::size_t>(i)].vertex;
        return p;
    };
    struct Item {
        double key, g;
        long long seq;
        int node;
    };
    auto worse = [](const Item& a, const Item& b) {
        if (a.key != b.key) return a.key > b.key;
        if (a.g != b.g) return a.g < b.g;
        return a.seq > b.seq;
    };
    std::priority_queue<Item, std::vector<Item>, decltype(worse)> open(worse);
    long long seq = 0;

    nodes.push_back({-1, start, 1, 0.0, Trajectory{}});
    open.push({key(0.0, pb.heuristic.l(start), cfg.epsilon), 0.0, seq++, 0});

    auto done = [&](PlanStatus s) {
        out.status = s;
        finish_stats(st, t0, calls0);
    };
    int best_goal = -1;  // cheapest generated goal path, reported on budget exhaustion

    while (!open.empty()) {
        const Item it = open.top();
        open.pop();
        if (out_of_budget(st, cfg, t0)) {
            if (best_goal >= 0) {
                out.path = path_of(best_goal);
                out.trajectory = nodes[static_cast<std::size_t>(best_goal)].traj;
                out.cost = nodes[static_cast<std::size_t>(best_goal)].g;
            }
            done(PlanStatus::BudgetExhausted);
            return out;
        }
        const int vid = nodes[static_cast<std::size_t>(it.node)].vertex;
        ++st.expansions;
        ++st.expansions_per_vertex[static_cast<std::size_t>(vid)];
        const std::vector<int> path = path_of(it.node);
        if (cfg.trace) {
            std::ostringstream os;
            os << "pop key=" << it.key << " g=" << it.g << " l=" << pb.heuristic.l(vid) << " path=" << path_string(path);
            out.trace.push_back(os.str());
        }
        if (vid == goal) {
            const PathNode& nd = nodes[static_cast<std::size_t>(it.node)];
            out.path = path;
            out.trajectory = nd.traj;
            out.cost = nd.g;
            const double lb = std::max(st.start_lower_bound, out.cost / cfg.epsilon);
            st.certificate = lb > 0.0 ? out.cost / lb : (out.cost > 0.0 ? inf : 1.0);
            done(PlanStatus::Solved);
            return out;
        }
        const Trajectory parent = nodes[static_cast<std::size_t>(it.node)].traj;
        const int depth = nodes[static_cast<std::size_t>(it.node)].depth;
        for (int s : g.successors(vid)) {
            int visits = 0;
            for (int x : path) visits += x == s;
            if (visits > 0 && !cfg.allow_cycles) continue;
            if (visits >= max_visits) continue;
            const double l = pb.heuristic.l(s);
            if (!std::isfinite(l)) continue;
            std::vector<int> ext = path;
            ext.push_back(s);
            const auto warm = warm_start_for(pb, path, parent, s);
            const CachedSolve& res = cache.solve(ext, warm ? &*warm : nullptr, st);
            if (!res.ok) continue;
            const double k = key(res.cost, l, cfg.epsilon);
            if (pruned(k)) {
                ++st.pruned;
                continue;
            }
            nodes.push_back({it.node, s, depth + 1, res.cost, res.trajectory});
            const int idx = static_cast<int>(nodes.size()) - 1;
            if (s == goal && (best_goal < 0 || res.cost < nodes[static_cast<std::size_t>(best_goal)].g)) best_goal = idx;
            open.push({k, res.cost, seq++, idx});
        }
    }
    done(PlanStatus::Infeasible);
    return out;
}

}  // namespace detail

/// IxG: best-first over sets with a CLOSED list; no optimality claim.
inline PlanResult plan_ixg(const PlanningProblem& pb, const PlannerConfig& cfg) {
    detail::check_problem(pb, cfg);
    detail::SolveCache cache(pb, cfg);
    return detail::ixg_impl(pb, cfg, cache);
}

/// IxG*: best-first over paths, pruned against the IxG upper bound.
inline PlanResult plan_ixg_star(const PlanningProblem& pb, const PlannerConfig& cfg) {
    detail::check_problem(pb, cfg);
    int visits = cfg.allow_cycles ? cfg.max_visits_per_vertex : 1;
    PlanResult res = detail::ixg_star_impl(pb, cfg, visits);
    if (!cfg.allow_cycles || !cfg.escalate_visits) return res;
    PlanStats total = res.stats;
    while (res.status == PlanStatus::Infeasible && visits * 2 <= cfg.max_visits_cap) {
        visits *= 2;
        res = detail::ixg_star_impl(pb, cfg, visits);
        total.expansions += res.stats.expansions;
        total.solve_calls += res.stats.solve_calls;
        total.upper_bound_solve_calls += res.stats.upper_bound_solve_calls;
        total.cached_solves += res.stats.cached_solves;
        total.pruned += res.stats.pruned;
        total.wall_seconds += res.stats.wall_seconds;
        total.counter_delta += res.stats.counter_delta;
        for (std::size_t i = 0; i < total.expansions_per_vertex.size(); ++i)
            total.expansions_per_vertex[i] += res.stats.expansions_per_vertex[i];
    }
    total.reexpansions = 0;
    for (int c : total.expansions_per_vertex) total.reexpansions += std::max(0, c - 1);
    total.max_decision_vars = std::max(total.max_decision_vars, res.stats.max_decision_vars);
    total.upper_bound = res.stats.upper_bound;
    total.certificate = res.stats.certificate;
    total.visits_budget_used = visits;
    res.stats = total;
    return res;
}

/// Path and trajectory of a solved plan.
inline std::pair<std::vector<int>, Trajectory> reconstruct(const PlanResult& r) {
    if (r.status != PlanStatus::Solved) throw StateError("reconstruct: plan is not solved");
    return {r.path, r.trajectory};
}

/// Stats as a JSON object (hand-written to keep this header free of a JSON dependency).
inline void write_stats_json(std::ostream& os, const PlanResult& r) {
    auto num = [](double v) {
        if (std::isfinite(v)) {
            std::ostringstream s;
            s.precision(17);
            s << v;
            return s.str();
        }
        return std::string("null");
    };
    const auto& s = r.stats;
    os << "{\n";
    os << "  \"status\": \"" << to_string(r.status) << "\",\n";
    os << "  \"cost\": " << num(r.cost) << ",\n";
    os << "  \"path\": [";
    for (std::size_t i = 0; i < r.path.size(); ++i) os << (i ? ", " : "") << r.path[i];
    os << "],\n";
    os << "  \"expansions\": " << s.expansions << ",\n";
    os << "  \"reexpansions\": " << s.reexpansions << ",\n";
    os << "  \"expansions_per_vertex\": [";
    for (std::size_t i = 0; i < s.expansions_per_vertex.size(); ++i) os << (i ? ", " : "") << s.expansions_per_vertex[i];
    os << "],\n";
    os << "  \"optimized_edges\": " << s.solve_calls << ",\n";
    os << "  \"upper_bound_optimized_edges\": " << s.upper_bound_solve_calls << ",\n";
    os << "  \"cached_solves\": " << s.cached_solves << ",\n";
    os << "  \"pruned\": " << s.pruned << ",\n";
    os << "  \"max_decision_vars\": " << s.max_decision_vars << ",\n";
    os << "  \"wall_seconds\": " << num(s.wall_seconds) << ",\n";
    os << "  \"upper_bound\": " << num(s.upper_bound) << ",\n";
    os << "  \"start_lower_bound\": " << num(s.start_lower_bound) << ",\n";
    os << "  \"certificate\": " << num(s.certificate) << "\n";
    os << "}\n";
}

}  // namespace ixg
