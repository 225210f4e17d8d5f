#pragma once

// Brute-force ground truth: solve every start-to-goal set sequence.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include "ixg/errors.hpp"
#include "ixg/gcs_graph.hpp"
#include "ixg/search.hpp"

namespace ixg {

struct OracleOptions {
    long long path_cap = 1'000'000;  // enumerated prefixes, not only complete paths
    /// Solve prefixes and drop those that are infeasible or whose cost plus
    /// the straight-line cost from the last set's bounding box to the goal
    /// already exceeds the best complete path. Exact: extending a path only
    /// adds constraints and cost, and any completion must cover that gap.
    /// Children are visited cheapest bound first.
    bool branch_and_bound = false;
    double bound_tol = 1e-9;
    /// Incumbent cost before enumeration. Only strictly cheaper paths are
    /// reported, so Infeasible then means no path beats it.
    double initial_bound = std::numeric_limits<double>::infinity();
};

/// Minimum-cost trajectory over all paths with each vertex visited at most
/// `max_visits` times. Uses cfg.order, continuity, weights, velocity and
/// validate_tol; the search-specific fields are ignored.
inline PlanResult oracle_enumerate(const GcsGraph& g, const Query& q, int max_visits, const PlannerConfig& cfg,
                                   const OracleOptions& opt = {}) {
    if (max_visits < 1) throw ArgumentError("oracle_enumerate: max_visits must be >= 1");
    const auto t0 = std::chrono::steady_clock::now();
    const long long calls0 = solve_call_counter().load();

    PlanningProblem pb;
    pb.query = q;
    pb.graph = g.wired() ? g : wire_query(g, q);
    const GcsGraph& G = pb.graph;
    const int start = G.start_id();
    const int goal = G.goal_id();

    PlanResult out;
    auto& st = out.stats;
    st.expansions_per_vertex.assign(static_cast<std::size_t>(G.num_vertices()), 0);
    detail::SolveCache cache(pb, cfg);

    std::vector<int> path{start};
    std::vector<int> visits(static_cast<std::size_t>(G.num_vertices()), 0);
    visits[static_cast<std::size_t>(start)] = 1;
    double best = opt.initial_bound;
    long long enumerated = 0;

    auto over_bound = [&](double c) { return c > best + opt.bound_tol * std::max(1.0, std::abs(best)); };

    // Cost of covering the gap between each set's bounding box and the goal.
    std::vector<double> to_go(static_cast<std::size_t>(G.num_vertices()), 0.0);
    if (opt.branch_and_bound) {
        for (int v = 0; v < G.num_vertices(); ++v) {
            if (v == start || v == goal) continue;
            const BoundingBox bb = bounding_box(G.set(v));
            const Point gap = (bb.lo - q.goal).cwiseMax(q.goal - bb.hi).cwiseMax(0.0);
            double t = 0.0;
            for (Eigen::Index m = 0; m < gap.size(); ++m)
                if (cfg.velocity.dim() == gap.size() && std::isfinite(cfg.velocity.vmax[m]))
                    t = std::max(t, gap[m] / cfg.velocity.vmax[m]);
            to_go[static_cast<std::size_t>(v)] = cfg.weights.a * gap.norm() + cfg.weights.b * t;
        }
    }

    auto dfs = [&](auto&& self) -> void {
        if (++enumerated > opt.path_cap)
            throw OracleTooLarge("oracle_enumerate: more than " + std::to_string(opt.path_cap) + " paths");
        const int v = path.back();
        ++st.expansions;
        ++st.expansions_per_vertex[static_cast<std::size_t>(v)];
        if (v == goal) {
            const auto& res = cache.solve(path, nullptr, st);
            if (res.ok && res.cost < best) {
                best = res.cost;
                out.path = path;
                out.trajectory = res.trajectory;
                out.cost = res.cost;
            }
            return;
        }
        std::vector<std::pair<double, int>> next;
        for (int s : G.successors(v)) {
            if (visits[static_cast<std::size_t>(s)] >= max_visits) continue;
            double lb = 0.0;
            if (opt.branch_and_bound && s != goal) {
                path.push_back(s);
                const auto& res = cache.solve(path, nullptr, st);
                path.pop_back();
                lb = res.ok ? res.cost + to_go[static_cast<std::size_t>(s)] : std::numeric_limits<double>::infinity();
            }
            next.emplace_back(lb, s);
        }
        std::stable_sort(next.begin(), next.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
        for (const auto& [lb, s] : next) {
            // The incumbent may have improved since the bound was computed.
            if (opt.branch_and_bound && (!std::isfinite(lb) || over_bound(lb))) {
                ++st.pruned;
                continue;
            }
            auto& cnt = visits[static_cast<std::size_t>(s)];
            ++cnt;
            path.push_back(s);
            self(self);
            path.pop_back();
            --cnt;
        }
    };
    dfs(dfs);

    out.status = out.path.empty() ? PlanStatus::Infeasible : PlanStatus::Solved;
    st.upper_bound = best;
    detail::finish_stats(st, t0, calls0);
    return out;
}

}  // namespace ixg
