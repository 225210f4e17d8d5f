#pragma once

// Trajectory optimization over a fixed sequence of convex sets.

#include <Eigen/Dense>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <iomanip>
#include <limits>
#include <initializer_list>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "ixg/errors.hpp"
#include "ixg/gcs_graph.hpp"
#include "ixg/geometry/convex_set.hpp"
#include "ixg/trajopt/conic.hpp"
#include "ixg/trajopt/trajectory.hpp"

namespace ixg {

/// Conditions on the first point of the first segment (or last point of the
/// last). `point` fixes it; otherwise it is free in its set and, if given,
/// also in `region`. `velocity` fixes the time-domain derivative.
struct BoundaryCondition {
    std::optional<Point> point;
    std::optional<ConvexSet> region;
    std::optional<Eigen::VectorXd> velocity;
};

struct SeqProgram {
    std::vector<ConvexSet> sets;  // one per segment, in order
    std::vector<int> set_ids;     // graph ids matching `sets`
    BoundaryCondition start;
    BoundaryCondition finish;
    int order = 3;
    int continuity = 1;
    CostWeights weights;
    VelocitySet velocity;
    std::optional<Trajectory> warm_start;
    double max_duration = 0.0;  // per segment; 0 picks a bound that never binds
};

enum class ConstraintClass { Containment, Velocity, Boundary, Duration, Continuity };

inline const char* to_string(ConstraintClass c) {
    switch (c) {
        case ConstraintClass::Containment: return "containment";
        case ConstraintClass::Velocity: return "velocity";
        case ConstraintClass::Boundary: return "boundary";
        case ConstraintClass::Duration: return "duration";
        case ConstraintClass::Continuity: return "continuity";
    }
    return "?";
}

enum class SolveStatus { Optimal, Infeasible, Stalled };

struct SolveResult {
    SolveStatus status = SolveStatus::Stalled;
    Trajectory trajectory;
    double cost = std::numeric_limits<double>::infinity();
    std::optional<ConstraintClass> violated;  // set when Infeasible
    int num_vars = 0;
    int newton_steps = 0;

    bool ok() const noexcept { return status == SolveStatus::Optimal; }
};

/// Number of solve_sequence invocations in this process.
inline std::atomic<long long>& solve_call_counter() {
    static std::atomic<long long> n{0};
    return n;
}

/// Program for a vertex path of `g`. Query vertices at either end become
/// fixed endpoints (with the query velocities, if any); other ends are free.
inline SeqProgram make_program(const GcsGraph& g, const std::vector<int>& path, const Query* q,
                               int order, int continuity, const CostWeights& w, const VelocitySet& v) {
    SeqProgram p;
    p.order = order;
    p.continuity = continuity;
    p.weights = w;
    p.velocity = v;
    std::size_t lo = 0;
    std::size_t hi = path.size();
    if (hi > 0 && g.wired() && path.front() == g.start_id()) {
        if (q == nullptr) throw ArgumentError("make_program: query vertex without query");
        p.start.point = q->start;
        p.start.velocity = q->start_velocity;
        ++lo;
    }
    if (hi > lo && g.wired() && path.back() == g.goal_id()) {
        if (q == nullptr) throw ArgumentError("make_program: query vertex without query");
        p.finish.point = q->goal;
        p.finish.velocity = q->goal_velocity;
        --hi;
    }
    for (std::size_t i = lo; i < hi; ++i) {
        p.set_ids.push_back(path[i]);
        p.sets.push_back(g.set(path[i]));
    }
    return p;
}

namespace detail {

// A control point as d affine expressions in the decision variables. `base`
// is set when the point owns d fresh variables (used for warm starts).
struct PointVar {
    std::vector<conic::Row> coords;
    int base = -1;

    bool fixed() const {
        for (const auto& c : coords)
            if (!c.terms.empty()) return false;
        return true;
    }
    Point value(const Eigen::VectorXd& x) const {
        Point p(static_cast<Eigen::Index>(coords.size()));
        for (std::size_t m = 0; m < coords.size(); ++m) p[static_cast<Eigen::Index>(m)] = coords[m].eval(x);
        return p;
    }
};

inline void add_coord(conic::Row& row, const PointVar& pv, int m, double coeff) {
    const auto& c = pv.coords[static_cast<std::size_t>(m)];
    row.constant += coeff * c.constant;
    for (const auto& [j, a] : c.terms) row.terms.emplace_back(j, coeff * a);
}

// Sums duplicate variable indices and drops zeros.
inline void compact(conic::Row& row) {
    if (row.terms.size() < 2) return;
    std::sort(row.terms.begin(), row.terms.end());
    std::size_t out = 0;
    for (std::size_t i = 0; i < row.terms.size(); ++i) {
        if (out > 0 && row.terms[out - 1].first == row.terms[i].first)
            row.terms[out - 1].second += row.terms[i].second;
        else
            row.terms[out++] = row.terms[i];
    }
    row.terms.resize(out);
    std::erase_if(row.terms, [](const auto& t) { return t.second == 0.0; });
}

struct Layout {
    int d = 0;
    int r = 0;
    int K = 0;
    std::vector<std::vector<PointVar>> cps;  // [segment][i]
    std::vector<int> dur;                    // duration variable per segment
    double cost_constant = 0.0;
    bool trivially_infeasible = false;
    ConstraintClass culprit = ConstraintClass::Containment;
};

inline void collapse_repeats(SeqProgram& p) {
    std::vector<ConvexSet> sets;
    std::vector<int> ids;
    for (std::size_t i = 0; i < p.sets.size(); ++i) {
        const int id = i < p.set_ids.size() ? p.set_ids[i] : -1;
        if (!ids.empty() && id >= 0 && ids.back() == id) continue;
        sets.push_back(p.sets[i]);
        ids.push_back(id);
    }
    p.sets = std::move(sets);
    p.set_ids = std::move(ids);
}

// Row that only has a constant: check it now instead of handing it to the solver.
inline bool constant_row_ok(const conic::Row& row, double rhs, bool equality) {
    const double v = row.constant - rhs;
    return equality ? std::abs(v) <= 1e-9 : v <= 1e-9;
}

// Per-segment duration cap. With every control point inside a set of width
// w, |r dc_m| <= r w_m, so T = r w_m / s_m already satisfies the velocity
// limits (s_m the smallest finite limit or nonzero boundary speed); four
// times that never binds at an optimum.
inline double duration_horizon(const SeqProgram& p) {
    double width = 0.0;
    for (const auto& s : p.sets) {
        const BoundingBox bb = bounding_box(s);
        width = std::max(width, (bb.hi - bb.lo).maxCoeff());
    }
    double speed = std::numeric_limits<double>::infinity();
    for (Eigen::Index m = 0; m < p.velocity.vmax.size(); ++m) speed = std::min(speed, p.velocity.vmax[m]);
    for (const auto* v : {&p.start.velocity, &p.finish.velocity})
        if (*v)
            for (Eigen::Index m = 0; m < (*v)->size(); ++m)
                if ((**v)[m] != 0.0) speed = std::min(speed, std::abs((**v)[m]));
    if (!std::isfinite(speed)) speed = 1.0;
    return 1.0 + 4.0 * p.order * std::max(width, 1e-3) / speed;
}

// C^1 junctions and velocity boundary conditions are substituted into the
// control points where possible; equality rows remain only when a point is
// pinned twice (low orders).
inline conic::Problem build_problem(const SeqProgram& p, Layout& L) {
    conic::Problem prob;
    L.d = p.sets.front().dim();
    L.r = p.order;
    L.K = static_cast<int>(p.sets.size());
    const int d = L.d;
    const int r = L.r;
    const int K = L.K;
    const auto rs = static_cast<std::size_t>(r);

    auto ineq = [&](conic::Row row, double rhs, ConstraintClass cls) {
        compact(row);
        if (row.terms.empty()) {
            if (!constant_row_ok(row, rhs, false)) {
                L.trivially_infeasible = true;
                L.culprit = cls;
            }
            return;
        }
        prob.add_ineq(std::move(row), rhs, static_cast<int>(cls));
    };
    auto eq = [&](conic::Row row, double rhs, ConstraintClass cls) {
        compact(row);
        if (row.terms.empty()) {
            if (!constant_row_ok(row, rhs, true)) {
                L.trivially_infeasible = true;
                L.culprit = cls;
            }
            return;
        }
        prob.add_eq(std::move(row), rhs);
    };

    auto fresh = [&]() {
        PointVar pv;
        pv.base = prob.num_vars;
        for (int m = 0; m < d; ++m) pv.coords.push_back(conic::Row{{{prob.add_var(), 1.0}}, 0.0});
        return pv;
    };
    auto constant = [&](const Point& v) {
        PointVar pv;
        for (int m = 0; m < d; ++m) pv.coords.push_back(conic::Row{{}, v[m]});
        return pv;
    };
    // sum_i w_i P_i + t * u
    auto combo = [&](std::initializer_list<std::pair<double, const PointVar*>> parts, int tvar,
                     const Eigen::VectorXd* u) {
        PointVar pv;
        for (int m = 0; m < d; ++m) {
            conic::Row row;
            for (const auto& [w, P] : parts) add_coord(row, *P, m, w);
            if (u != nullptr && (*u)[m] != 0.0) row.terms.emplace_back(tvar, (*u)[m]);
            compact(row);
            pv.coords.push_back(std::move(row));
        }
        return pv;
    };
    auto pin = [&](const PointVar& a, const PointVar& b, ConstraintClass cls) {
        for (int m = 0; m < d; ++m) {
            conic::Row row;
            add_coord(row, a, m, 1.0);
            add_coord(row, b, m, -1.0);
            eq(std::move(row), 0.0, cls);
        }
    };

    if (p.continuity >= 1) {
        const int tau = prob.add_var();
        L.dur.assign(static_cast<std::size_t>(K), tau);
    } else {
        for (int k = 0; k < K; ++k) L.dur.push_back(prob.add_var());
    }

    L.cps.assign(static_cast<std::size_t>(K), std::vector<PointVar>(rs + 1));
    for (int k = 0; k < K; ++k) {
        auto& seg = L.cps[static_cast<std::size_t>(k)];
        const bool first = k == 0;
        const bool last = k == K - 1;
        const int T = L.dur[static_cast<std::size_t>(k)];
        std::vector<char> defined(rs + 1, 0);

        if (!first) seg[0] = L.cps[static_cast<std::size_t>(k - 1)][rs];
        else if (p.start.point) seg[0] = constant(*p.start.point);
        else seg[0] = fresh();
        defined[0] = 1;

        if (last && p.finish.point) seg[rs] = constant(*p.finish.point);
        else seg[rs] = fresh();
        defined[rs] = 1;

        // c_1 from C^1 with the previous segment or from the start velocity.
        auto define = [&](std::size_t i, PointVar expr, ConstraintClass cls) {
            if (defined[i]) {
                pin(seg[i], expr, cls);
            } else {
                seg[i] = std::move(expr);
                defined[i] = 1;
            }
        };
        if (!first && p.continuity >= 1) {
            const auto& prev = L.cps[static_cast<std::size_t>(k - 1)];
            define(1, combo({{2.0, &prev[rs]}, {-1.0, &prev[rs - 1]}}, -1, nullptr), ConstraintClass::Continuity);
        } else if (first && p.start.velocity) {
            if (p.start.velocity->size() != d) throw ArgumentError("solve_sequence: boundary velocity dimension mismatch");
            const Eigen::VectorXd u = *p.start.velocity / r;
            define(1, combo({{1.0, &seg[0]}}, T, &u), ConstraintClass::Boundary);
        }
        if (last && p.finish.velocity) {
            if (p.finish.velocity->size() != d) throw ArgumentError("solve_sequence: boundary velocity dimension mismatch");
            const Eigen::VectorXd u = -*p.finish.velocity / r;
            define(rs - 1, combo({{1.0, &seg[rs]}}, T, &u), ConstraintClass::Boundary);
        }
        for (std::size_t i = 1; i < rs; ++i)
            if (!defined[i]) seg[i] = fresh();
    }

    auto contain = [&](const PointVar& pv, const ConvexSet& set, ConstraintClass cls) {
        const auto& A = set.normals();
        const auto& b = set.offsets();
        for (Eigen::Index h = 0; h < A.rows(); ++h) {
            conic::Row row;
            for (int m = 0; m < d; ++m)
                if (A(h, m) != 0.0) add_coord(row, pv, m, A(h, m));
            ineq(std::move(row), b[h], cls);
        }
    };

    // Containment (junction points are checked against both sets).
    for (int k = 0; k < K; ++k) {
        const auto& set = p.sets[static_cast<std::size_t>(k)];
        if (set.dim() != d) throw ArgumentError("solve_sequence: mixed dimensions");
        for (std::size_t i = 0; i <= rs; ++i)
            contain(L.cps[static_cast<std::size_t>(k)][i], set, ConstraintClass::Containment);
    }
    if (!p.start.point && p.start.region) contain(L.cps.front().front(), *p.start.region, ConstraintClass::Boundary);
    if (!p.finish.point && p.finish.region) contain(L.cps.back().back(), *p.finish.region, ConstraintClass::Boundary);

    // Durations.
    const double horizon = p.max_duration > 0.0 ? p.max_duration : duration_horizon(p);
    for (std::size_t k = 0; k < L.dur.size(); ++k) {
        if (k > 0 && L.dur[k] == L.dur[k - 1]) continue;
        ineq(conic::Row{{{L.dur[k], -1.0}}, 0.0}, 0.0, ConstraintClass::Duration);
        ineq(conic::Row{{{L.dur[k], 1.0}}, 0.0}, horizon, ConstraintClass::Duration);
    }

    // Velocity: |r (c_{i+1} - c_i)_m| <= vmax_m T_k.
    for (int k = 0; k < K; ++k) {
        const auto& seg = L.cps[static_cast<std::size_t>(k)];
        for (std::size_t i = 0; i < rs; ++i) {
            for (int m = 0; m < d; ++m) {
                const double vm = p.velocity.vmax[m];
                if (!std::isfinite(vm)) continue;
                for (double sgn : {1.0, -1.0}) {
                    conic::Row row;
                    add_coord(row, seg[i + 1], m, sgn * r);
                    add_coord(row, seg[i], m, -sgn * r);
                    row.terms.emplace_back(L.dur[static_cast<std::size_t>(k)], -vm);
                    ineq(std::move(row), 0.0, ConstraintClass::Velocity);
                }
            }
        }
    }

    // Objective: a * sum ||c_{i+1} - c_i|| + b * sum T_k.
    const int base_vars = prob.num_vars;
    if (p.weights.a > 0.0) {
        for (int k = 0; k < K; ++k) {
            const auto& seg = L.cps[static_cast<std::size_t>(k)];
            for (std::size_t i = 0; i < rs; ++i) {
                conic::Cone cone;
                bool constant_only = true;
                for (int m = 0; m < d; ++m) {
                    conic::Row row;
                    add_coord(row, seg[i + 1], m, 1.0);
                    add_coord(row, seg[i], m, -1.0);
                    compact(row);
                    if (!row.terms.empty()) constant_only = false;
                    cone.rows.push_back(std::move(row));
                }
                if (constant_only) {
                    double nn = 0.0;
                    for (const auto& row : cone.rows) nn += row.constant * row.constant;
                    L.cost_constant += p.weights.a * std::sqrt(nn);
                    continue;
                }
                cone.epigraph = prob.add_var();
                prob.cones.push_back(std::move(cone));
            }
        }
    }
    prob.cost = Eigen::VectorXd::Zero(prob.num_vars);
    for (int v = base_vars; v < prob.num_vars; ++v) prob.cost[v] = p.weights.a;
    if (p.weights.b > 0.0)
        for (int k = 0; k < K; ++k) prob.cost[L.dur[static_cast<std::size_t>(k)]] += p.weights.b;
    return prob;
}

// Warm start: copy matching segments (order-elevated as needed).
inline Eigen::VectorXd seed_from(const SeqProgram& p, const Layout& L, int n) {
    Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
    for (int k = 0; k < L.K; ++k) x[L.dur[static_cast<std::size_t>(k)]] = 1.0;
    if (!p.warm_start) {
        // Interior points on junctions go between neighboring box centers.
        std::vector<Point> centers;
        for (const auto& s : p.sets) {
            const BoundingBox bb = bounding_box(s);
            centers.push_back(0.5 * (bb.lo + bb.hi));
        }
        for (int k = 0; k < L.K; ++k) {
            const auto& row = L.cps[static_cast<std::size_t>(k)];
            const Point& c = centers[static_cast<std::size_t>(k)];
            for (int i = 0; i <= L.r; ++i) {
                const auto& pv = row[static_cast<std::size_t>(i)];
                if (pv.base < 0) continue;
                Point v = c;
                if (i == L.r && k + 1 < L.K) v = 0.5 * (c + centers[static_cast<std::size_t>(k + 1)]);
                if (i == 0 && k > 0) v = 0.5 * (c + centers[static_cast<std::size_t>(k - 1)]);
                x.segment(pv.base, L.d) = v;
            }
        }
        return x;
    }
    const auto& segs = p.warm_start->segments();
    Point last;
    for (int k = 0; k < L.K; ++k) {
        const auto& row = L.cps[static_cast<std::size_t>(k)];
        if (static_cast<std::size_t>(k) >= segs.size()) {
            // Unmatched tail: park its fresh points at the last known point.
            if (last.size() == L.d)
                for (const auto& pv : row)
                    if (pv.base >= 0) x.segment(pv.base, L.d) = last;
            continue;
        }
        TrajectorySegment s = segs[static_cast<std::size_t>(k)];
        if (s.control_points.empty() || s.control_points.front().size() != L.d) return x;
        while (s.order() < L.r) s = s.elevated();
        for (int i = 0; i <= L.r; ++i) {
            const auto& pv = row[static_cast<std::size_t>(i)];
            if (pv.base < 0) continue;
            const double sidx = static_cast<double>(i) * s.order() / L.r;
            x.segment(pv.base, L.d) = s.control_points[static_cast<std::size_t>(std::lround(sidx))];
        }
        if (s.duration > 0.0) x[L.dur[static_cast<std::size_t>(k)]] = s.duration;
        last = s.control_points.back();
    }
    return x;
}

}  // namespace detail

/// Solves the sequence program: minimize a L + b sum T_k.
inline SolveResult solve_sequence(SeqProgram prog, const conic::Options& opt = {}) {
    ++solve_call_counter();
    if (prog.sets.empty()) throw ArgumentError("solve_sequence: empty sequence");
    if (prog.order < 1) throw ArgumentError("solve_sequence: order must be >= 1");
    if (prog.continuity < 0 || prog.continuity > 1) throw ArgumentError("solve_sequence: continuity must be 0 or 1");
    if (prog.set_ids.size() != prog.sets.size()) prog.set_ids.assign(prog.sets.size(), -1);
    const int d = prog.sets.front().dim();
    if (prog.velocity.dim() == 0) prog.velocity = VelocitySet(Eigen::VectorXd::Constant(d, std::numeric_limits<double>::infinity()));
    if (prog.velocity.dim() != d) throw ArgumentError("solve_sequence: velocity set dimension mismatch");
    if (prog.start.point && prog.start.point->size() != d) throw ArgumentError("solve_sequence: start dimension mismatch");
    if (prog.finish.point && prog.finish.point->size() != d) throw ArgumentError("solve_sequence: goal dimension mismatch");
    detail::collapse_repeats(prog);

    SolveResult res;
    detail::Layout L;
    conic::Problem prob = detail::build_problem(prog, L);
    res.num_vars = prob.num_vars;
    if (L.trivially_infeasible) {
        res.status = SolveStatus::Infeasible;
        res.violated = L.culprit;
        return res;
    }

    const Eigen::VectorXd seed = detail::seed_from(prog, L, prob.num_vars);
    const conic::Result cr = conic::solve(prob, opt, &seed);
    res.newton_steps = cr.newton_steps;
    if (cr.status == conic::Status::Infeasible) {
        res.status = SolveStatus::Infeasible;
        res.violated = cr.violated_class == conic::kEqualityClass
                           ? ConstraintClass::Continuity
                           : static_cast<ConstraintClass>(std::max(0, cr.violated_class));
        return res;
    }
    if (cr.status == conic::Status::Stalled) {
        res.status = SolveStatus::Stalled;
        return res;
    }

    std::vector<TrajectorySegment> segs;
    for (int k = 0; k < L.K; ++k) {
        TrajectorySegment s;
        s.set_id = prog.set_ids[static_cast<std::size_t>(k)];
        s.duration = std::max(0.0, cr.x[L.dur[static_cast<std::size_t>(k)]]);
        for (int i = 0; i <= L.r; ++i)
            s.control_points.push_back(
                L.cps[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)].value(cr.x));
        segs.push_back(std::move(s));
    }
    res.trajectory = Trajectory(std::move(segs), prog.continuity);
    res.cost = cost(res.trajectory, prog.weights);
    res.status = SolveStatus::Optimal;
    return res;
}

// ---------------------------------------------------------------------------
// Validation

struct Violation {
    ConstraintClass kind;
    int segment = -1;
    std::string detail;
};

struct ValidityReport {
    std::vector<Violation> violations;
    bool valid() const noexcept { return violations.empty(); }
};

/// Checks containment and velocity on control points, plus `samples` dense
/// samples per segment, C^0 (and C^1 if the trajectory asks for it), graph
/// adjacency of consecutive sets, and the query endpoints if `q` is given.
inline ValidityReport validate(const Trajectory& traj, const GcsGraph& g, const VelocitySet& vset,
                               double tol = 1e-6, const Query* q = nullptr, int samples = 32) {
    ValidityReport rep;
    auto add = [&](ConstraintClass k, int seg, std::string msg) {
        rep.violations.push_back({k, seg, std::move(msg)});
    };
    const auto& segs = traj.segments();
    if (segs.empty()) {
        add(ConstraintClass::Boundary, -1, "empty trajectory");
        return rep;
    }
    for (std::size_t k = 0; k < segs.size(); ++k) {
        const auto& s = segs[k];
        const int ki = static_cast<int>(k);
        if (s.set_id < 0 || s.set_id >= g.num_vertices()) {
            add(ConstraintClass::Containment, ki, "unknown set id");
            continue;
        }
        const ConvexSet& set = g.set(s.set_id);
        if (!(s.duration >= 0.0) || !std::isfinite(s.duration))
            add(ConstraintClass::Duration, ki, "bad duration");
        for (std::size_t i = 0; i < s.control_points.size(); ++i)
            if (!contains(set, s.control_points[i], tol))
                add(ConstraintClass::Containment, ki, "control point " + std::to_string(i) + " outside set");
        for (int j = 1; j < samples - 1; ++j) {
            const double u = static_cast<double>(j) / (samples - 1);
            if (!contains(set, s.eval(u), tol)) {
                add(ConstraintClass::Containment, ki, "sample outside set");
                break;
            }
        }
        const int r = s.order();
        if (vset.dim() == set.dim()) {
            for (int i = 0; i < r; ++i) {
                const Eigen::VectorXd delta =
                    r * (s.control_points[static_cast<std::size_t>(i + 1)] - s.control_points[static_cast<std::size_t>(i)]);
                for (Eigen::Index m = 0; m < delta.size(); ++m)
                    if (std::abs(delta[m]) > vset.vmax[m] * s.duration + tol)
                        add(ConstraintClass::Velocity, ki, "derivative control point over limit");
            }
        }
        if (k + 1 < segs.size()) {
            const auto& n = segs[k + 1];
            if ((s.control_points.back() - n.control_points.front()).norm() > tol)
                add(ConstraintClass::Continuity, ki, "C0 gap at junction");
            if (n.set_id != s.set_id && !g.has_edge(s.set_id, n.set_id))
                add(ConstraintClass::Continuity, ki, "consecutive sets not adjacent");
            if (traj.continuity() >= 1 && r >= 1 && n.order() >= 1) {
                const Eigen::VectorXd va = r * (s.control_points.back() - s.control_points[s.control_points.size() - 2]);
                const Eigen::VectorXd vb = n.order() * (n.control_points[1] - n.control_points[0]);
                // Compare r dc * T_{k+1} with r dc' * T_k to avoid dividing by tiny durations.
                const double scale = std::max({1.0, va.norm(), vb.norm()});
                if ((va * n.duration - vb * s.duration).norm() > tol * scale * std::max(1.0, s.duration + n.duration))
                    add(ConstraintClass::Continuity, ki, "C1 mismatch at junction");
            }
        }
    }
    if (q != nullptr) {
        if ((traj.start() - q->start).norm() > tol) add(ConstraintClass::Boundary, 0, "start point mismatch");
        if ((traj.end() - q->goal).norm() > tol)
            add(ConstraintClass::Boundary, static_cast<int>(segs.size()) - 1, "goal point mismatch");
        auto check_velocity = [&](const TrajectorySegment& s, bool at_start, const Eigen::VectorXd& v, int ki) {
            const int r = s.order();
            const auto& c = s.control_points;
            const Eigen::VectorXd dc = at_start ? Eigen::VectorXd(r * (c[1] - c[0]))
                                                : Eigen::VectorXd(r * (c[c.size() - 1] - c[c.size() - 2]));
            if ((dc - v * s.duration).norm() > tol * std::max(1.0, s.duration))
                add(ConstraintClass::Boundary, ki, at_start ? "start velocity mismatch" : "goal velocity mismatch");
        };
        if (q->start_velocity) check_velocity(segs.front(), true, *q->start_velocity, 0);
        if (q->goal_velocity)
            check_velocity(segs.back(), false, *q->goal_velocity, static_cast<int>(segs.size()) - 1);
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Export

/// CSV `t,x1..xd` with `per_segment` uniform samples per segment.
inline void write_csv(std::ostream& os, const Trajectory& traj, int per_segment = 20) {
    if (traj.empty()) throw StateError("write_csv: empty trajectory");
    const int d = static_cast<int>(traj.start().size());
    os << "t";
    for (int m = 1; m <= d; ++m) os << ",x" << m;
    os << '\n';
    os << std::setprecision(10);
    double t0 = 0.0;
    const auto& segs = traj.segments();
    for (std::size_t k = 0; k < segs.size(); ++k) {
        const int n = std::max(2, per_segment);
        for (int i = (k == 0 ? 0 : 1); i < n; ++i) {
            const double u = static_cast<double>(i) / (n - 1);
            const Point p = segs[k].eval(u);
            os << t0 + u * segs[k].duration;
            for (int m = 0; m < d; ++m) os << ',' << p[m];
            os << '\n';
        }
        t0 += segs[k].duration;
    }
}

/// Human-readable program dump for debugging.
inline void dump_program(std::ostream& os, const SeqProgram& p) {
    os << "order " << p.order << " continuity " << p.continuity << " a " << p.weights.a << " b "
       << p.weights.b << " max_duration " << p.max_duration << '\n';
    os << "vmax";
    for (Eigen::Index m = 0; m < p.velocity.vmax.size(); ++m) os << ' ' << p.velocity.vmax[m];
    os << '\n';
    auto vec = [&](const Eigen::VectorXd& v) {
        std::ostringstream s;
        s << '(';
        for (Eigen::Index i = 0; i < v.size(); ++i) s << (i ? "," : "") << v[i];
        s << ')';
        return s.str();
    };
    auto bc = [&](const char* name, const BoundaryCondition& b) {
        os << name;
        if (b.point) os << " point " << vec(*b.point);
        if (b.region) os << " region[" << b.region->num_halfspaces() << " rows]";
        if (b.velocity) os << " velocity " << vec(*b.velocity);
        if (!b.point && !b.region) os << " free";
        os << '\n';
    };
    bc("start", p.start);
    bc("goal", p.finish);
    for (std::size_t k = 0; k < p.sets.size(); ++k) {
        const auto& s = p.sets[k];
        os << "set " << (k < p.set_ids.size() ? p.set_ids[k] : -1) << ' ' << s.label() << '\n';
        for (int h = 0; h < s.num_halfspaces(); ++h)
            os << "  " << vec(s.normals().row(h).transpose()) << " . x <= " << s.offsets()[h] << '\n';
    }
}

}  // namespace ixg
