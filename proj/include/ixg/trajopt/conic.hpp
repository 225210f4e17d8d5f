#pragma once

// Primal log-barrier interior-point method for small sparse SOCPs of the form
//
//   minimize    c^T x
//   subject to  G x <= h                  (linear rows, each tagged with a class)
//               A x  = b
//               x[t_k] >= || M_k x + m_k ||  (second-order cones)
//
// Phase I finds a strictly feasible point (or certifies there is none) by
// minimizing the largest linear violation; phase II follows the central path
// until the duality gap bound theta/t drops below tolerance. Newton systems
// are solved on the regularized quasi-definite KKT matrix with a sparse LDLT.

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>
#include <vector>

namespace ixg::conic {

/// Sparse affine row: sum coeff * x[var] (+ constant where applicable).
struct Row {
    std::vector<std::pair<int, double>> terms;
    double constant = 0.0;

    double eval(const Eigen::VectorXd& x) const {
        double v = constant;
        for (const auto& [j, a] : terms) v += a * x[j];
        return v;
    }
};

struct Cone {
    int epigraph = -1;      // index of t
    std::vector<Row> rows;  // u = rows(x)
};

struct Problem {
    int num_vars = 0;
    Eigen::VectorXd cost;
    std::vector<Row> ineq;  // row(x) <= rhs  (constant folded into rhs)
    std::vector<double> ineq_rhs;
    std::vector<int> ineq_class;
    std::vector<Row> eq;  // row(x) == rhs
    std::vector<double> eq_rhs;
    std::vector<Cone> cones;

    int add_var() {
        ++num_vars;
        return num_vars - 1;
    }
    void add_ineq(Row r, double rhs, int cls) {
        rhs -= r.constant;
        r.constant = 0.0;
        ineq.push_back(std::move(r));
        ineq_rhs.push_back(rhs);
        ineq_class.push_back(cls);
    }
    void add_eq(Row r, double rhs) {
        rhs -= r.constant;
        r.constant = 0.0;
        eq.push_back(std::move(r));
        eq_rhs.push_back(rhs);
    }
};

enum class Status { Optimal, Infeasible, Stalled };

/// violated_class reported when the equality system itself is inconsistent.
inline constexpr int kEqualityClass = -2;

struct Options {
    int max_newton = 600;
    double gap_rel = 1e-8;
    double gap_abs = 1e-9;
    double feasibility_margin = 1e-9;  // strict-interior requirement for phase I
    double mu = 50.0;
};

struct Result {
    Status status = Status::Stalled;
    Eigen::VectorXd x;
    double objective = std::numeric_limits<double>::infinity();
    int newton_steps = 0;
    int violated_class = -1;       // class of the tightest row when infeasible
    double phase1_value = 0.0;     // min over x of the max linear violation (upper bound)
};

namespace detail {

using SpMat = Eigen::SparseMatrix<double>;

// Barrier over the linear rows and cones of `p`, plus an optional extra
// column `sigma` subtracted from every linear row (phase I).
class Barrier {
public:
    Barrier(const Problem& p, bool phase1) : p_(p), phase1_(phase1) {
        n_ = p.num_vars + (phase1 ? 1 : 0);
        m_ = static_cast<int>(p.eq.size());
    }

    int n() const { return n_; }
    int m() const { return m_; }

    double theta() const {
        return static_cast<double>(p_.ineq.size()) +
               (phase1_ ? 0.0 : 2.0 * static_cast<double>(p_.cones.size()));
    }

    double slack(std::size_t i, const Eigen::VectorXd& x) const {
        double s = p_.ineq_rhs[i] - p_.ineq[i].eval(x);
        if (phase1_) s += x[n_ - 1];
        return s;
    }

    // Returns +inf outside the domain.
    double value(const Eigen::VectorXd& x) const {
        double f = 0.0;
        for (std::size_t i = 0; i < p_.ineq.size(); ++i) {
            const double s = slack(i, x);
            if (!(s > 0.0)) return std::numeric_limits<double>::infinity();
            f -= std::log(s);
        }
        if (!phase1_) {
            for (const auto& c : p_.cones) {
                const double t = x[c.epigraph];
                double uu = 0.0;
                for (const auto& r : c.rows) {
                    const double u = r.eval(x);
                    uu += u * u;
                }
                const double w = t * t - uu;
                if (!(t > 0.0) || !(w > 0.0)) return std::numeric_limits<double>::infinity();
                f -= std::log(w);
            }
        }
        return f;
    }

    // Gradient, and Hessian entries passed to emit(row, col, value) for the
    // full symmetric pattern. The sequence of (row, col) depends only on the
    // problem structure, so callers can map emissions to fixed slots.
    template <class Emit>
    void derivatives(const Eigen::VectorXd& x, Eigen::VectorXd& grad, Emit&& emit) const {
        grad.setZero(n_);
        const int sig = n_ - 1;
        for (std::size_t i = 0; i < p_.ineq.size(); ++i) {
            const double inv = 1.0 / slack(i, x);
            const double inv2 = inv * inv;
            const auto& terms = p_.ineq[i].terms;
            for (const auto& [j, a] : terms) grad[j] += a * inv;
            if (phase1_) grad[sig] -= inv;
            for (const auto& [j, a] : terms) {
                for (const auto& [k, b] : terms) emit(j, k, a * b * inv2);
                if (phase1_) emit(j, sig, -a * inv2);
            }
            if (phase1_) {
                for (const auto& [k, b] : terms) emit(sig, k, -b * inv2);
                emit(sig, sig, inv2);
            }
        }
        if (phase1_) return;
        const std::vector<std::pair<int, double>> none;
        for (const auto& c : p_.cones) {
            const double t = x[c.epigraph];
            const std::size_t q = c.rows.size() + 1;
            // z = (t, -u)
            double z[8];
            std::vector<double> zbig;
            double* zp = z;
            if (q > 8) {
                zbig.resize(q);
                zp = zbig.data();
            }
            zp[0] = t;
            double uu = 0.0;
            for (std::size_t r = 0; r < c.rows.size(); ++r) {
                const double u = c.rows[r].eval(x);
                zp[r + 1] = -u;
                uu += u * u;
            }
            const double w = t * t - uu;
            // d/dt = -2t/w, d/du = 2u/w
            grad[c.epigraph] += -2.0 * t / w;
            for (std::size_t r = 0; r < c.rows.size(); ++r)
                for (const auto& [j, a] : c.rows[r].terms) grad[j] += -2.0 * zp[r + 1] / w * a;

            // Hessian in (t,u): (2/w) diag(-1, I) + (4/w^2) z z^T.
            const double d1 = 2.0 / w;
            const double d2 = 4.0 / (w * w);
            for (std::size_t i = 0; i < q; ++i) {
                for (std::size_t j = 0; j < q; ++j) {
                    double hij = d2 * zp[i] * zp[j];
                    if (i == j) hij += (i == 0 ? -d1 : d1);
                    if (i == 0 && j == 0) {
                        emit(c.epigraph, c.epigraph, hij);
                    } else if (i == 0) {
                        for (const auto& [bb, vb] : c.rows[j - 1].terms) emit(c.epigraph, bb, hij * vb);
                    } else if (j == 0) {
                        for (const auto& [aa, va] : c.rows[i - 1].terms) emit(aa, c.epigraph, hij * va);
                    } else {
                        for (const auto& [aa, va] : c.rows[i - 1].terms)
                            for (const auto& [bb, vb] : c.rows[j - 1].terms) emit(aa, bb, hij * va * vb);
                    }
                }
            }
        }
    }

    // Largest step in [0, 1] keeping linear rows strictly feasible.
    double max_linear_step(const Eigen::VectorXd& x, const Eigen::VectorXd& dx) const {
        double alpha = 1.0;
        for (std::size_t i = 0; i < p_.ineq.size(); ++i) {
            double rate = 0.0;
            for (const auto& [j, a] : p_.ineq[i].terms) rate += a * dx[j];
            if (phase1_) rate -= dx[n_ - 1];
            if (rate > 0.0) alpha = std::min(alpha, 0.99 * slack(i, x) / rate);
        }
        return alpha;
    }

    int tightest_class(const Eigen::VectorXd& x) const {
        int cls = -1;
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < p_.ineq.size(); ++i) {
            const double s = slack(i, x);
            if (s < best) {
                best = s;
                cls = p_.ineq_class[i];
            }
        }
        return cls;
    }

private:
    const Problem& p_;
    bool phase1_;
    int n_;
    int m_;
};

enum class LoopExit { Stopped, Budget, Numerical };

// Minimizes t * obj^T x + barrier(x) subject to A x = b for an increasing
// sequence of t. `stop` is polled after each centering step with (x, t).
// `last_t` is the last fully centered t (0 if none).
template <class Stop>
LoopExit barrier_loop(const Problem& p, const Barrier& bar, const Eigen::VectorXd& obj,
                    Eigen::VectorXd& x, double t, const Options& opt, int& newton_budget,
                    Stop&& stop, double& last_t) {
    last_t = 0.0;
    const int n = bar.n();
    const int m = bar.m();
    const int dim = n + m;

    Eigen::VectorXd grad(n);
    Eigen::VectorXd eq_rhs(m);
    for (int i = 0; i < m; ++i) eq_rhs[i] = p.eq_rhs[static_cast<std::size_t>(i)];

    auto eq_residual = [&](const Eigen::VectorXd& xx) {
        Eigen::VectorXd r(m);
        for (int i = 0; i < m; ++i) r[i] = eq_rhs[i] - p.eq[static_cast<std::size_t>(i)].eval(xx);
        return r;
    };

    // KKT pattern (lower triangle): Hessian, equality rows, full diagonal.
    // Every Hessian emission gets a fixed slot in K's value array.
    SpMat K(dim, dim);
    std::vector<int> hslot;
    std::vector<std::pair<int, double>> eq_slot;  // (slot, coefficient)
    std::vector<int> diag_slot(static_cast<std::size_t>(dim));
    {
        std::vector<std::pair<int, int>> hpat;
        bar.derivatives(x, grad, [&](int r, int c, double) { hpat.emplace_back(r, c); });
        std::vector<Eigen::Triplet<double>> trip;
        trip.reserve(hpat.size() + static_cast<std::size_t>(dim));
        for (const auto& [r, c] : hpat)
            if (r >= c) trip.emplace_back(r, c, 1.0);
        for (int i = 0; i < m; ++i)
            for (const auto& [j, a] : p.eq[static_cast<std::size_t>(i)].terms) trip.emplace_back(n + i, j, 1.0);
        for (int i = 0; i < dim; ++i) trip.emplace_back(i, i, 1.0);
        K.setFromTriplets(trip.begin(), trip.end());
        K.makeCompressed();
        auto slot_of = [&](int r, int c) {
            const int* begin = K.innerIndexPtr() + K.outerIndexPtr()[c];
            const int* end = K.innerIndexPtr() + K.outerIndexPtr()[c + 1];
            return static_cast<int>(std::lower_bound(begin, end, r) - K.innerIndexPtr());
        };
        hslot.reserve(hpat.size());
        for (const auto& [r, c] : hpat) hslot.push_back(r >= c ? slot_of(r, c) : -1);
        for (int i = 0; i < m; ++i)
            for (const auto& [j, a] : p.eq[static_cast<std::size_t>(i)].terms) eq_slot.emplace_back(slot_of(n + i, j), a);
        for (int i = 0; i < dim; ++i) diag_slot[static_cast<std::size_t>(i)] = slot_of(i, i);
    }
    double* kval = K.valuePtr();
    const auto nnz = static_cast<std::size_t>(K.nonZeros());
    Eigen::SimplicialLDLT<SpMat, Eigen::Lower, Eigen::AMDOrdering<int>> ldlt;
    ldlt.analyzePattern(K);

    const double reg = 1e-11;
    for (;;) {
        // Centering.
        for (int inner = 0;; ++inner) {
            if (newton_budget-- <= 0) return LoopExit::Budget;
            // Centering that crawls this long has hit the precision floor.
            if (inner >= 60 && last_t > 0.0) return LoopExit::Numerical;
            std::fill(kval, kval + nnz, 0.0);
            std::size_t emitted = 0;
            bar.derivatives(x, grad, [&](int, int, double v) {
                const int sl = hslot[emitted++];
                if (sl >= 0) kval[sl] += v;
            });
            grad += t * obj;
            for (const auto& [sl, a] : eq_slot) kval[sl] += a;

            // Shift actually on the diagonal, removed again for refinement.
            double shift_n = reg;
            double shift_m = reg;
            for (int i = 0; i < n; ++i) kval[diag_slot[static_cast<std::size_t>(i)]] += reg;
            for (int i = n; i < dim; ++i) kval[diag_slot[static_cast<std::size_t>(i)]] -= reg;
            ldlt.factorize(K);
            // Far along the path the Hessian spans too many decades for the
            // fixed shift; retry with a shift scaled to its diagonal.
            if (ldlt.info() != Eigen::Success) {
                double dmax = 1.0;
                for (int i = 0; i < n; ++i) dmax = std::max(dmax, std::abs(kval[diag_slot[static_cast<std::size_t>(i)]]));
                double shift = 1e-14 * dmax;
                for (int attempt = 0; attempt < 4 && ldlt.info() != Eigen::Success; ++attempt, shift *= 100.0) {
                    for (int i = 0; i < n; ++i) kval[diag_slot[static_cast<std::size_t>(i)]] += shift;
                    for (int i = n; i < dim; ++i) kval[diag_slot[static_cast<std::size_t>(i)]] -= shift;
                    shift_n += shift;
                    shift_m += shift;
                    ldlt.factorize(K);
                }
                if (ldlt.info() != Eigen::Success) return LoopExit::Numerical;
            }
            auto unshifted = [&](const Eigen::VectorXd& v) {
                Eigen::VectorXd out = K.selfadjointView<Eigen::Lower>() * v;
                out.head(n) -= shift_n * v.head(n);
                out.tail(m) += shift_m * v.tail(m);
                return out;
            };

            Eigen::VectorXd rhs(dim);
            rhs.head(n) = -grad;
            rhs.tail(m) = eq_residual(x);
            Eigen::VectorXd sol = ldlt.solve(rhs);
            for (int ref = 0; ref < 2; ++ref) {
                Eigen::VectorXd r = rhs - unshifted(sol);
                sol += ldlt.solve(r);
            }
            Eigen::VectorXd dx = sol.head(n);
            if (!dx.allFinite()) return LoopExit::Numerical;

            const double decrement = -grad.dot(dx);
            const double eq_norm = rhs.tail(m).size() ? rhs.tail(m).cwiseAbs().maxCoeff() : 0.0;
            if (decrement < 1e-6 && eq_norm < 1e-9) break;

            double alpha = bar.max_linear_step(x, dx);
            const double f0 = t * obj.dot(x) + bar.value(x);
            bool accepted = false;
            for (int ls = 0; ls < 60; ++ls) {
                Eigen::VectorXd xn = x + alpha * dx;
                const double fn = t * obj.dot(xn) + bar.value(xn);
                if (std::isfinite(fn) &&
                    (fn <= f0 - 0.01 * alpha * std::max(decrement, 0.0) || eq_norm > 1e-9)) {
                    accepted = (alpha * dx.cwiseAbs().maxCoeff() > 1e-15 * (1.0 + x.cwiseAbs().maxCoeff())) ||
                              eq_norm > 1e-9;
                    x = std::move(xn);
                    break;
                }
                alpha *= 0.5;
            }
            if (!accepted) break;  // numerically centered
        }
        last_t = t;
        if (stop(x, t)) return LoopExit::Stopped;
        t *= opt.mu;
    }
}

// Nearest point to x satisfying A x = b; false when the system is inconsistent.
inline bool project_onto_equalities(const Problem& p, Eigen::VectorXd& x) {
    const int n = p.num_vars;
    const int m = static_cast<int>(p.eq.size());
    if (m == 0) return true;
    std::vector<Eigen::Triplet<double>> trip;
    for (int i = 0; i < n; ++i) trip.emplace_back(i, i, 1.0);
    double scale = 1.0;
    for (int i = 0; i < m; ++i) {
        for (const auto& [j, a] : p.eq[static_cast<std::size_t>(i)].terms) trip.emplace_back(n + i, j, a);
        trip.emplace_back(n + i, n + i, -1e-12);
        scale = std::max(scale, std::abs(p.eq_rhs[static_cast<std::size_t>(i)]));
    }
    SpMat K(n + m, n + m);
    K.setFromTriplets(trip.begin(), trip.end());
    Eigen::SimplicialLDLT<SpMat, Eigen::Lower, Eigen::AMDOrdering<int>> ldlt(K);
    if (ldlt.info() != Eigen::Success) return false;
    Eigen::VectorXd rhs(n + m);
    rhs.head(n) = x;
    for (int i = 0; i < m; ++i) rhs[n + i] = p.eq_rhs[static_cast<std::size_t>(i)];
    Eigen::VectorXd sol = ldlt.solve(rhs);
    for (int ref = 0; ref < 3; ++ref) {
        Eigen::VectorXd r = rhs - K.selfadjointView<Eigen::Lower>() * sol;
        for (int i = 0; i < m; ++i) r[n + i] -= 1e-12 * sol[n + i];  // unregularized residual
        sol += ldlt.solve(r);
    }
    Eigen::VectorXd xn = sol.head(n);
    double worst = 0.0;
    for (int i = 0; i < m; ++i)
        worst = std::max(worst, std::abs(p.eq_rhs[static_cast<std::size_t>(i)] -
                                         p.eq[static_cast<std::size_t>(i)].eval(xn)));
    if (!xn.allFinite() || worst > 1e-8 * scale) return false;
    x = std::move(xn);
    return true;
}

}  // namespace detail

/// Solves `p`. `x0` (optional) seeds phase I; it need not be feasible.
inline Result solve(const Problem& p, const Options& opt = {}, const Eigen::VectorXd* x0 = nullptr) {
    Result res;
    const int n = p.num_vars;
    int budget = opt.max_newton;

    Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
    if (x0 != nullptr && x0->size() == n && x0->allFinite()) x = *x0;
    if (!detail::project_onto_equalities(p, x)) {
        res.status = Status::Infeasible;
        res.violated_class = kEqualityClass;
        return res;
    }

    // ---- Phase I: minimize sigma s.t. G x - sigma <= h, A x = b.
    {
        detail::Barrier bar(p, true);
        Eigen::VectorXd z(n + 1);
        z.head(n) = x;
        double worst = 0.0;
        for (std::size_t i = 0; i < p.ineq.size(); ++i)
            worst = std::max(worst, p.ineq[i].eval(x) - p.ineq_rhs[i]);
        z[n] = worst + 1.0;
        Eigen::VectorXd obj = Eigen::VectorXd::Zero(n + 1);
        obj[n] = 1.0;

        bool infeasible = false;
        bool found = false;
        const double theta = std::max(1.0, bar.theta());
        auto stop = [&](const Eigen::VectorXd& zz, double t) {
            const double sigma = zz[n];
            const double lower = sigma - theta / t;
            // Equality residual must vanish before trusting sigma.
            double eqr = 0.0;
            for (std::size_t i = 0; i < p.eq.size(); ++i)
                eqr = std::max(eqr, std::abs(p.eq_rhs[i] - p.eq[i].eval(zz)));
            if (eqr > 1e-8) {
                if (t > 1e12) {
                    infeasible = true;
                    return true;
                }
                return false;
            }
            if (sigma < -opt.feasibility_margin && (sigma < -1e-3 || sigma <= 0.5 * lower)) {
                found = true;
                return true;
            }
            if (lower > -opt.feasibility_margin) {
                infeasible = true;
                return true;
            }
            return t > 1e14;
        };
        const double t0 = 1.0 / std::max(1.0, std::abs(z[n]));
        double last_t = 0.0;
        const auto ex = detail::barrier_loop(p, bar, obj, z, t0, opt, budget, stop, last_t);
        res.newton_steps = opt.max_newton - budget;
        res.phase1_value = z[n];
        // A breakdown deep in the path still leaves a usable interior point.
        if (ex == detail::LoopExit::Numerical && last_t > 0.0 && !found && !infeasible)
            stop(z, last_t);
        if (ex == detail::LoopExit::Budget || (!found && !infeasible)) {
            res.status = Status::Stalled;
            return res;
        }
        if (infeasible || !found) {
            res.status = Status::Infeasible;
            res.violated_class = bar.tightest_class(z);
            return res;
        }
        x = z.head(n);
    }

    // Cone epigraphs start strictly inside.
    for (const auto& c : p.cones) {
        double uu = 0.0;
        for (const auto& r : c.rows) {
            const double u = r.eval(x);
            uu += u * u;
        }
        x[c.epigraph] = std::sqrt(uu) + 0.1 * (1.0 + std::sqrt(uu));
    }

    // ---- Phase II.
    detail::Barrier bar(p, false);
    const double theta = std::max(1.0, bar.theta());
    auto stop = [&](const Eigen::VectorXd& xx, double t) {
        const double f = p.cost.dot(xx);
        return theta / t <= std::max(opt.gap_abs, opt.gap_rel * std::abs(f));
    };
    const double f0 = std::abs(p.cost.dot(x));
    const double t0 = theta / std::max(1.0, f0);
    double last_t = 0.0;
    const auto ex = detail::barrier_loop(p, bar, p.cost, x, t0, opt, budget, stop, last_t);
    res.newton_steps = opt.max_newton - budget;
    res.status = Status::Stalled;
    if (ex == detail::LoopExit::Stopped) {
        res.status = Status::Optimal;
    } else if (ex == detail::LoopExit::Numerical && last_t > 0.0) {
        // Near a zero-cost cone apex the KKT system degenerates before the
        // target gap; accept a loose gap there.
        const double f = p.cost.dot(x);
        if (theta / last_t <= std::max(1e-6, 1e-6 * std::abs(f))) res.status = Status::Optimal;
    }
    res.x = x;
    res.objective = p.cost.dot(x);
    return res;
}

}  // namespace ixg::conic
