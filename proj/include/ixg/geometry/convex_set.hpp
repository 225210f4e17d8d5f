#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "ixg/errors.hpp"
#include "ixg/geometry/lp.hpp"

namespace ixg {

using Point = Eigen::VectorXd;

/// Bounded H-polytope { x : normals * x <= offsets }.
///
/// Rows are normalized to unit length on construction, so slacks and
/// tolerances are Euclidean distances.
class ConvexSet {
public:
    ConvexSet() = default;

    ConvexSet(Eigen::MatrixXd normals, Eigen::VectorXd offsets, std::string label = {})
        : normals_(std::move(normals)), offsets_(std::move(offsets)), label_(std::move(label)) {
        if (normals_.cols() < 1) throw ArgumentError("ConvexSet: dimension must be positive");
        if (normals_.rows() != offsets_.size())
            throw ArgumentError("ConvexSet: normals/offsets row count mismatch");
        for (Eigen::Index i = 0; i < normals_.rows(); ++i) {
            const double nrm = normals_.row(i).norm();
            if (!std::isfinite(nrm) || !std::isfinite(offsets_[i]))
                throw ArgumentError("ConvexSet: non-finite halfspace");
            if (nrm <= 0.0) throw ArgumentError("ConvexSet: zero normal");
            normals_.row(i) /= nrm;
            offsets_[i] /= nrm;
        }
    }

    static ConvexSet box(const Point& lo, const Point& hi, std::string label = {}) {
        if (lo.size() != hi.size() || lo.size() < 1)
            throw ArgumentError("ConvexSet::box: bad bounds");
        const Eigen::Index d = lo.size();
        Eigen::MatrixXd A = Eigen::MatrixXd::Zero(2 * d, d);
        Eigen::VectorXd b(2 * d);
        for (Eigen::Index i = 0; i < d; ++i) {
            A(2 * i, i) = 1.0;
            b[2 * i] = hi[i];
            A(2 * i + 1, i) = -1.0;
            b[2 * i + 1] = -lo[i];
        }
        return ConvexSet(std::move(A), std::move(b), std::move(label));
    }

    static ConvexSet singleton(const Point& p, std::string label = {}) {
        return box(p, p, std::move(label));
    }

    int dim() const noexcept { return static_cast<int>(normals_.cols()); }
    int num_halfspaces() const noexcept { return static_cast<int>(normals_.rows()); }
    const Eigen::MatrixXd& normals() const noexcept { return normals_; }
    const Eigen::VectorXd& offsets() const noexcept { return offsets_; }
    const std::string& label() const noexcept { return label_; }
    void set_label(std::string l) { label_ = std::move(l); }

    /// Largest violation max_i(a_i x - b_i); negative inside.
    double max_violation(const Point& p) const {
        if (normals_.rows() == 0) return -std::numeric_limits<double>::infinity();
        return (normals_ * p - offsets_).maxCoeff();
    }

private:
    Eigen::MatrixXd normals_;
    Eigen::VectorXd offsets_;
    std::string label_;
};

/// Axis-aligned box velocity limits: |v_i| <= vmax_i.
struct VelocitySet {
    Eigen::VectorXd vmax;

    VelocitySet() = default;
    explicit VelocitySet(Eigen::VectorXd limits) : vmax(std::move(limits)) {
        if (vmax.size() < 1) throw ArgumentError("VelocitySet: empty");
        for (double v : vmax)
            if (!(v > 0.0)) throw ArgumentError("VelocitySet: vmax must be positive");
    }
    static VelocitySet uniform(int dim, double v) {
        return VelocitySet(Eigen::VectorXd::Constant(dim, v));
    }

    int dim() const noexcept { return static_cast<int>(vmax.size()); }

    bool contains(const Eigen::VectorXd& v, double tol = 0.0) const {
        for (Eigen::Index i = 0; i < v.size(); ++i)
            if (std::abs(v[i]) > vmax[i] + tol) return false;
        return true;
    }

    /// Lower bound on the time needed to move by `delta`.
    double min_time(const Eigen::VectorXd& delta) const {
        double t = 0.0;
        for (Eigen::Index i = 0; i < delta.size(); ++i)
            t = std::max(t, std::abs(delta[i]) / vmax[i]);
        return t;
    }

    bool unlimited() const {
        for (double v : vmax)
            if (std::isfinite(v)) return false;
        return true;
    }
};

struct ChebyshevBall {
    Point center;
    double radius = 0.0;
};

struct BoundingBox {
    Point lo;
    Point hi;

    bool overlaps(const BoundingBox& o, double margin = 0.0) const {
        for (Eigen::Index i = 0; i < lo.size(); ++i)
            if (std::min(hi[i], o.hi[i]) - std::max(lo[i], o.lo[i]) < margin) return false;
        return true;
    }
};

namespace detail {

inline void check_dims(const ConvexSet& a, const ConvexSet& b) {
    if (a.dim() != b.dim()) throw ArgumentError("dimension mismatch between convex sets");
}

// max r s.t. a_i x + |a_i| r <= b_i, r free (negative when empty).
inline lp::Result chebyshev_lp(const Eigen::MatrixXd& A, const Eigen::VectorXd& b) {
    const Eigen::Index d = A.cols();
    std::vector<double> c(static_cast<std::size_t>(d + 1), 0.0);
    c.back() = 1.0;
    std::vector<std::vector<double>> rows;
    std::vector<double> rhs;
    rows.reserve(static_cast<std::size_t>(A.rows()));
    for (Eigen::Index i = 0; i < A.rows(); ++i) {
        std::vector<double> row(static_cast<std::size_t>(d + 1));
        for (Eigen::Index j = 0; j < d; ++j) row[static_cast<std::size_t>(j)] = A(i, j);
        row.back() = A.row(i).norm();
        rows.push_back(std::move(row));
        rhs.push_back(b[i]);
    }
    return lp::maximize(c, rows, rhs);
}

}  // namespace detail

inline bool contains(const ConvexSet& set, const Point& p, double tol = 0.0) {
    if (p.size() != set.dim()) throw ArgumentError("contains: dimension mismatch");
    if (tol < 0.0) throw ArgumentError("contains: negative tolerance");
    for (Eigen::Index i = 0; i < set.normals().rows(); ++i)
        if (set.normals().row(i).dot(p) > set.offsets()[i] + tol) return false;
    return true;
}

/// Center and radius of the largest inscribed ball.
inline ChebyshevBall chebyshev_center(const ConvexSet& set) {
    const auto res = detail::chebyshev_lp(set.normals(), set.offsets());
    if (res.status == lp::Status::Unbounded)
        throw ArgumentError("chebyshev_center: set is unbounded");
    if (res.status != lp::Status::Optimal || res.x.back() < -1e-12)
        throw EmptySet("chebyshev_center: polytope is empty" +
                       (set.label().empty() ? std::string{} : " (" + set.label() + ")"));
    ChebyshevBall ball;
    ball.center = Point(set.dim());
    for (int j = 0; j < set.dim(); ++j) ball.center[j] = res.x[static_cast<std::size_t>(j)];
    ball.radius = std::max(0.0, res.x.back());
    return ball;
}

/// Chebyshev radius of a ∩ b; negative when disjoint (distance-like).
inline double overlap_radius(const ConvexSet& a, const ConvexSet& b) {
    detail::check_dims(a, b);
    Eigen::MatrixXd A(a.num_halfspaces() + b.num_halfspaces(), a.dim());
    A << a.normals(), b.normals();
    Eigen::VectorXd off(A.rows());
    off << a.offsets(), b.offsets();
    const auto res = detail::chebyshev_lp(A, off);
    if (res.status == lp::Status::Unbounded) return std::numeric_limits<double>::infinity();
    if (res.status != lp::Status::Optimal) return -std::numeric_limits<double>::infinity();
    return res.x.back();
}

/// True iff a ∩ b contains a ball of radius `margin` (closed sets at 0).
inline bool intersects(const ConvexSet& a, const ConvexSet& b, double margin = 0.0) {
    detail::check_dims(a, b);
    if (margin < 0.0) throw ArgumentError("intersects: negative margin");
    return overlap_radius(a, b) >= margin - 1e-12;
}

/// Support value max_{x in set} dir . x.
inline double support(const ConvexSet& set, const Eigen::VectorXd& dir) {
    std::vector<double> c(dir.data(), dir.data() + dir.size());
    std::vector<std::vector<double>> rows;
    std::vector<double> rhs;
    for (Eigen::Index i = 0; i < set.normals().rows(); ++i) {
        rows.emplace_back(static_cast<std::size_t>(set.dim()));
        for (int j = 0; j < set.dim(); ++j)
            rows.back()[static_cast<std::size_t>(j)] = set.normals()(i, j);
        rhs.push_back(set.offsets()[i]);
    }
    const auto res = lp::maximize(c, rows, rhs);
    if (res.status == lp::Status::Unbounded) return std::numeric_limits<double>::infinity();
    if (res.status != lp::Status::Optimal) throw EmptySet("support: polytope is empty");
    return res.objective;
}

inline BoundingBox bounding_box(const ConvexSet& set) {
    BoundingBox box{Point(set.dim()), Point(set.dim())};
    // Axis-aligned rows only: read the box off the offsets.
    const auto& A = set.normals();
    bool aligned = A.rows() > 0;
    for (Eigen::Index i = 0; i < A.rows() && aligned; ++i)
        aligned = (A.row(i).array() != 0.0).count() == 1;
    if (aligned) {
        box.lo.setConstant(-std::numeric_limits<double>::infinity());
        box.hi.setConstant(std::numeric_limits<double>::infinity());
        for (Eigen::Index i = 0; i < A.rows(); ++i) {
            Eigen::Index j = 0;
            A.row(i).cwiseAbs().maxCoeff(&j);
            const double v = set.offsets()[i] / A(i, j);
            if (A(i, j) > 0.0) box.hi[j] = std::min(box.hi[j], v);
            else box.lo[j] = std::max(box.lo[j], v);
        }
        if ((box.hi - box.lo).minCoeff() < -1e-12) throw EmptySet("bounding_box: polytope is empty");
        return box;
    }
    for (int i = 0; i < set.dim(); ++i) {
        Eigen::VectorXd e = Eigen::VectorXd::Zero(set.dim());
        e[i] = 1.0;
        box.hi[i] = support(set, e);
        box.lo[i] = -support(set, -e);
    }
    return box;
}

inline bool is_bounded(const ConvexSet& set) {
    const BoundingBox bb = bounding_box(set);
    return bb.lo.allFinite() && bb.hi.allFinite();
}

/// Halfspaces of a and b; redundant rows dropped when `prune` is set.
inline ConvexSet intersection(const ConvexSet& a, const ConvexSet& b, bool prune = true) {
    detail::check_dims(a, b);
    if (!intersects(a, b, 0.0)) throw EmptyIntersection("intersection: sets are disjoint");
    const int d = a.dim();
    Eigen::MatrixXd A(a.num_halfspaces() + b.num_halfspaces(), d);
    A << a.normals(), b.normals();
    Eigen::VectorXd off(A.rows());
    off << a.offsets(), b.offsets();
    std::string label = a.label().empty() && b.label().empty()
                            ? std::string{}
                            : a.label() + "&" + b.label();
    if (!prune) return ConvexSet(std::move(A), std::move(off), std::move(label));

    std::vector<Eigen::Index> keep;
    for (Eigen::Index i = 0; i < A.rows(); ++i) {
        bool duplicate = false;
        for (Eigen::Index k : keep) {
            if ((A.row(k) - A.row(i)).norm() < 1e-12) {
                duplicate = true;
                if (off[i] < off[k]) off[k] = off[i];
                break;
            }
        }
        if (!duplicate) keep.push_back(i);
    }
    // Drop a row when maximizing its normal over the other rows stays within it.
    std::vector<bool> redundant(keep.size(), false);
    for (std::size_t r = 0; r < keep.size(); ++r) {
        std::vector<std::vector<double>> rows;
        std::vector<double> rhs;
        for (std::size_t s = 0; s < keep.size(); ++s) {
            if (s == r || redundant[s]) continue;
            std::vector<double> row(static_cast<std::size_t>(d));
            for (int j = 0; j < d; ++j) row[static_cast<std::size_t>(j)] = A(keep[s], j);
            rows.push_back(std::move(row));
            rhs.push_back(off[keep[s]]);
        }
        std::vector<double> c(static_cast<std::size_t>(d));
        for (int j = 0; j < d; ++j) c[static_cast<std::size_t>(j)] = A(keep[r], j);
        const auto res = lp::maximize(c, rows, rhs);
        if (res.status == lp::Status::Optimal && res.objective <= off[keep[r]] + 1e-12)
            redundant[r] = true;
    }
    std::vector<Eigen::Index> final_rows;
    for (std::size_t r = 0; r < keep.size(); ++r)
        if (!redundant[r]) final_rows.push_back(keep[r]);
    Eigen::MatrixXd An(static_cast<Eigen::Index>(final_rows.size()), d);
    Eigen::VectorXd bn(static_cast<Eigen::Index>(final_rows.size()));
    for (std::size_t r = 0; r < final_rows.size(); ++r) {
        An.row(static_cast<Eigen::Index>(r)) = A.row(final_rows[r]);
        bn[static_cast<Eigen::Index>(r)] = off[final_rows[r]];
    }
    return ConvexSet(std::move(An), std::move(bn), std::move(label));
}

}  // namespace ixg
