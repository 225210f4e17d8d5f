#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "ixg/errors.hpp"
#include "ixg/geometry/convex_set.hpp"

namespace ixg {

struct CostWeights {
    double a = 1.0;  // arc length
    double b = 1.0;  // duration

    CostWeights() = default;
    CostWeights(double arc, double time) : a(arc), b(time) {
        if (a < 0.0 || b < 0.0 || !(a + b > 0.0))
            throw ArgumentError("CostWeights: need a, b >= 0 and a + b > 0");
    }
};

/// Bezier piece of order r over s in [0, 1], traversed in `duration` seconds.
struct TrajectorySegment {
    std::vector<Point> control_points;
    double duration = 0.0;
    int set_id = -1;

    int order() const { return static_cast<int>(control_points.size()) - 1; }

    /// Control-polygon length (upper bound on arc length, exact for order 1).
    double length() const {
        double l = 0.0;
        for (std::size_t i = 0; i + 1 < control_points.size(); ++i)
            l += (control_points[i + 1] - control_points[i]).norm();
        return l;
    }

    /// de Casteljau evaluation at normalized parameter s.
    Point eval(double s) const {
        std::vector<Point> pts = control_points;
        for (std::size_t lvl = 1; lvl < pts.size(); ++lvl)
            for (std::size_t i = 0; i + lvl < pts.size(); ++i)
                pts[i] = (1.0 - s) * pts[i] + s * pts[i + 1];
        return pts.front();
    }

    /// Time-domain derivative control points r (c_{i+1} - c_i) / T.
    std::vector<Eigen::VectorXd> velocity_points() const {
        std::vector<Eigen::VectorXd> v;
        const double r = order();
        for (std::size_t i = 0; i + 1 < control_points.size(); ++i)
            v.push_back(r * (control_points[i + 1] - control_points[i]) /
                        std::max(duration, 1e-300));
        return v;
    }

    /// Order-elevated copy (same curve, one more control point).
    TrajectorySegment elevated() const {
        TrajectorySegment out;
        out.duration = duration;
        out.set_id = set_id;
        const int r = order();
        out.control_points.resize(static_cast<std::size_t>(r + 2));
        out.control_points.front() = control_points.front();
        out.control_points.back() = control_points.back();
        for (int i = 1; i <= r; ++i) {
            const double w = static_cast<double>(i) / (r + 1);
            out.control_points[static_cast<std::size_t>(i)] =
                w * control_points[static_cast<std::size_t>(i - 1)] +
                (1.0 - w) * control_points[static_cast<std::size_t>(i)];
        }
        return out;
    }
};

class Trajectory {
public:
    Trajectory() = default;
    Trajectory(std::vector<TrajectorySegment> segments, int continuity)
        : segments_(std::move(segments)), continuity_(continuity) {}

    const std::vector<TrajectorySegment>& segments() const noexcept { return segments_; }
    std::vector<TrajectorySegment>& segments() noexcept { return segments_; }
    int continuity() const noexcept { return continuity_; }
    bool empty() const noexcept { return segments_.empty(); }
    std::size_t size() const noexcept { return segments_.size(); }

    double length() const {
        double l = 0.0;
        for (const auto& s : segments_) l += s.length();
        return l;
    }
    double duration() const {
        double t = 0.0;
        for (const auto& s : segments_) t += s.duration;
        return t;
    }

    Point start() const { return segments_.front().control_points.front(); }
    Point end() const { return segments_.back().control_points.back(); }

    std::vector<int> set_ids() const {
        std::vector<int> ids;
        ids.reserve(segments_.size());
        for (const auto& s : segments_) ids.push_back(s.set_id);
        return ids;
    }

    /// Position at global time t (clamped to [0, duration]).
    Point at(double t) const {
        if (segments_.empty()) throw StateError("Trajectory::at on empty trajectory");
        double acc = 0.0;
        for (std::size_t k = 0; k < segments_.size(); ++k) {
            const auto& seg = segments_[k];
            if (t <= acc + seg.duration || k + 1 == segments_.size()) {
                const double s = seg.duration > 0.0 ? (t - acc) / seg.duration : 1.0;
                return seg.eval(std::clamp(s, 0.0, 1.0));
            }
            acc += seg.duration;
        }
        return end();
    }

    /// Concatenation; the caller guarantees continuity at the seam.
    Trajectory concatenated(const Trajectory& tail) const {
        Trajectory out = *this;
        out.segments_.insert(out.segments_.end(), tail.segments_.begin(), tail.segments_.end());
        return out;
    }

private:
    std::vector<TrajectorySegment> segments_;
    int continuity_ = 0;
};

/// a * L + b * sum T_k with L the control-polygon length.
inline double cost(const Trajectory& traj, const CostWeights& w) {
    return w.a * traj.length() + w.b * traj.duration();
}

struct TimedPoint {
    double time;
    Point point;
};

/// n samples at uniform global times; endpoints exact.
inline std::vector<TimedPoint> sample(const Trajectory& traj, int n) {
    if (n < 2) throw ArgumentError("sample: need n >= 2");
    if (traj.empty()) throw StateError("sample: empty trajectory");
    std::vector<TimedPoint> out;
    out.reserve(static_cast<std::size_t>(n));
    const double total = traj.duration();
    for (int i = 0; i < n; ++i) {
        if (i == 0) {
            out.push_back({0.0, traj.start()});
        } else if (i == n - 1) {
            out.push_back({total, traj.end()});
        } else {
            const double t = total * i / (n - 1);
            out.push_back({t, traj.at(t)});
        }
    }
    return out;
}

}  // namespace ixg
