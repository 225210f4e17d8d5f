#pragma once

// SVG rendering of 2D worlds, trajectories and lower bound graphs.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <string>
#include <vector>

#include "ixg/errors.hpp"
#include "ixg/geometry/convex_set.hpp"
#include "ixg/lbg.hpp"
#include "ixg/trajopt/trajectory.hpp"

namespace ixg {

struct SvgOptions {
    int width = 800;  // pixels; height follows the aspect ratio
    double padding = 0.05;  // fraction of the larger extent
    int samples = 400;  // trajectory polyline points
    bool label_sets = false;
};

/// Corners of a bounded 2D polytope in counterclockwise order.
inline std::vector<Eigen::Vector2d> polygon_vertices(const ConvexSet& s, double tol = 1e-9) {
    if (s.dim() != 2) throw UnsupportedDimension("polygon_vertices: need a 2D set");
    const auto& A = s.normals();
    const auto& b = s.offsets();
    std::vector<Eigen::Vector2d> pts;
    for (Eigen::Index i = 0; i < A.rows(); ++i) {
        for (Eigen::Index j = i + 1; j < A.rows(); ++j) {
            Eigen::Matrix2d M;
            M << A(i, 0), A(i, 1), A(j, 0), A(j, 1);
            if (std::abs(M.determinant()) < 1e-12) continue;
            const Eigen::Vector2d p = M.inverse() * Eigen::Vector2d(b[i], b[j]);
            if ((A * p - b).maxCoeff() > tol) continue;
            bool dup = false;
            for (const auto& q : pts) dup = dup || (q - p).norm() < 1e-9;
            if (!dup) pts.push_back(p);
        }
    }
    if (pts.empty()) return pts;
    Eigen::Vector2d c = Eigen::Vector2d::Zero();
    for (const auto& p : pts) c += p;
    c /= static_cast<double>(pts.size());
    std::sort(pts.begin(), pts.end(), [&](const Eigen::Vector2d& a, const Eigen::Vector2d& q) {
        return std::atan2(a.y() - c.y(), a.x() - c.x()) < std::atan2(q.y() - c.y(), q.x() - c.x());
    });
    return pts;
}

namespace detail {

struct SvgFrame {
    Eigen::Vector2d lo, hi;
    double scale = 1.0;
    int width = 0, height = 0;

    Eigen::Vector2d map(const Eigen::Vector2d& p) const {
        return {(p.x() - lo.x()) * scale, (hi.y() - p.y()) * scale};
    }
};

inline std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

}  // namespace detail

/// Sets as translucent polygons, the trajectory as a sampled polyline, and
/// optionally the LBG (triplet edges solid, interface edges dashed).
inline void emit_svg(std::ostream& os, const std::vector<ConvexSet>& sets, const Trajectory* traj = nullptr,
                     const LowerBoundGraph* lbg = nullptr, const SvgOptions& opt = {}) {
    if (sets.empty()) throw ArgumentError("emit_svg: no sets");
    for (const auto& s : sets)
        if (s.dim() != 2) throw UnsupportedDimension("emit_svg: only 2D worlds can be drawn");

    std::vector<std::vector<Eigen::Vector2d>> polys;
    detail::SvgFrame f;
    f.lo = Eigen::Vector2d::Constant(std::numeric_limits<double>::infinity());
    f.hi = -f.lo;
    for (const auto& s : sets) {
        polys.push_back(polygon_vertices(s));
        for (const auto& p : polys.back()) {
            f.lo = f.lo.cwiseMin(p);
            f.hi = f.hi.cwiseMax(p);
        }
    }
    const double ext = std::max({f.hi.x() - f.lo.x(), f.hi.y() - f.lo.y(), 1e-9});
    f.lo.array() -= opt.padding * ext;
    f.hi.array() += opt.padding * ext;
    f.scale = opt.width / (f.hi.x() - f.lo.x());
    f.width = opt.width;
    f.height = static_cast<int>(std::ceil((f.hi.y() - f.lo.y()) * f.scale));
    const double px = ext * f.scale;  // pixels per world extent, for stroke widths

    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << f.width << "\" height=\"" << f.height
       << "\" viewBox=\"0 0 " << f.width << ' ' << f.height << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<g id=\"sets\" fill=\"#4a90d9\" fill-opacity=\"0.18\" stroke=\"#2b5f99\" stroke-width=\""
       << detail::fmt(std::max(0.5, px * 0.001)) << "\">\n";
    for (std::size_t i = 0; i < polys.size(); ++i) {
        os << "<polygon points=\"";
        for (std::size_t k = 0; k < polys[i].size(); ++k) {
            const auto q = f.map(polys[i][k]);
            os << (k ? " " : "") << detail::fmt(q.x()) << ',' << detail::fmt(q.y());
        }
        os << "\"/>\n";
    }
    os << "</g>\n";
    if (opt.label_sets) {
        os << "<g id=\"labels\" font-family=\"sans-serif\" font-size=\"10\" fill=\"#333\">\n";
        for (std::size_t i = 0; i < polys.size(); ++i) {
            if (polys[i].empty()) continue;
            Eigen::Vector2d c = Eigen::Vector2d::Zero();
            for (const auto& p : polys[i]) c += p;
            const auto q = f.map(c / static_cast<double>(polys[i].size()));
            os << "<text x=\"" << detail::fmt(q.x()) << "\" y=\"" << detail::fmt(q.y()) << "\">" << i << "</text>\n";
        }
        os << "</g>\n";
    }

    if (lbg != nullptr && lbg->num_vertices() > 0) {
        if (lbg->vertex(0).point.size() != 2) throw UnsupportedDimension("emit_svg: LBG is not 2D");
        const double r = std::max(1.0, px * 0.003);
        os << "<g id=\"lbg-edges\" fill=\"none\">\n";
        for (const auto& e : lbg->edges()) {
            const auto a = f.map(lbg->vertex(e.from).point.head<2>());
            const auto b = f.map(lbg->vertex(e.to).point.head<2>());
            const bool tri = e.kind == LbgEdgeKind::Triplet;
            os << "<line x1=\"" << detail::fmt(a.x()) << "\" y1=\"" << detail::fmt(a.y()) << "\" x2=\""
               << detail::fmt(b.x()) << "\" y2=\"" << detail::fmt(b.y()) << "\" stroke=\""
               << (tri ? "#1f4e9c" : "#c0392b") << "\" stroke-width=\"" << detail::fmt(r * 0.4) << '"'
               << (tri ? "" : " stroke-dasharray=\"3,2\"") << "/>\n";
        }
        os << "</g>\n<g id=\"lbg-vertices\" fill=\"#1f4e9c\">\n";
        for (const auto& v : lbg->vertices()) {
            const auto q = f.map(v.point.head<2>());
            os << "<circle cx=\"" << detail::fmt(q.x()) << "\" cy=\"" << detail::fmt(q.y()) << "\" r=\""
               << detail::fmt(r) << "\"/>\n";
        }
        os << "</g>\n";
    }

    if (traj != nullptr && !traj->empty()) {
        if (traj->start().size() != 2) throw UnsupportedDimension("emit_svg: trajectory is not 2D");
        std::vector<Eigen::Vector2d> pts;
        if (traj->duration() <= 0.0) {
            pts.push_back(traj->start().head<2>());
            pts.push_back(traj->end().head<2>());
        } else {
            for (const auto& tp : sample(*traj, std::max(2, opt.samples))) pts.push_back(tp.point.head<2>());
        }
        os << "<polyline id=\"trajectory\" fill=\"none\" stroke=\"#111\" stroke-width=\""
           << detail::fmt(std::max(1.0, px * 0.004)) << "\" points=\"";
        for (std::size_t k = 0; k < pts.size(); ++k) {
            const auto q = f.map(pts[k]);
            os << (k ? " " : "") << detail::fmt(q.x()) << ',' << detail::fmt(q.y());
        }
        os << "\"/>\n";
        const double r = std::max(2.0, px * 0.006);
        const auto s = f.map(pts.front());
        const auto g = f.map(pts.back());
        os << "<circle id=\"start\" cx=\"" << detail::fmt(s.x()) << "\" cy=\"" << detail::fmt(s.y()) << "\" r=\""
           << detail::fmt(r) << "\" fill=\"#d62728\"/>\n";
        os << "<circle id=\"goal\" cx=\"" << detail::fmt(g.x()) << "\" cy=\"" << detail::fmt(g.y()) << "\" r=\""
           << detail::fmt(r) << "\" fill=\"#2ca02c\"/>\n";
    }
    os << "</svg>\n";
}

inline void emit_svg(const std::string& path, const std::vector<ConvexSet>& sets, const Trajectory* traj = nullptr,
                     const LowerBoundGraph* lbg = nullptr, const SvgOptions& opt = {}) {
    for (const auto& s : sets)
        if (s.dim() != 2) throw UnsupportedDimension("emit_svg: only 2D worlds can be drawn");
    std::ofstream out(path);
    if (!out) throw ArgumentError("emit_svg: cannot write '" + path + "'");
    emit_svg(out, sets, traj, lbg, opt);
}

}  // namespace ixg
