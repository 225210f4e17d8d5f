#pragma once

// Benchmark worlds: a perfect 2D maze and chained random boxes.

#include <Eigen/Dense>

#include <algorithm>
#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "ixg/errors.hpp"
#include "ixg/geometry/convex_set.hpp"

namespace ixg {

struct Maze {
    int rows = 0;
    int cols = 0;
    std::uint64_t seed = 0;
    double overlap = 0.02;
    /// Open walls as (cell, neighbor) with cell < neighbor; cell = row * cols + col.
    std::vector<std::pair<int, int>> openings;
    /// One box per cell, indexed like the cells.
    std::vector<ConvexSet> sets;

    int cell(int r, int c) const { return r * cols + c; }
    bool is_open(int a, int b) const {
        if (a > b) std::swap(a, b);
        for (const auto& [u, v] : openings)
            if (u == a && v == b) return true;
        return false;
    }
};

/// Randomized-DFS perfect maze on a rows x cols grid of unit cells.
///
/// Cell (r, c) covers [c, c+1] x [r, r+1]. Its box is pushed out by
/// `overlap` through every open wall and pulled in by `overlap` from every
/// closed wall, so open neighbors share a 2*overlap band, closed neighbors are
/// separated, and diagonal cells never overlap.
inline Maze generate_maze(int rows, int cols, std::uint64_t seed, double overlap = 0.02) {
    if (rows < 2 || cols < 2) throw ArgumentError("generate_maze: rows and cols must be >= 2");
    Maze m;
    m.rows = rows;
    m.cols = cols;
    m.seed = seed;
    m.overlap = overlap;

    const int n = rows * cols;
    std::mt19937_64 rng(seed);
    std::vector<char> visited(static_cast<std::size_t>(n), 0);
    std::vector<int> stack{0};
    visited[0] = 1;
    while (!stack.empty()) {
        const int cur = stack.back();
        const int r = cur / cols;
        const int c = cur % cols;
        int nbrs[4];
        int k = 0;
        if (r > 0 && !visited[static_cast<std::size_t>(cur - cols)]) nbrs[k++] = cur - cols;
        if (r + 1 < rows && !visited[static_cast<std::size_t>(cur + cols)]) nbrs[k++] = cur + cols;
        if (c > 0 && !visited[static_cast<std::size_t>(cur - 1)]) nbrs[k++] = cur - 1;
        if (c + 1 < cols && !visited[static_cast<std::size_t>(cur + 1)]) nbrs[k++] = cur + 1;
        if (k == 0) {
            stack.pop_back();
            continue;
        }
        const int next = nbrs[rng() % static_cast<std::uint64_t>(k)];
        visited[static_cast<std::size_t>(next)] = 1;
        m.openings.emplace_back(std::min(cur, next), std::max(cur, next));
        stack.push_back(next);
    }
    std::sort(m.openings.begin(), m.openings.end());

    std::vector<char> open_left(static_cast<std::size_t>(n), 0), open_right(static_cast<std::size_t>(n), 0),
        open_down(static_cast<std::size_t>(n), 0), open_up(static_cast<std::size_t>(n), 0);
    for (const auto& [a, b] : m.openings) {
        if (b == a + 1) {
            open_right[static_cast<std::size_t>(a)] = 1;
            open_left[static_cast<std::size_t>(b)] = 1;
        } else {
            open_up[static_cast<std::size_t>(a)] = 1;  // b is the next row (larger y)
            open_down[static_cast<std::size_t>(b)] = 1;
        }
    }
    m.sets.reserve(static_cast<std::size_t>(n));
    for (int id = 0; id < n; ++id) {
        const int r = id / cols;
        const int c = id % cols;
        const auto i = static_cast<std::size_t>(id);
        Point lo(2), hi(2);
        lo << c + (open_left[i] ? -overlap : overlap), r + (open_down[i] ? -overlap : overlap);
        hi << c + 1 + (open_right[i] ? overlap : -overlap), r + 1 + (open_up[i] ? overlap : -overlap);
        m.sets.push_back(ConvexSet::box(lo, hi, "cell" + std::to_string(id)));
    }
    return m;
}

/// Random axis-aligned boxes inside `bounds`; box k > 0 grows out of a face of
/// an earlier box and overlaps it, so the overlap graph is connected. Half-widths are
/// drawn from [min_half, max_half] times the bounds extent per axis.
inline std::vector<ConvexSet> generate_box_world(const BoundingBox& bounds, int n_boxes, std::uint64_t seed,
                                                 double min_half = 0.08, double max_half = 0.25) {
    if (n_boxes < 1) throw ArgumentError("generate_box_world: need at least one box");
    if (!(min_half > 0.0 && min_half <= max_half)) throw ArgumentError("generate_box_world: bad size range");
    const auto d = bounds.lo.size();
    std::vector<ConvexSet> out;
    if (n_boxes == 1) {
        out.push_back(ConvexSet::box(bounds.lo, bounds.hi, "box0"));
        return out;
    }
    std::mt19937_64 rng(seed);
    auto uniform = [&](double a, double b) {
        return a + (b - a) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
    };
    const Eigen::VectorXd extent = bounds.hi - bounds.lo;
    std::vector<BoundingBox> boxes;
    for (int k = 0; k < n_boxes; ++k) {
        Point half(d);
        for (Eigen::Index i = 0; i < d; ++i) half[i] = uniform(min_half, max_half) * extent[i];
        BoundingBox b{Point(d), Point(d)};
        if (k == 0) {
            for (Eigen::Index i = 0; i < d; ++i) {
                const double c = uniform(bounds.lo[i] + 0.2 * extent[i], bounds.hi[i] - 0.2 * extent[i]);
                b.lo[i] = std::max(bounds.lo[i], c - half[i]);
                b.hi[i] = std::min(bounds.hi[i], c + half[i]);
            }
        } else {
            // Grow out of a random face of an earlier box, overlapping it
            // by a fraction of the thinner of the two. Of two candidates,
            // keep the one touching fewer other boxes: more tries flatten the
            // world into a tree, fewer let it collapse into one clump.
            auto overlaps = [&](const BoundingBox& x, const BoundingBox& y) {
                for (Eigen::Index i = 0; i < d; ++i)
                    if (std::min(x.hi[i], y.hi[i]) <= std::max(x.lo[i], y.lo[i])) return false;
                return true;
            };
            int best_score = std::numeric_limits<int>::max();
            for (int attempt = 0; attempt < 2; ++attempt) {
                // Mostly extend the newest box so worlds stay corridor-like.
                const std::uint64_t pick = rng() % 4 == 0 ? rng() % static_cast<std::uint64_t>(k)
                                                          : static_cast<std::uint64_t>(k - 1);
                const auto& parent = boxes[static_cast<std::size_t>(pick)];
                const auto axis = static_cast<Eigen::Index>(rng() % static_cast<std::uint64_t>(d));
                const bool up = (rng() & 1) != 0;
                BoundingBox c{Point(d), Point(d)};
                for (Eigen::Index i = 0; i < d; ++i) {
                    const double w = parent.hi[i] - parent.lo[i];
                    if (i == axis) {
                        const double depth = uniform(0.1, 0.3) * std::min(2.0 * half[i], w);
                        c.lo[i] = up ? parent.hi[i] - depth : parent.lo[i] + depth - 2.0 * half[i];
                        c.hi[i] = c.lo[i] + 2.0 * half[i];
                    } else {
                        const double ctr = uniform(parent.lo[i] + 0.1 * w, parent.hi[i] - 0.1 * w);
                        c.lo[i] = ctr - half[i];
                        c.hi[i] = ctr + half[i];
                    }
                    c.lo[i] = std::max(bounds.lo[i], c.lo[i]);
                    c.hi[i] = std::min(bounds.hi[i], c.hi[i]);
                }
                int score = c.hi[axis] - c.lo[axis] >= half[axis] ? 0 : 1000;  // squashed by the bounds
                for (std::size_t j = 0; j < boxes.size(); ++j)
                    if (j != pick && overlaps(c, boxes[j])) ++score;
                if (score < best_score) {
                    best_score = score;
                    b = c;
                }
                if (score == 0) break;
            }
        }
        boxes.push_back(b);
        out.push_back(ConvexSet::box(b.lo, b.hi, "box" + std::to_string(k)));
    }
    return out;
}

}  // namespace ixg
