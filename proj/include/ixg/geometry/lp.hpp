#pragma once

// Small dense linear programs for the geometric primitives (Chebyshev
// centers, support functions). Problem sizes are a handful of variables and
// a few dozen constraints, so a tableau simplex is the right tool.

#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

namespace ixg::lp {

enum class Status { Optimal, Infeasible, Unbounded };

struct Result {
    Status status = Status::Infeasible;
    std::vector<double> x;
    double objective = 0.0;
};

/// maximize c^T x  subject to  A x <= b, with every x_j free.
///
/// A is row-major with rows.size() == b.size() and each row of length
/// c.size(). Free variables are split as x = x+ - x-; rows with negative
/// right-hand side get an artificial variable for phase 1. Bland's rule
/// guarantees termination.
inline Result maximize(const std::vector<double>& c,
                       const std::vector<std::vector<double>>& A,
                       const std::vector<double>& b, double tol = 1e-12) {
    const std::size_t n = c.size();
    const std::size_t m = b.size();
    const std::size_t n_split = 2 * n;

    // Columns: [x+ (n) | x- (n) | slack (m) | artificial (n_art)] | rhs
    std::vector<std::size_t> art_rows;
    for (std::size_t i = 0; i < m; ++i)
        if (b[i] < 0.0) art_rows.push_back(i);
    const std::size_t n_art = art_rows.size();
    const std::size_t cols = n_split + m + n_art;
    const std::size_t rhs = cols;

    std::vector<std::vector<double>> T(m + 1, std::vector<double>(cols + 1, 0.0));
    std::vector<std::size_t> basis(m);
    std::size_t next_art = 0;
    for (std::size_t i = 0; i < m; ++i) {
        const double sign = b[i] < 0.0 ? -1.0 : 1.0;
        for (std::size_t j = 0; j < n; ++j) {
            T[i][j] = sign * A[i][j];
            T[i][n + j] = -sign * A[i][j];
        }
        T[i][n_split + i] = sign;
        T[i][rhs] = sign * b[i];
        if (sign < 0.0) {
            const std::size_t a = n_split + m + next_art++;
            T[i][a] = 1.0;
            basis[i] = a;
        } else {
            basis[i] = n_split + i;
        }
    }

    auto pivot = [&](std::size_t row, std::size_t col) {
        const double p = T[row][col];
        for (double& v : T[row]) v /= p;
        for (std::size_t i = 0; i <= m; ++i) {
            if (i == row) continue;
            const double f = T[i][col];
            if (f == 0.0) continue;
            for (std::size_t j = 0; j <= cols; ++j) T[i][j] -= f * T[row][j];
        }
        basis[row] = col;
    };

    // Objective row holds reduced costs of the minimization form; a column
    // enters while its entry is negative.
    auto run = [&](std::size_t allowed_cols) -> bool {
        for (int iter = 0; iter < 100000; ++iter) {
            std::size_t enter = allowed_cols;
            for (std::size_t j = 0; j < allowed_cols; ++j) {
                if (T[m][j] < -tol) {
                    enter = j;
                    break;
                }
            }
            if (enter == allowed_cols) return true;
            std::size_t leave = m;
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < m; ++i) {
                if (T[i][enter] > tol) {
                    const double ratio = T[i][rhs] / T[i][enter];
                    if (ratio < best - tol ||
                        (ratio <= best + tol && leave < m && basis[i] < basis[leave])) {
                        best = ratio;
                        leave = i;
                    }
                }
            }
            if (leave == m) return false;  // unbounded
            pivot(leave, enter);
        }
        return false;
    };

    Result out;
    if (n_art > 0) {
        // Phase 1: minimize the sum of artificials.
        for (std::size_t j = 0; j <= cols; ++j) T[m][j] = 0.0;
        for (std::size_t k = 0; k < n_art; ++k) T[m][n_split + m + k] = 1.0;
        for (std::size_t i : art_rows)
            for (std::size_t j = 0; j <= cols; ++j) T[m][j] -= T[i][j];
        run(cols);
        if (-T[m][rhs] > 1e-9 * (1.0 + std::abs(T[m][rhs]))) {
            out.status = Status::Infeasible;
            return out;
        }
        // Drive remaining artificials out of the basis.
        for (std::size_t i = 0; i < m; ++i) {
            if (basis[i] < n_split + m) continue;
            for (std::size_t j = 0; j < n_split + m; ++j) {
                if (std::abs(T[i][j]) > 1e-9) {
                    pivot(i, j);
                    break;
                }
            }
        }
    }

    // Phase 2 over the original columns.
    for (std::size_t j = 0; j <= cols; ++j) T[m][j] = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        T[m][j] = -c[j];
        T[m][n + j] = c[j];
    }
    for (std::size_t i = 0; i < m; ++i) {
        const std::size_t bj = basis[i];
        const double f = T[m][bj];
        if (f == 0.0) continue;
        for (std::size_t j = 0; j <= cols; ++j) T[m][j] -= f * T[i][j];
    }
    if (!run(n_split + m)) {
        out.status = Status::Unbounded;
        return out;
    }

    std::vector<double> split(cols, 0.0);
    for (std::size_t i = 0; i < m; ++i) split[basis[i]] = T[i][rhs];
    out.x.resize(n);
    for (std::size_t j = 0; j < n; ++j) out.x[j] = split[j] - split[n + j];
    out.objective = 0.0;
    for (std::size_t j = 0; j < n; ++j) out.objective += c[j] * out.x[j];
    out.status = Status::Optimal;
    return out;
}

}  // namespace ixg::lp
