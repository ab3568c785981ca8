#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace zerocell {

// Dense tableau simplex for: maximize c.x subject to A x <= b with x free and
// b >= 0 (the origin is always feasible). Free variables are split into
// positive and negative parts; slacks form the starting basis. Pivoting uses
// Dantzig's rule until the objective stalls, then switches to Bland's rule,
// which rules out cycling. Problem sizes here are small, so no sparsity.
struct LpResult {
    enum class Status { optimal, unbounded };
    Status status = Status::optimal;
    double objective = 0.0;
    std::vector<double> x;
};

inline LpResult simplex_maximize(const std::vector<std::vector<double>>& A,
                                 const std::vector<double>& b, const std::vector<double>& c) {
    const std::size_t m = A.size();
    const std::size_t nv = c.size();
    for (std::size_t i = 0; i < m; ++i) {
        if (A[i].size() != nv) throw std::invalid_argument("simplex_maximize: ragged A");
        if (b[i] < 0.0) throw std::invalid_argument("simplex_maximize: requires b >= 0");
    }

    const std::size_t ncols = 2 * nv + m; // +x, -x, slacks
    std::vector<std::vector<double>> T(m, std::vector<double>(ncols + 1, 0.0));
    std::vector<double> obj(ncols + 1, 0.0);
    std::vector<std::size_t> basis(m);

    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < nv; ++j) {
            T[i][2 * j] = A[i][j];
            T[i][2 * j + 1] = -A[i][j];
        }
        T[i][2 * nv + i] = 1.0;
        T[i][ncols] = b[i];
        basis[i] = 2 * nv + i;
    }
    for (std::size_t j = 0; j < nv; ++j) {
        obj[2 * j] = c[j];
        obj[2 * j + 1] = -c[j];
    }

    constexpr double tol = 1e-9;
    constexpr std::size_t max_iter = 200000;
    bool bland = false;
    double last_objective = 0.0;
    std::size_t stalled = 0;
    for (std::size_t iter = 0; iter < max_iter; ++iter) {
        if (!bland) {
            const double objective = -obj[ncols];
            if (objective > last_objective + 1e-12) {
                last_objective = objective;
                stalled = 0;
            } else if (++stalled > 60) {
                bland = true; // degenerate plateau: finish with Bland's rule
            }
        }
        // Entering column: steepest reduced cost, or lowest index under Bland.
        std::size_t enter = ncols;
        double best_cost = tol;
        for (std::size_t j = 0; j < ncols; ++j) {
            if (obj[j] > best_cost) {
                enter = j;
                if (bland) break;
                best_cost = obj[j];
            }
        }
        if (enter == ncols) {
            LpResult res;
            res.status = LpResult::Status::optimal;
            res.objective = -obj[ncols];
            res.x.assign(nv, 0.0);
            for (std::size_t i = 0; i < m; ++i) {
                if (basis[i] < 2 * nv) {
                    const std::size_t j = basis[i] / 2;
                    res.x[j] += (basis[i] % 2 == 0 ? 1.0 : -1.0) * T[i][ncols];
                }
            }
            return res;
        }
        // Leaving: min ratio; ties by lowest basis index.
        std::size_t leave = m;
        double best_ratio = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            if (T[i][enter] > tol) {
                const double ratio = T[i][ncols] / T[i][enter];
                if (leave == m || ratio < best_ratio - 1e-12 ||
                    (ratio < best_ratio + 1e-12 && basis[i] < basis[leave])) {
                    leave = i;
                    best_ratio = ratio;
                }
            }
        }
        if (leave == m) {
            LpResult res;
            res.status = LpResult::Status::unbounded;
            return res;
        }
        // Pivot.
        const double piv = T[leave][enter];
        for (std::size_t j = 0; j <= ncols; ++j) T[leave][j] /= piv;
        for (std::size_t i = 0; i < m; ++i) {
            if (i == leave) continue;
            const double f = T[i][enter];
            if (f == 0.0) continue;
            for (std::size_t j = 0; j <= ncols; ++j) T[i][j] -= f * T[leave][j];
        }
        const double fo = obj[enter];
        if (fo != 0.0) {
            for (std::size_t j = 0; j <= ncols; ++j) obj[j] -= fo * T[leave][j];
        }
        basis[leave] = enter;
    }
    throw std::runtime_error("simplex_maximize: iteration cap hit");
}

} // namespace zerocell
