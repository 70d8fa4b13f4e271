#include "borel_adapt/simplex.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace borel_adapt {

SimplexResult simplex_maximize(const std::vector<double>& c,
                               const std::vector<std::vector<double>>& a,
                               const std::vector<double>& b) {
    const std::size_t n = c.size();
    const std::size_t m = a.size();
    for (double bi : b)
        if (bi < 0.0) throw std::runtime_error("simplex: rhs must be nonnegative");

    // tableau: m rows x (n + m + 1) columns, objective row last
    const std::size_t cols = n + m + 1;
    std::vector<std::vector<double>> t(m + 1, std::vector<double>(cols, 0.0));
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < n; ++j) t[i][j] = a[i][j];
        t[i][n + i] = 1.0;
        t[i][cols - 1] = b[i];
    }
    for (std::size_t j = 0; j < n; ++j) t[m][j] = -c[j];

    std::vector<std::size_t> basis(m);
    for (std::size_t i = 0; i < m; ++i) basis[i] = n + i;

    const double eps = 1e-11;
    const std::size_t dantzig_budget = 40 * (m + n);
    const std::size_t total_budget = 400 * (m + n) + 2000;

    for (std::size_t iter = 0;; ++iter) {
        if (iter > total_budget) throw std::runtime_error("simplex: iteration limit exceeded");
        // entering column
        std::size_t pivot_col = cols;  // sentinel
        if (iter < dantzig_budget) {
            double best = -eps;
            for (std::size_t j = 0; j + 1 < cols; ++j)
                if (t[m][j] < best) {
                    best = t[m][j];
                    pivot_col = j;
                }
        } else {
            // Bland: first improving column
            for (std::size_t j = 0; j + 1 < cols; ++j)
                if (t[m][j] < -eps) {
                    pivot_col = j;
                    break;
                }
        }
        if (pivot_col == cols) break;  // optimal

        // ratio test
        std::size_t pivot_row = m;
        double best_ratio = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < m; ++i) {
            if (t[i][pivot_col] > eps) {
                const double ratio = t[i][cols - 1] / t[i][pivot_col];
                if (ratio < best_ratio - eps ||
                    (ratio < best_ratio + eps &&
                     (pivot_row == m || basis[i] < basis[pivot_row]))) {
                    best_ratio = ratio;
                    pivot_row = i;
                }
            }
        }
        if (pivot_row == m) throw std::runtime_error("simplex: problem is unbounded");

        // pivot
        const double p = t[pivot_row][pivot_col];
        for (double& v : t[pivot_row]) v /= p;
        for (std::size_t i = 0; i <= m; ++i) {
            if (i == pivot_row) continue;
            const double f = t[i][pivot_col];
            if (std::fabs(f) < 1e-15) continue;
            for (std::size_t j = 0; j < cols; ++j) t[i][j] -= f * t[pivot_row][j];
        }
        basis[pivot_row] = pivot_col;
    }

    SimplexResult res;
    res.x.assign(n, 0.0);
    for (std::size_t i = 0; i < m; ++i)
        if (basis[i] < n) res.x[basis[i]] = t[i][cols - 1];
    res.objective = t[m][cols - 1];
    return res;
}

}  // namespace borel_adapt
