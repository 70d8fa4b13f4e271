#include "borel_adapt/metrics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "borel_adapt/simplex.hpp"

namespace borel_adapt {

double tv_distance(const std::vector<double>& mu, const std::vector<double>& nu) {
    if (mu.size() != nu.size()) throw std::invalid_argument("tv_distance: length mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < mu.size(); ++i) s += std::fabs(mu[i] - nu[i]);
    return s;
}

MetricReport bl_distance(const std::vector<double>& mu, const std::vector<double>& nu,
                         const std::vector<std::vector<double>>& d) {
    const std::size_t n = mu.size();
    if (nu.size() != n || d.size() != n)
        throw std::invalid_argument("bl_distance: size mismatch");

    // Substitute g_i = f_i + t (so g >= 0 holds on the feasible set and the
    // origin is feasible). Since sum_i (mu_i - nu_i) = 0 the objective is
    // unchanged. Variables: g_0..g_{n-1}, t.
    std::vector<double> c(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) c[i] = mu[i] - nu[i];

    std::vector<std::vector<double>> a;
    std::vector<double> b;
    // g_i - 2t <= 0  (i.e. f_i <= t)
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> row(n + 1, 0.0);
        row[i] = 1.0;
        row[n] = -2.0;
        a.push_back(std::move(row));
        b.push_back(0.0);
    }
    // g_i - g_j + t d_ij <= d_ij, both orientations
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            std::vector<double> row(n + 1, 0.0);
            row[i] = 1.0;
            row[j] = -1.0;
            row[n] = d[i][j];
            a.push_back(std::move(row));
            b.push_back(d[i][j]);
        }
    // t <= 1
    {
        std::vector<double> row(n + 1, 0.0);
        row[n] = 1.0;
        a.push_back(std::move(row));
        b.push_back(1.0);
    }

    SimplexResult lp;
    try {
        lp = simplex_maximize(c, a, b);
    } catch (const std::runtime_error& e) {
        throw std::runtime_error(std::string("bl_distance: LP solver failed: ") + e.what());
    }

    MetricReport rep;
    rep.value = std::max(0.0, lp.objective);
    std::vector<double> f(n);
    const double t = lp.x[n];
    for (std::size_t i = 0; i < n; ++i) f[i] = lp.x[i] - t;
    rep.argmax_function = std::move(f);
    return rep;
}

MetricReport uniform_bl_distance(const FiniteKernel& k1, const FiniteKernel& k2,
                                 const std::vector<std::vector<double>>& d_state) {
    if (k1.n_states() != k2.n_states() || k1.n_actions() != k2.n_actions())
        throw std::invalid_argument("uniform_bl_distance: shape mismatch");
    MetricReport rep;
    for (std::size_t x = 0; x < k1.n_states(); ++x)
        for (std::size_t u = 0; u < k1.n_actions(); ++u) {
            const double v = bl_distance(k1.row(x, u), k2.row(x, u), d_state).value;
            if (!rep.argmax_pair || v > rep.value) {
                rep.value = v;
                rep.argmax_pair = {x, u};
            }
        }
    return rep;
}

MetricReport dobrushin_coefficient(const FiniteKernel& k) {
    MetricReport rep;
    const std::size_t rows = k.n_states() * k.n_actions();
    const std::size_t na = k.n_actions();
    rep.argmax_pair = {0, 0};
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t s = r + 1; s < rows; ++s) {
            const double v =
                0.5 * tv_distance(k.row(r / na, r % na), k.row(s / na, s % na));
            if (v > rep.value) {
                rep.value = v;
                rep.argmax_pair = {r, s};
            }
        }
    return rep;
}

double minorization_margin(const FiniteKernel& k, const std::vector<double>& lambda) {
    if (lambda.size() != k.n_states())
        throw std::invalid_argument("minorization_margin: lambda length mismatch");
    double margin = std::numeric_limits<double>::infinity();
    for (std::size_t x = 0; x < k.n_states(); ++x)
        for (std::size_t u = 0; u < k.n_actions(); ++u)
            for (std::size_t y = 0; y < k.n_states(); ++y)
                margin = std::min(margin, k(y, x, u) - lambda[y]);
    return margin;
}

}  // namespace borel_adapt
