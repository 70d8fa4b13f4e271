#include "borel_adapt/planner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "borel_adapt/metrics.hpp"

namespace borel_adapt {

double span(const std::vector<double>& v) {
    auto [mn, mx] = std::minmax_element(v.begin(), v.end());
    return *mx - *mn;
}

StationaryPolicy StationaryPolicy::deterministic(std::vector<std::size_t> actions,
                                                 std::size_t n_actions) {
    StationaryPolicy p;
    p.n_actions_ = n_actions;
    p.rows_.resize(actions.size(), std::vector<double>(n_actions, 0.0));
    for (std::size_t x = 0; x < actions.size(); ++x) {
        if (actions[x] >= n_actions)
            throw std::out_of_range("StationaryPolicy: action index out of range");
        p.rows_[x][actions[x]] = 1.0;
    }
    p.actions_ = std::move(actions);
    return p;
}

StationaryPolicy StationaryPolicy::randomized(std::vector<std::vector<double>> rows) {
    StationaryPolicy p;
    if (rows.empty()) throw std::invalid_argument("StationaryPolicy: no rows");
    p.n_actions_ = rows.front().size();
    for (const auto& r : rows) {
        if (r.size() != p.n_actions_)
            throw std::invalid_argument("StationaryPolicy: ragged rows");
        double s = 0.0;
        for (double w : r) {
            if (w < 0.0) throw std::invalid_argument("StationaryPolicy: negative weight");
            s += w;
        }
        if (std::fabs(s - 1.0) > 1e-12)
            throw std::invalid_argument("StationaryPolicy: row not stochastic");
    }
    p.rows_ = std::move(rows);
    return p;
}

StationaryPolicy StationaryPolicy::uniform(std::size_t n_states, std::size_t n_actions) {
    return randomized(std::vector<std::vector<double>>(
        n_states, std::vector<double>(n_actions, 1.0 / n_actions)));
}

std::size_t StationaryPolicy::sample_action(std::size_t x, RngStream& rng) const {
    if (is_deterministic()) return actions_[x];
    return rng.categorical(rows_[x]);
}

std::pair<std::vector<double>, std::vector<std::size_t>> bellman_apply(
    const FiniteKernel& k, const std::vector<std::vector<double>>& cost,
    const std::vector<double>& v) {
    const std::size_t ns = k.n_states(), na = k.n_actions();
    if (v.size() != ns) throw std::invalid_argument("bellman_apply: v length mismatch");
    std::vector<double> tv(ns);
    std::vector<std::size_t> argmin(ns);
    for (std::size_t x = 0; x < ns; ++x) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t best_u = 0;
        for (std::size_t u = 0; u < na; ++u) {
            const auto& r = k.row(x, u);
            double q = cost[x][u];
            for (std::size_t y = 0; y < ns; ++y) q += r[y] * v[y];
            if (q < best) {
                best = q;
                best_u = u;
            }
        }
        tv[x] = best;
        argmin[x] = best_u;
    }
    return {std::move(tv), std::move(argmin)};
}

PlannerSolution relative_value_iteration(const FiniteKernel& k,
                                         const std::vector<std::vector<double>>& cost,
                                         double tol, std::size_t max_iter,
                                         const std::vector<double>* v_init) {
    if (tol <= 0.0) throw std::invalid_argument("relative_value_iteration: tol must be > 0");
    const std::size_t ns = k.n_states();
    std::vector<double> v = v_init ? *v_init : std::vector<double>(ns, 0.0);
    if (v.size() != ns) throw std::invalid_argument("relative_value_iteration: bad v_init");

    PlannerSolution sol;
    for (std::size_t it = 1; it <= max_iter; ++it) {
        auto [tv, argmin] = bellman_apply(k, cost, v);
        std::vector<double> diff(ns);
        for (std::size_t x = 0; x < ns; ++x) diff[x] = tv[x] - v[x];
        auto [mn, mx] = std::minmax_element(diff.begin(), diff.end());
        const double residual = *mx - *mn;
        const double ref = tv[0];
        for (std::size_t x = 0; x < ns; ++x) v[x] = tv[x] - ref;
        if (residual <= tol) {
            sol.j_star = 0.5 * (*mn + *mx);
            sol.v_star = std::move(v);
            sol.policy = StationaryPolicy::deterministic(std::move(argmin), k.n_actions());
            sol.iterations = it;
            sol.residual_span = residual;
            return sol;
        }
    }
    auto [tv, argmin] = bellman_apply(k, cost, v);
    std::vector<double> diff(ns);
    for (std::size_t x = 0; x < ns; ++x) diff[x] = tv[x] - v[x];
    std::ostringstream msg;
    msg << "relative_value_iteration: max_iter=" << max_iter
        << " exhausted, residual span=" << span(diff);
    throw std::runtime_error(msg.str());
}

std::vector<std::vector<double>> policy_kernel(const FiniteKernel& k,
                                               const StationaryPolicy& policy) {
    const std::size_t ns = k.n_states(), na = k.n_actions();
    if (policy.n_states() != ns || policy.n_actions() != na)
        throw std::invalid_argument("policy_kernel: shape mismatch");
    std::vector<std::vector<double>> p(ns, std::vector<double>(ns, 0.0));
    for (std::size_t x = 0; x < ns; ++x)
        for (std::size_t u = 0; u < na; ++u) {
            const double w = policy.row(x)[u];
            if (w == 0.0) continue;
            const auto& r = k.row(x, u);
            for (std::size_t y = 0; y < ns; ++y) p[x][y] += w * r[y];
        }
    return p;
}

namespace {

double matrix_dobrushin(const std::vector<std::vector<double>>& p) {
    double beta = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i)
        for (std::size_t j = i + 1; j < p.size(); ++j)
            beta = std::max(beta, 0.5 * tv_distance(p[i], p[j]));
    return beta;
}

}  // namespace

InvariantMeasure invariant_measure(const std::vector<std::vector<double>>& p, double tol) {
    if (tol <= 0.0) throw std::invalid_argument("invariant_measure: tol must be > 0");
    const std::size_t n = p.size();
    const double beta = matrix_dobrushin(p);
    const double stop = tol * std::max(1e-6, 1.0 - beta);
    std::vector<double> mu(n, 1.0 / n), next(n);
    const std::size_t cap = 200000;
    for (std::size_t it = 0; it < cap; ++it) {
        std::fill(next.begin(), next.end(), 0.0);
        for (std::size_t x = 0; x < n; ++x) {
            const double w = mu[x];
            if (w == 0.0) continue;
            for (std::size_t y = 0; y < n; ++y) next[y] += w * p[x][y];
        }
        const double gap = tv_distance(mu, next);
        mu.swap(next);
        if (gap <= stop) {
            InvariantMeasure im;
            im.weights = std::move(mu);
            im.residual_tv = gap;
            return im;
        }
    }
    throw std::runtime_error("invariant_measure: power iteration did not converge");
}

std::vector<double> invariant_measure_direct(const std::vector<std::vector<double>>& p) {
    // solve pi (P - I) = 0 with the first equation replaced by sum pi = 1
    const std::size_t n = p.size();
    std::vector<std::vector<double>> a(n, std::vector<double>(n + 1, 0.0));
    for (std::size_t j = 0; j < n; ++j) {
        a[0][j] = 1.0;  // normalization row
    }
    a[0][n] = 1.0;
    for (std::size_t eq = 1; eq < n; ++eq) {
        // column eq of (P^T - I)
        for (std::size_t j = 0; j < n; ++j) a[eq][j] = p[j][eq] - (j == eq ? 1.0 : 0.0);
        a[eq][n] = 0.0;
    }
    // Gaussian elimination with partial pivoting
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::fabs(a[r][col]) > std::fabs(a[piv][col])) piv = r;
        if (std::fabs(a[piv][col]) < 1e-14)
            throw std::runtime_error("invariant_measure_direct: singular system");
        std::swap(a[col], a[piv]);
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col) continue;
            const double f = a[r][col] / a[col][col];
            if (f == 0.0) continue;
            for (std::size_t c2 = col; c2 <= n; ++c2) a[r][c2] -= f * a[col][c2];
        }
    }
    std::vector<double> pi(n);
    for (std::size_t i = 0; i < n; ++i) pi[i] = a[i][n] / a[i][i];
    return pi;
}

double average_cost(const FiniteKernel& k, const std::vector<std::vector<double>>& cost,
                    const StationaryPolicy& policy, double tol) {
    const auto p = policy_kernel(k, policy);
    const auto pi = invariant_measure(p, tol);
    double j = 0.0;
    for (std::size_t x = 0; x < k.n_states(); ++x)
        for (std::size_t u = 0; u < k.n_actions(); ++u)
            j += pi.weights[x] * policy.row(x)[u] * cost[x][u];
    return j;
}

double finite_horizon_cost(const FiniteKernel& k,
                           const std::vector<std::vector<double>>& cost,
                           const StationaryPolicy& policy, std::size_t horizon,
                           std::size_t x0) {
    if (horizon == 0) throw std::invalid_argument("finite_horizon_cost: horizon must be >= 1");
    const std::size_t ns = k.n_states(), na = k.n_actions();
    const auto p = policy_kernel(k, policy);
    std::vector<double> mu(ns, 0.0), next(ns);
    mu[x0] = 1.0;
    double total = 0.0;
    for (std::size_t t = 0; t < horizon; ++t) {
        for (std::size_t x = 0; x < ns; ++x) {
            if (mu[x] == 0.0) continue;
            for (std::size_t u = 0; u < na; ++u) total += mu[x] * policy.row(x)[u] * cost[x][u];
        }
        if (t + 1 < horizon) {
            std::fill(next.begin(), next.end(), 0.0);
            for (std::size_t x = 0; x < ns; ++x) {
                if (mu[x] == 0.0) continue;
                for (std::size_t y = 0; y < ns; ++y) next[y] += mu[x] * p[x][y];
            }
            mu.swap(next);
        }
    }
    return total / static_cast<double>(horizon);
}

double finite_horizon_cost_sampled(const FiniteKernel& k,
                                   const std::vector<std::vector<double>>& cost,
                                   const StationaryPolicy& policy, std::size_t horizon,
                                   std::size_t x0, RngStream& rng) {
    if (horizon == 0) throw std::invalid_argument("finite_horizon_cost: horizon must be >= 1");
    std::size_t x = x0;
    double total = 0.0;
    for (std::size_t t = 0; t < horizon; ++t) {
        const std::size_t u = policy.sample_action(x, rng);
        total += cost[x][u];
        x = sample_transition(k, x, u, rng);
    }
    return total / static_cast<double>(horizon);
}

std::pair<double, StationaryPolicy> brute_force_optimal(
    const FiniteKernel& k, const std::vector<std::vector<double>>& cost) {
    const std::size_t ns = k.n_states(), na = k.n_actions();
    double count = std::pow(static_cast<double>(na), static_cast<double>(ns));
    if (count > 1e6) throw std::invalid_argument("brute_force_optimal: instance too large");

    std::vector<std::size_t> actions(ns, 0);
    std::vector<std::size_t> best_actions;
    double best = std::numeric_limits<double>::infinity();
    while (true) {
        const auto policy = StationaryPolicy::deterministic(actions, na);
        const auto p = policy_kernel(k, policy);
        const auto pi = invariant_measure_direct(p);
        double j = 0.0;
        for (std::size_t x = 0; x < ns; ++x) j += pi[x] * cost[x][actions[x]];
        if (j < best - 1e-13) {
            best = j;
            best_actions = actions;
        }
        // odometer increment; scan order makes the first optimum the
        // lexicographically smallest
        std::size_t pos = ns;
        bool rolled_over = true;
        while (pos > 0) {
            --pos;
            if (++actions[pos] < na) {
                rolled_over = false;
                break;
            }
            actions[pos] = 0;
        }
        if (rolled_over) break;
    }
    return {best, StationaryPolicy::deterministic(best_actions, na)};
}

}  // namespace borel_adapt
