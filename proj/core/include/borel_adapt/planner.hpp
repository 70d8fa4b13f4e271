#pragma once

#include <cstdint>
#include <vector>

#include "borel_adapt/models.hpp"

namespace borel_adapt {

/// Stationary Markov policy. Stored row-wise as probability vectors over
/// actions; a deterministic policy is the point-mass special case and keeps
/// its action table for cheap lookup.
class StationaryPolicy {
  public:
    static StationaryPolicy deterministic(std::vector<std::size_t> actions,
                                          std::size_t n_actions);
    static StationaryPolicy randomized(std::vector<std::vector<double>> rows);
    static StationaryPolicy uniform(std::size_t n_states, std::size_t n_actions);

    std::size_t n_states() const { return rows_.size(); }
    std::size_t n_actions() const { return n_actions_; }
    bool is_deterministic() const { return !actions_.empty(); }

    /// Deterministic action for state x; valid only when is_deterministic().
    std::size_t action(std::size_t x) const { return actions_[x]; }
    const std::vector<double>& row(std::size_t x) const { return rows_[x]; }

    std::size_t sample_action(std::size_t x, RngStream& rng) const;

  private:
    std::vector<std::vector<double>> rows_;
    std::vector<std::size_t> actions_;  // empty for randomized policies
    std::size_t n_actions_ = 0;
};

struct PlannerSolution {
    double j_star = 0.0;
    std::vector<double> v_star;  // bias, normalized v_star[0] = 0
    StationaryPolicy policy;     // greedy deterministic policy
    std::size_t iterations = 0;
    double residual_span = 0.0;
};

struct InvariantMeasure {
    std::vector<double> weights;
    double residual_tv = 0.0;
};

/// One Bellman sweep: Tv(x) = min_u [ c(x,u) + sum_y k(y|x,u) v(y) ],
/// ties to the lowest action index.
std::pair<std::vector<double>, std::vector<std::size_t>> bellman_apply(
    const FiniteKernel& k, const std::vector<std::vector<double>>& cost,
    const std::vector<double>& v);

/// Relative value iteration for the average-cost optimality equation.
/// Iterates v <- Tv - (Tv)(x_ref) until span(Tv - v) <= tol; j_star is the
/// midpoint of [min, max] of Tv - v, within tol/2 of the optimum. Throws
/// std::runtime_error (with the residual) if max_iter is exhausted.
/// v_init warm-starts the iteration.
PlannerSolution relative_value_iteration(const FiniteKernel& k,
                                         const std::vector<std::vector<double>>& cost,
                                         double tol, std::size_t max_iter,
                                         const std::vector<double>* v_init = nullptr);

/// Closed-loop state transition matrix P(y|x) = sum_u policy(u|x) k(y|x,u).
std::vector<std::vector<double>> policy_kernel(const FiniteKernel& k,
                                               const StationaryPolicy& policy);

/// Invariant distribution by power iteration from the uniform start.
/// Stops when the successive TV gap is below tol * (1 - beta_hat), beta_hat
/// being the Dobrushin coefficient of P; throws on non-convergence.
InvariantMeasure invariant_measure(const std::vector<std::vector<double>>& p, double tol);

/// Exact invariant distribution by direct linear solve (Gaussian
/// elimination on pi P = pi, sum pi = 1). Independent of the power
/// iteration path; intended as an oracle for small chains.
std::vector<double> invariant_measure_direct(const std::vector<std::vector<double>>& p);

/// Long-run average cost of a stationary policy: integral of the cost
/// against the invariant measure of the closed-loop chain.
double average_cost(const FiniteKernel& k, const std::vector<std::vector<double>>& cost,
                    const StationaryPolicy& policy, double tol = 1e-10);

/// (1/T) sum_{t<T} E[c(x_t, u_t)] by forward distribution recursion.
double finite_horizon_cost(const FiniteKernel& k,
                           const std::vector<std::vector<double>>& cost,
                           const StationaryPolicy& policy, std::size_t horizon,
                           std::size_t x0);

/// Single-trajectory empirical average over T steps.
double finite_horizon_cost_sampled(const FiniteKernel& k,
                                   const std::vector<std::vector<double>>& cost,
                                   const StationaryPolicy& policy, std::size_t horizon,
                                   std::size_t x0, RngStream& rng);

/// Enumerate every deterministic stationary policy and return the one with
/// the smallest average cost (exact invariant solve; ties keep the
/// lexicographically smallest policy). Requires n_actions^n_states <= 1e6.
std::pair<double, StationaryPolicy> brute_force_optimal(
    const FiniteKernel& k, const std::vector<std::vector<double>>& cost);

double span(const std::vector<double>& v);

}  // namespace borel_adapt
