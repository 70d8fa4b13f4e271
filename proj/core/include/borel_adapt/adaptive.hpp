#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "borel_adapt/bayes_id.hpp"
#include "borel_adapt/models.hpp"
#include "borel_adapt/planner.hpp"
#include "borel_adapt/quantize.hpp"
#include "borel_adapt/run_record.hpp"

namespace borel_adapt {

/// Empirical occupation counts over (state, action) pairs and observed
/// transitions. Invariant: sum_k transition[(i,j,k)] == visit[(i,j)].
class CountsTable {
  public:
    CountsTable(std::size_t n_states, std::size_t n_actions)
        : n_states_(n_states), n_actions_(n_actions),
          visit_(n_states * n_actions, 0),
          transition_(n_states * n_actions, std::vector<std::uint64_t>(n_states, 0)) {}

    void record(std::size_t x, std::size_t u, std::size_t x_next) {
        ++visit_[x * n_actions_ + u];
        ++transition_[x * n_actions_ + u][x_next];
    }

    std::uint64_t visits(std::size_t x, std::size_t u) const {
        return visit_[x * n_actions_ + u];
    }
    const std::vector<std::uint64_t>& transitions(std::size_t x, std::size_t u) const {
        return transition_[x * n_actions_ + u];
    }
    std::size_t n_states() const { return n_states_; }
    std::size_t n_actions() const { return n_actions_; }

    bool consistent() const;

  private:
    std::size_t n_states_;
    std::size_t n_actions_;
    std::vector<std::uint64_t> visit_;
    std::vector<std::vector<std::uint64_t>> transition_;
};

/// Exploration/exploitation cycle lengths: T_prime = T_l + T_a. The default
/// T_l = ceil(sqrt(T_prime)) keeps T_l/T_prime -> 0 while T_l -> infinity.
struct Schedule {
    std::size_t T_prime = 0;
    std::size_t T_l = 0;

    static Schedule with_sqrt_exploration(std::size_t T_prime);
    std::size_t T_a() const { return T_prime - T_l; }
    bool valid() const { return T_l >= 1 && T_l < T_prime; }
};

/// Row-wise mixture (1-p) gamma_s + p gamma_e. Per-state TV to gamma_s is
/// at most 2p, with equality on disjoint supports.
StationaryPolicy mix_policies(const StationaryPolicy& gamma_s, const StationaryPolicy& gamma_e,
                              double p);

/// Uniform-over-actions policy; exhaustive on minorized finite models.
StationaryPolicy uniform_exploration_policy(std::size_t n_states, std::size_t n_actions);

/// Estimator rows transition/visit where visits > 0, fallback rows
/// elsewhere.
FiniteKernel empirical_kernel(const CountsTable& counts, const FiniteKernel& fallback);

struct EmpiricalRunConfig {
    std::size_t horizon = 0;
    std::uint64_t seed = 0;
    std::size_t x0 = 0;
    std::size_t replan_every = 1;  // 1 replans at every step
    double rvi_tol = 1e-6;
    std::size_t rvi_max_iter = 5000;
    std::vector<std::size_t> checkpoints;  // estimate snapshots after this many steps
};

struct EmpiricalRunResult {
    RunRecord record;
    FiniteKernel final_estimate;
    std::vector<std::pair<std::size_t, FiniteKernel>> snapshots;
    double max_accepted_dobrushin = 0.0;  // algorithm II audit
};

/// Empirical identification loop: greedy policy for the running empirical
/// estimate with an exploration coin of probability min(1, 1/t); the first
/// step applies the initial (uniform-rows) estimate's policy. `truth`
/// provides the simulated environment, the cost table, and the reference
/// for est_err_tv.
EmpiricalRunResult run_algorithm1(const QuantizedMDP& truth, const EmpiricalRunConfig& cfg);

/// As run_algorithm1, with the feasibility gate: a candidate estimate is
/// adopted only when its Dobrushin coefficient is at most beta + 1e-12,
/// otherwise the previous estimate is retained. beta = 1 disables the gate.
EmpiricalRunResult run_algorithm2(const QuantizedMDP& truth, double beta,
                                  const EmpiricalRunConfig& cfg);

struct AlternatingConfig {
    Schedule schedule;
    std::size_t cycles = 0;
    double epsilon = 0.0;  // restriction radius after the first estimate
    std::uint64_t seed = 0;
    std::size_t x0 = 0;
    bool absorb_exploit_data = true;
    double rvi_tol = 1e-9;
    std::size_t rvi_max_iter = 100000;
};

/// Alternating exploration/exploitation: explore T_l steps per cycle with
/// the uniform policy, estimate the MAP kernel, exploit with its optimal
/// policy for the rest of the cycle. After the first cycle only candidates
/// within epsilon (uniform BL) of the initial estimate are considered.
RunRecord run_alternating(const QuantizedMDP& truth, const CandidateFamily& family,
                          const std::vector<double>& prior,
                          const std::vector<std::vector<double>>& d_state,
                          const AlternatingConfig& cfg);

struct SimultaneousConfig {
    std::size_t horizon = 0;
    std::uint64_t seed = 0;
    std::size_t x0 = 0;
    double rvi_tol = 1e-9;
    std::size_t rvi_max_iter = 100000;
};

/// Simultaneous exploration and exploitation: at every step an independent
/// Bernoulli coin with probability 1/(1+k)^2 (k = MAP changes so far)
/// selects the exhaustive policy, otherwise the optimal policy of the MAP
/// estimate frozen at the last phase boundary. Phase i ends once the max
/// bin posterior reaches 1 - 2^{-i}.
RunRecord run_simultaneous(const QuantizedMDP& truth, const CandidateFamily& family,
                           const std::vector<double>& prior, const SimultaneousConfig& cfg);

}  // namespace borel_adapt
