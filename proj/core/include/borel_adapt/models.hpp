#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "borel_adapt/rng.hpp"

namespace borel_adapt {

/// Finite point set embedded in [0,1]^d (d = 1 or 2) with a pairwise
/// distance table. The table must be a metric: symmetric, zero diagonal,
/// triangle inequality within 1e-12 (checked by validate()).
struct FiniteSpace {
    // points[i] holds the coordinates of point i
    std::vector<std::vector<double>> points;
    std::vector<std::vector<double>> metric;

    static FiniteSpace equispaced_circle(std::size_t n);

    std::size_t size() const { return points.size(); }
    std::vector<std::string> validate() const;
};

/// Row-stochastic transition table over n_states x n_actions.
/// row(x, u) is the distribution of the next state.
class FiniteKernel {
  public:
    FiniteKernel() = default;
    FiniteKernel(std::size_t n_states, std::size_t n_actions)
        : n_states_(n_states), n_actions_(n_actions),
          rows_(n_states * n_actions, std::vector<double>(n_states, 0.0)) {}

    static FiniteKernel uniform(std::size_t n_states, std::size_t n_actions);

    std::size_t n_states() const { return n_states_; }
    std::size_t n_actions() const { return n_actions_; }

    std::vector<double>& row(std::size_t x, std::size_t u) { return rows_[x * n_actions_ + u]; }
    const std::vector<double>& row(std::size_t x, std::size_t u) const {
        return rows_[x * n_actions_ + u];
    }
    double operator()(std::size_t next, std::size_t x, std::size_t u) const {
        return rows_[x * n_actions_ + u][next];
    }

  private:
    std::size_t n_states_ = 0;
    std::size_t n_actions_ = 0;
    std::vector<std::vector<double>> rows_;
};

/// Benchmark continuous-state dynamics on the unit circle:
///   x' = (a*x + b*u + w) mod 1,  w ~ p_full*U[0,1) + (1-p_full)*U[0,sigma).
///
/// Bin masses are available in closed form (arc overlap of the wrapped
/// uniform mixture), and the kernel is minorized by p_full * Lebesgue, which
/// bounds the Dobrushin coefficient by 1 - p_full.
struct ContinuousModel {
    double a = 1.0;
    double b = 0.0;
    double p_full = 1.0;   // weight of the full-support uniform component
    double sigma = 1.0;    // width of the narrow component, in (0, 1]

    /// Deterministic part of the next state, wrapped to [0,1).
    double drift(double x, double u) const;

    /// Sample x' given (x, u).
    double sample(double x, double u, RngStream& rng) const;

    /// P(x' in [lo, hi) | x, u), exact. Requires 0 <= lo <= hi <= 1.
    double bin_mass(double x, double u, double lo, double hi) const;
};

/// Cost map (state, action) -> [0, c_max]. Either a table over finite
/// indices or a closed form over [0,1)^2; quantization turns a closed form
/// into a table at the grid centers.
class CostFunction {
  public:
    static CostFunction from_table(std::vector<std::vector<double>> table, double c_max);
    /// c(x, u) = (x - x_target)^2 + u_weight * (u - u_target)^2, c_max from
    /// the corners of [0,1]^2.
    static CostFunction quadratic(double x_target, double u_weight, double u_target = 0.0);
    static CostFunction constant(double value);

    bool is_table() const { return !table_.empty(); }
    double at(std::size_t x, std::size_t u) const { return table_[x][u]; }
    double eval(double x, double u) const { return fn_(x, u); }
    double c_max() const { return c_max_; }

    /// Table restriction of a closed-form cost to grid centers.
    std::vector<std::vector<double>> tabulate(const std::vector<double>& state_centers,
                                              const std::vector<double>& action_centers) const;

  private:
    std::vector<std::vector<double>> table_;
    std::function<double(double, double)> fn_;
    double c_max_ = 0.0;
};

/// Finite family of candidate kernels sharing one shape.
struct CandidateFamily {
    std::vector<FiniteKernel> members;
    std::vector<std::string> labels;
    std::optional<std::size_t> true_index;

    std::size_t size() const { return members.size(); }
    std::vector<std::string> validate() const;
};

/// Diagnostic: one entry per stochasticity violation, empty iff every row
/// of k is a probability vector within 1e-12.
std::vector<std::string> validate_kernel(const FiniteKernel& k);

/// Draw the next state index from a kernel row. Deterministic given the
/// stream state.
std::size_t sample_transition(const FiniteKernel& k, std::size_t x, std::size_t u,
                              RngStream& rng);

/// Empirical weak-equicontinuity modulus: max BL distance between rows of
/// grid pairs at (x,u)-distance <= delta. The continuous overload evaluates
/// rows as bin-mass vectors on an n_bins partition of [0,1) under the
/// wrapped metric; pair distance is max(|dx| wrapped, |du|).
double estimate_bl_modulus(const ContinuousModel& m,
                           const std::vector<std::pair<double, double>>& grid, double delta,
                           std::size_t n_bins = 32);
double estimate_bl_modulus(const FiniteKernel& k, const FiniteSpace& states,
                           const FiniteSpace& actions,
                           const std::vector<std::pair<std::size_t, std::size_t>>& grid,
                           double delta);

}  // namespace borel_adapt
