#pragma once

#include <cstdint>
#include <vector>

#include "borel_adapt/models.hpp"
#include "borel_adapt/planner.hpp"

namespace borel_adapt {

/// Nearest-neighbor quantizer on [0,1) with n equispaced centers at
/// (i + 0.5)/n. Ties go to the lowest index, so the cells are
/// B_0 = [0, 1/n] and B_i = (i/n, (i+1)/n]; every point is within 1/(2n)
/// of its center.
class Quantizer {
  public:
    explicit Quantizer(std::size_t n);

    std::size_t size() const { return centers_.size(); }
    const std::vector<double>& centers() const { return centers_; }
    double center(std::size_t i) const { return centers_[i]; }

    /// Index of the nearest center, ties to the lowest index.
    std::size_t index(double x) const;

    /// Half-open [lo, hi) cover of cell i, for bin-mass integration. The
    /// endpoint conventions differ from the tie rule only on a Lebesgue-null
    /// set, which the continuous model never charges.
    std::pair<double, double> bin(std::size_t i) const;

  private:
    std::vector<double> centers_;
};

enum class QuantizeMode : std::uint8_t { exact, monte_carlo };

/// Finite MDP obtained by quantizing a continuous model: transition table
/// over state centers x action centers, cost restricted to the centers, and
/// the per-cell weighting (a point mass at each center).
struct QuantizedMDP {
    Quantizer quantizer_state;
    Quantizer quantizer_action;
    FiniteKernel kernel;
    std::vector<std::vector<double>> cost;
    double c_max = 0.0;
};

/// Build the quantized transition table. Exact mode evaluates the model's
/// closed-form bin masses at the cell centers; monte_carlo mode draws
/// `samples` transitions per (state, action) pair and uses bin frequencies.
QuantizedMDP build_quantized_kernel(const ContinuousModel& model, const CostFunction& cost,
                                    const Quantizer& qs, const Quantizer& qa,
                                    QuantizeMode mode = QuantizeMode::exact,
                                    std::size_t samples = 0, RngStream* rng = nullptr);

/// Lift a policy on centers to the continuous state space: x acts like its
/// quantized center, so the policy is constant on every cell.
class ExtendedPolicy {
  public:
    ExtendedPolicy(StationaryPolicy on_centers, Quantizer qs)
        : policy_(std::move(on_centers)), qs_(std::move(qs)) {}

    /// Action index (into the action quantizer) for a continuous state.
    std::size_t action_index(double x) const { return policy_.action(qs_.index(x)); }

  private:
    StationaryPolicy policy_;
    Quantizer qs_;
};

ExtendedPolicy extend_policy(const StationaryPolicy& on_centers, const Quantizer& qs);

}  // namespace borel_adapt
