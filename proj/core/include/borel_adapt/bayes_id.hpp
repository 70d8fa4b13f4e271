#pragma once

#include <vector>

#include "borel_adapt/metrics.hpp"
#include "borel_adapt/models.hpp"

namespace borel_adapt {

/// Greedy cover of a candidate family by uniform-BL balls of radius
/// epsilon. representatives[b] is the member index anchoring bin b;
/// assignment[m] is the bin of member m.
struct EpsilonNet {
    std::vector<std::size_t> representatives;
    std::vector<std::size_t> assignment;
    double epsilon = 0.0;

    std::size_t n_bins() const { return representatives.size(); }
};

/// Posterior over a finite candidate family, optionally aggregated into the
/// bins of an epsilon-net. The MAP index is the representative of the
/// heaviest bin (without a net, every member is its own bin).
class PosteriorState {
  public:
    PosteriorState() = default;
    PosteriorState(std::vector<double> weights, EpsilonNet net);

    const std::vector<double>& weights() const { return weights_; }
    const EpsilonNet& net() const { return net_; }
    std::size_t history_length() const { return history_length_; }
    std::size_t map_index() const { return map_index_; }
    std::size_t map_change_count() const { return map_change_count_; }

    /// Aggregate posterior mass of bin b.
    double bin_mass(std::size_t b) const;
    double max_bin_mass() const;

    /// One Bayes step on an observed transition; weights w_m are multiplied
    /// by M_m(x'|x,u) and renormalized. Throws std::runtime_error if every
    /// candidate assigns zero likelihood (misspecified family).
    void update(const CandidateFamily& family, std::size_t x, std::size_t u,
                std::size_t x_next);

    /// Zero the mass of members outside `keep` and renormalize; used for
    /// the epsilon-restriction after an initial estimate.
    void restrict_support(const std::vector<bool>& keep);

  private:
    void recompute_map();

    std::vector<double> weights_;
    EpsilonNet net_;
    std::size_t history_length_ = 0;
    std::size_t map_index_ = 0;
    std::size_t map_change_count_ = 0;
};

/// Greedy epsilon-net: scan members in order, open a new bin when no
/// existing representative is within epsilon under uniform BL.
EpsilonNet build_epsilon_net(const CandidateFamily& family, double epsilon,
                             const std::vector<std::vector<double>>& d_state);

/// Initialize the posterior from a prior over members. Throws
/// std::invalid_argument, naming the bin, if any bin carries zero prior
/// mass (identifiability precondition).
PosteriorState init_posterior(const std::vector<double>& prior, const EpsilonNet& net);

/// Representative member index of the heaviest bin, lowest index on ties.
std::size_t map_estimate(const PosteriorState& state);

}  // namespace borel_adapt
