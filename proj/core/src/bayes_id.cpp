#include "borel_adapt/bayes_id.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace borel_adapt {

PosteriorState::PosteriorState(std::vector<double> weights, EpsilonNet net)
    : weights_(std::move(weights)), net_(std::move(net)) {
    recompute_map();
}

double PosteriorState::bin_mass(std::size_t b) const {
    double s = 0.0;
    for (std::size_t m = 0; m < weights_.size(); ++m)
        if (net_.assignment[m] == b) s += weights_[m];
    return s;
}

double PosteriorState::max_bin_mass() const {
    double best = 0.0;
    for (std::size_t b = 0; b < net_.n_bins(); ++b) best = std::max(best, bin_mass(b));
    return best;
}

void PosteriorState::recompute_map() {
    std::size_t best_bin = 0;
    double best = -1.0;
    for (std::size_t b = 0; b < net_.n_bins(); ++b) {
        const double m = bin_mass(b);
        if (m > best + 1e-15) {
            best = m;
            best_bin = b;
        }
    }
    const std::size_t new_map = net_.representatives[best_bin];
    if (history_length_ > 0 && new_map != map_index_) ++map_change_count_;
    map_index_ = new_map;
}

void PosteriorState::update(const CandidateFamily& family, std::size_t x, std::size_t u,
                            std::size_t x_next) {
    if (family.size() != weights_.size())
        throw std::invalid_argument("posterior update: family size mismatch");
    double total = 0.0;
    for (std::size_t m = 0; m < weights_.size(); ++m) {
        weights_[m] *= family.members[m](x_next, x, u);
        total += weights_[m];
    }
    if (total <= 0.0)
        throw std::runtime_error(
            "posterior update: every candidate assigns zero likelihood to observation at step " +
            std::to_string(history_length_));
    for (double& w : weights_) w /= total;
    ++history_length_;
    recompute_map();
}

void PosteriorState::restrict_support(const std::vector<bool>& keep) {
    double total = 0.0;
    for (std::size_t m = 0; m < weights_.size(); ++m) {
        if (!keep[m]) weights_[m] = 0.0;
        total += weights_[m];
    }
    if (total <= 0.0)
        throw std::runtime_error("restrict_support: all posterior mass removed");
    for (double& w : weights_) w /= total;
    recompute_map();
}

EpsilonNet build_epsilon_net(const CandidateFamily& family, double epsilon,
                             const std::vector<std::vector<double>>& d_state) {
    if (epsilon <= 0.0) throw std::invalid_argument("build_epsilon_net: epsilon must be > 0");
    if (family.members.empty()) throw std::invalid_argument("build_epsilon_net: empty family");
    EpsilonNet net;
    net.epsilon = epsilon;
    net.assignment.resize(family.size());
    for (std::size_t m = 0; m < family.size(); ++m) {
        bool placed = false;
        for (std::size_t b = 0; b < net.representatives.size(); ++b) {
            const double d = uniform_bl_distance(family.members[m],
                                                 family.members[net.representatives[b]], d_state)
                                 .value;
            if (d <= epsilon) {
                net.assignment[m] = b;
                placed = true;
                break;
            }
        }
        if (!placed) {
            net.assignment[m] = net.representatives.size();
            net.representatives.push_back(m);
        }
    }
    return net;
}

PosteriorState init_posterior(const std::vector<double>& prior, const EpsilonNet& net) {
    if (prior.size() != net.assignment.size())
        throw std::invalid_argument("init_posterior: prior length mismatch");
    double s = 0.0;
    for (double p : prior) {
        if (p < 0.0) throw std::invalid_argument("init_posterior: negative prior weight");
        s += p;
    }
    if (std::fabs(s - 1.0) > 1e-12)
        throw std::invalid_argument("init_posterior: prior not stochastic");
    std::vector<double> bin_mass(net.n_bins(), 0.0);
    for (std::size_t m = 0; m < prior.size(); ++m) bin_mass[net.assignment[m]] += prior[m];
    for (std::size_t b = 0; b < bin_mass.size(); ++b)
        if (bin_mass[b] <= 0.0)
            throw std::invalid_argument("init_posterior: bin " + std::to_string(b) +
                                        " carries zero prior mass");
    return PosteriorState(prior, net);
}

std::size_t map_estimate(const PosteriorState& state) { return state.map_index(); }

}  // namespace borel_adapt
