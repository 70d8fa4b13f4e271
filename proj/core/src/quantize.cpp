#include "borel_adapt/quantize.hpp"

#include <cmath>
#include <stdexcept>

namespace borel_adapt {

Quantizer::Quantizer(std::size_t n) {
    if (n == 0) throw std::invalid_argument("Quantizer: n must be >= 1");
    centers_.resize(n);
    for (std::size_t i = 0; i < n; ++i) centers_[i] = (i + 0.5) / n;
}

std::size_t Quantizer::index(double x) const {
    const std::size_t n = centers_.size();
    // candidate cell by floor, then resolve the boundary tie downward
    double scaled = x * static_cast<double>(n);
    auto i = static_cast<std::ptrdiff_t>(std::floor(scaled));
    if (i < 0) i = 0;
    if (i >= static_cast<std::ptrdiff_t>(n)) i = static_cast<std::ptrdiff_t>(n) - 1;
    // x exactly on the lower edge of cell i is equidistant between centers
    // i-1 and i; the tie goes to the lower index
    if (i > 0 && scaled == static_cast<double>(i)) --i;
    return static_cast<std::size_t>(i);
}

std::pair<double, double> Quantizer::bin(std::size_t i) const {
    const double n = static_cast<double>(centers_.size());
    return {static_cast<double>(i) / n, static_cast<double>(i + 1) / n};
}

QuantizedMDP build_quantized_kernel(const ContinuousModel& model, const CostFunction& cost,
                                    const Quantizer& qs, const Quantizer& qa,
                                    QuantizeMode mode, std::size_t samples, RngStream* rng) {
    const std::size_t ns = qs.size(), na = qa.size();
    FiniteKernel k(ns, na);
    if (mode == QuantizeMode::exact) {
        for (std::size_t i = 0; i < ns; ++i)
            for (std::size_t j = 0; j < na; ++j) {
                auto& row = k.row(i, j);
                for (std::size_t target = 0; target < ns; ++target) {
                    auto [lo, hi] = qs.bin(target);
                    row[target] = model.bin_mass(qs.center(i), qa.center(j), lo, hi);
                }
            }
    } else {
        if (samples == 0)
            throw std::invalid_argument("build_quantized_kernel: monte_carlo needs samples > 0");
        if (rng == nullptr)
            throw std::invalid_argument("build_quantized_kernel: monte_carlo needs an rng");
        for (std::size_t i = 0; i < ns; ++i)
            for (std::size_t j = 0; j < na; ++j) {
                auto& row = k.row(i, j);
                for (std::size_t s = 0; s < samples; ++s) {
                    const double next = model.sample(qs.center(i), qa.center(j), *rng);
                    row[qs.index(next)] += 1.0;
                }
                for (double& v : row) v /= static_cast<double>(samples);
            }
    }
    QuantizedMDP mdp{qs, qa, std::move(k), cost.tabulate(qs.centers(), qa.centers()),
                     cost.c_max()};
    return mdp;
}

ExtendedPolicy extend_policy(const StationaryPolicy& on_centers, const Quantizer& qs) {
    if (on_centers.n_states() != qs.size())
        throw std::invalid_argument("extend_policy: policy size does not match quantizer");
    if (!on_centers.is_deterministic())
        throw std::invalid_argument("extend_policy: expects a deterministic policy");
    return ExtendedPolicy(on_centers, qs);
}

}  // namespace borel_adapt
