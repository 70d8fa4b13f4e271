#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace borel_adapt {

/// Seeded random stream with named substreams.
///
/// Substreams are derived from (master seed, stream tag) through SplitMix64
/// mixing, so independent runs of a seed sweep and the independent coins
/// inside one run (exploration coin, action draw, environment noise) never
/// share state. All sampling goes through next_double()/next_index() rather
/// than std::*_distribution, which keeps traces bit-identical across
/// standard library implementations.
class RngStream {
  public:
    explicit RngStream(std::uint64_t seed) : engine_(seed) {}

    /// Derive a substream for (master_seed, tag); tag 0, 1, 2, ... per role.
    static RngStream substream(std::uint64_t master_seed, std::uint64_t tag);

    /// Uniform in [0, 1) with 53 random bits.
    double next_double();

    /// Uniform index in {0, ..., n-1}; n >= 1.
    std::size_t next_index(std::size_t n);

    bool bernoulli(double p) { return next_double() < p; }

    /// Draw from a probability vector by inverse CDF; weights need not be
    /// exactly normalized (the last cell absorbs rounding).
    std::size_t categorical(std::span<const double> weights);

    std::uint64_t next_u64() { return engine_(); }

  private:
    std::mt19937_64 engine_;
};

/// SplitMix64 finalizer; used for seed derivation only.
std::uint64_t splitmix64(std::uint64_t x);

}  // namespace borel_adapt
