#include "borel_adapt/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace borel_adapt {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

RngStream RngStream::substream(std::uint64_t master_seed, std::uint64_t tag) {
    return RngStream(splitmix64(splitmix64(master_seed) ^ splitmix64(tag + 0x5851f42d4c957f2dULL)));
}

double RngStream::next_double() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

std::size_t RngStream::next_index(std::size_t n) {
    if (n == 0) throw std::invalid_argument("next_index: n must be >= 1");
    // rejection sampling to avoid modulo bias
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t v;
    do {
        v = engine_();
    } while (v >= limit);
    return static_cast<std::size_t>(v % n);
}

std::size_t RngStream::categorical(std::span<const double> weights) {
    if (weights.empty()) throw std::invalid_argument("categorical: empty weight vector");
    const double u = next_double();
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < weights.size(); ++i) {
        acc += weights[i];
        if (u < acc) return i;
    }
    return weights.size() - 1;
}

}  // namespace borel_adapt
