#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "borel_adapt/models.hpp"

namespace borel_adapt {

/// Result of a metric evaluation. For distances defined as a supremum the
/// witness records the argument attaining it: a row-index pair for the
/// kernel-level metrics, the optimal test-function values for bl_distance.
struct MetricReport {
    double value = 0.0;
    std::optional<std::pair<std::size_t, std::size_t>> argmax_pair;
    std::optional<std::vector<double>> argmax_function;
};

/// Total variation, factor-2 convention: sum_i |mu_i - nu_i|, which equals
/// 2 * sup_B |mu(B) - nu(B)|. Many libraries return half this value.
double tv_distance(const std::vector<double>& mu, const std::vector<double>& nu);

/// Bounded-Lipschitz distance on a finite support, computed as the exact LP
///   max  sum_i f_i (mu_i - nu_i)
///   s.t. |f_i| <= t,  |f_i - f_j| <= (1 - t) d_ij,  0 <= t <= 1.
/// The witness carries the optimal f.
MetricReport bl_distance(const std::vector<double>& mu, const std::vector<double>& nu,
                         const std::vector<std::vector<double>>& d);

/// sup over (x, u) of the BL distance between corresponding rows.
MetricReport uniform_bl_distance(const FiniteKernel& k1, const FiniteKernel& k2,
                                 const std::vector<std::vector<double>>& d_state);

/// Dobrushin ergodicity coefficient: half the max TV distance over all row
/// pairs (across states and actions). In [0, 1]; < 1 certifies span
/// contraction of the Bellman operator. Witness indexes rows as
/// x * n_actions + u.
MetricReport dobrushin_coefficient(const FiniteKernel& k);

/// min over (x, u, bin) of row mass minus lambda mass; >= 0 iff the kernel
/// is minorized by lambda.
double minorization_margin(const FiniteKernel& k, const std::vector<double>& lambda);

}  // namespace borel_adapt
