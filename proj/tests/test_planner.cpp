#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "borel_adapt/metrics.hpp"
#include "borel_adapt/planner.hpp"
#include "borel_adapt/rng.hpp"

using namespace borel_adapt;

namespace {

FiniteKernel random_mixed_kernel(RngStream& rng, std::size_t ns, std::size_t na,
                                 double uniform_weight) {
    FiniteKernel k(ns, na);
    for (std::size_t x = 0; x < ns; ++x)
        for (std::size_t u = 0; u < na; ++u) {
            auto& row = k.row(x, u);
            double s = 0.0;
            for (double& v : row) {
                v = rng.next_double() + 1e-3;
                s += v;
            }
            for (double& v : row)
                v = (1.0 - uniform_weight) * v / s + uniform_weight / double(ns);
        }
    return k;
}

std::vector<std::vector<double>> random_cost(RngStream& rng, std::size_t ns, std::size_t na) {
    std::vector<std::vector<double>> c(ns, std::vector<double>(na));
    for (auto& row : c)
        for (double& v : row) v = rng.next_double();
    return c;
}

}  // namespace

TEST_CASE("Bellman sweep") {
    FiniteKernel k(2, 2);
    k.row(0, 0) = {0.9, 0.1};
    k.row(0, 1) = {0.2, 0.8};
    k.row(1, 0) = {0.5, 0.5};
    k.row(1, 1) = {0.1, 0.9};
    const std::vector<std::vector<double>> cost{{1.0, 2.0}, {0.5, 0.1}};
    SUBCASE("v = 0 reduces to the cheapest action") {
        const auto [tv, acts] = bellman_apply(k, cost, {0.0, 0.0});
        CHECK(tv[0] == doctest::Approx(1.0));
        CHECK(tv[1] == doctest::Approx(0.1));
        CHECK(acts[0] == 0);
        CHECK(acts[1] == 1);
    }
    SUBCASE("hand computation with a nonzero bias") {
        const std::vector<double> v{1.0, -1.0};
        // state 0: action 0 -> 1 + 0.9 - 0.1 = 1.8; action 1 -> 2 + 0.2 - 0.8 = 1.4
        // state 1: action 0 -> 0.5 + 0 = 0.5; action 1 -> 0.1 + 0.1 - 0.9 = -0.7
        const auto [tv, acts] = bellman_apply(k, cost, v);
        CHECK(tv[0] == doctest::Approx(1.4).epsilon(1e-12));
        CHECK(tv[1] == doctest::Approx(-0.7).epsilon(1e-12));
        CHECK(acts[0] == 1);
        CHECK(acts[1] == 1);
    }
    SUBCASE("single action means no minimization") {
        FiniteKernel k1(2, 1);
        k1.row(0, 0) = {0.3, 0.7};
        k1.row(1, 0) = {0.6, 0.4};
        const std::vector<std::vector<double>> c1{{2.0}, {1.0}};
        const std::vector<double> v{1.0, 3.0};
        const auto [tv, acts] = bellman_apply(k1, c1, v);
        CHECK(tv[0] == doctest::Approx(2.0 + 0.3 + 2.1).epsilon(1e-12));
        CHECK(tv[1] == doctest::Approx(1.0 + 0.6 + 1.2).epsilon(1e-12));
    }
}

TEST_CASE("relative value iteration") {
    SUBCASE("constant cost") {
        FiniteKernel k(3, 2);
        RngStream rng(2);
        k = random_mixed_kernel(rng, 3, 2, 0.3);
        const std::vector<std::vector<double>> cost(3, std::vector<double>(2, 0.7));
        const PlannerSolution sol = relative_value_iteration(k, cost, 1e-10, 10000);
        CHECK(sol.j_star == doctest::Approx(0.7).epsilon(1e-9));
        for (double v : sol.v_star) CHECK(std::fabs(v) < 1e-8);
    }
    SUBCASE("identical rows decouple the problem") {
        FiniteKernel k(2, 2);
        for (std::size_t x = 0; x < 2; ++x)
            for (std::size_t u = 0; u < 2; ++u) k.row(x, u) = {0.5, 0.5};
        const std::vector<std::vector<double>> cost{{1.0, 2.0}, {3.0, 0.0}};
        // ACOE by hand: j = 0.5 * (min_u c(0,u) + min_u c(1,u)) = 0.5
        const PlannerSolution sol = relative_value_iteration(k, cost, 1e-10, 10000);
        CHECK(sol.j_star == doctest::Approx(0.5).epsilon(1e-9));
        CHECK(sol.policy.action(0) == 0);
        CHECK(sol.policy.action(1) == 1);
    }
    SUBCASE("bias is normalized at the reference state") {
        RngStream rng(9);
        const FiniteKernel k = random_mixed_kernel(rng, 4, 3, 0.25);
        const auto cost = random_cost(rng, 4, 3);
        const PlannerSolution sol = relative_value_iteration(k, cost, 1e-9, 20000);
        CHECK(sol.v_star[0] == 0.0);
        CHECK(sol.residual_span <= 1e-9);
    }
    SUBCASE("max_iter exhaustion is reported") {
        RngStream rng(10);
        const FiniteKernel k = random_mixed_kernel(rng, 4, 3, 0.25);
        const auto cost = random_cost(rng, 4, 3);
        CHECK_THROWS_AS(relative_value_iteration(k, cost, 1e-14, 2), std::runtime_error);
    }
}

TEST_CASE("closed-loop kernels and invariant measures") {
    SUBCASE("deterministic policy selects rows") {
        FiniteKernel k(2, 2);
        k.row(0, 0) = {0.9, 0.1};
        k.row(0, 1) = {0.2, 0.8};
        k.row(1, 0) = {0.5, 0.5};
        k.row(1, 1) = {0.1, 0.9};
        const auto p = policy_kernel(k, StationaryPolicy::deterministic({1, 0}, 2));
        CHECK(p[0] == k.row(0, 1));
        CHECK(p[1] == k.row(1, 0));
    }
    SUBCASE("uniform randomized policy averages rows") {
        FiniteKernel k(2, 2);
        k.row(0, 0) = {1.0, 0.0};
        k.row(0, 1) = {0.0, 1.0};
        k.row(1, 0) = {0.5, 0.5};
        k.row(1, 1) = {0.5, 0.5};
        const auto p = policy_kernel(k, StationaryPolicy::uniform(2, 2));
        CHECK(p[0][0] == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(p[0][1] == doctest::Approx(0.5).epsilon(1e-12));
    }
    SUBCASE("doubly stochastic chains have the uniform invariant measure") {
        const std::vector<std::vector<double>> p{{0.3, 0.7}, {0.7, 0.3}};
        const InvariantMeasure pi = invariant_measure(p, 1e-12);
        CHECK(pi.weights[0] == doctest::Approx(0.5).epsilon(1e-9));
        CHECK(pi.weights[1] == doctest::Approx(0.5).epsilon(1e-9));
    }
    SUBCASE("identical rows converge in one step") {
        const std::vector<std::vector<double>> p{{0.4, 0.6}, {0.4, 0.6}};
        const InvariantMeasure pi = invariant_measure(p, 1e-12);
        CHECK(pi.weights[0] == doctest::Approx(0.4).epsilon(1e-9));
    }
    SUBCASE("hand-solved 2-state chain, both solution routes") {
        const std::vector<std::vector<double>> p{{0.9, 0.1}, {0.2, 0.8}};
        const InvariantMeasure pi = invariant_measure(p, 1e-12);
        CHECK(pi.weights[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-8));
        CHECK(pi.weights[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-8));
        const auto direct = invariant_measure_direct(p);
        CHECK(direct[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
        CHECK(direct[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    }
}

TEST_CASE("average cost") {
    FiniteKernel k(2, 1);
    k.row(0, 0) = {0.9, 0.1};
    k.row(1, 0) = {0.2, 0.8};
    const auto pol = StationaryPolicy::deterministic({0, 0}, 1);
    SUBCASE("constant cost") {
        const std::vector<std::vector<double>> cost{{0.3}, {0.3}};
        CHECK(average_cost(k, cost, pol) == doctest::Approx(0.3).epsilon(1e-9));
    }
    SUBCASE("hand value through the invariant measure") {
        const std::vector<std::vector<double>> cost{{1.0}, {0.0}};
        CHECK(average_cost(k, cost, pol) == doctest::Approx(2.0 / 3.0).epsilon(1e-8));
    }
    SUBCASE("RVI policy attains j_star") {
        RngStream rng(12);
        const FiniteKernel k2 = random_mixed_kernel(rng, 5, 3, 0.25);
        const auto cost = random_cost(rng, 5, 3);
        const PlannerSolution sol = relative_value_iteration(k2, cost, 1e-10, 50000);
        CHECK(average_cost(k2, cost, sol.policy) == doctest::Approx(sol.j_star).epsilon(1e-7));
    }
}

TEST_CASE("finite horizon cost") {
    FiniteKernel k(2, 2);
    k.row(0, 0) = {0.9, 0.1};
    k.row(0, 1) = {0.2, 0.8};
    k.row(1, 0) = {0.5, 0.5};
    k.row(1, 1) = {0.1, 0.9};
    const std::vector<std::vector<double>> cost{{1.0, 2.0}, {0.5, 0.1}};
    SUBCASE("single step is the immediate expected cost") {
        const auto pol = StationaryPolicy::uniform(2, 2);
        CHECK(finite_horizon_cost(k, cost, pol, 1, 0) == doctest::Approx(1.5).epsilon(1e-12));
    }
    SUBCASE("constant cost for any horizon") {
        const std::vector<std::vector<double>> flat(2, std::vector<double>(2, 0.4));
        const auto pol = StationaryPolicy::deterministic({1, 0}, 2);
        CHECK(finite_horizon_cost(k, flat, pol, 57, 1) == doctest::Approx(0.4).epsilon(1e-12));
    }
    SUBCASE("long horizons approach the average cost") {
        const auto pol = StationaryPolicy::deterministic({1, 0}, 2);
        const double avg = average_cost(k, cost, pol);
        CHECK(std::fabs(finite_horizon_cost(k, cost, pol, 10000, 0) - avg) < 1e-3);
    }
    SUBCASE("sampled variant is deterministic and close for long runs") {
        const auto pol = StationaryPolicy::deterministic({1, 0}, 2);
        RngStream a(77), b(77);
        const double s1 = finite_horizon_cost_sampled(k, cost, pol, 20000, 0, a);
        const double s2 = finite_horizon_cost_sampled(k, cost, pol, 20000, 0, b);
        CHECK(s1 == s2);
        CHECK(std::fabs(s1 - average_cost(k, cost, pol)) < 0.02);
    }
}

TEST_CASE("brute-force policy enumeration") {
    SUBCASE("single action leaves one policy") {
        FiniteKernel k(2, 1);
        k.row(0, 0) = {0.5, 0.5};
        k.row(1, 0) = {0.5, 0.5};
        const std::vector<std::vector<double>> cost{{1.0}, {2.0}};
        const auto [j, pol] = brute_force_optimal(k, cost);
        CHECK(j == doctest::Approx(1.5).epsilon(1e-10));
        CHECK(pol.action(0) == 0);
    }
    SUBCASE("constant cost gives that constant") {
        RngStream rng(13);
        const FiniteKernel k = random_mixed_kernel(rng, 3, 2, 0.3);
        const std::vector<std::vector<double>> cost(3, std::vector<double>(2, 0.9));
        const auto [j, pol] = brute_force_optimal(k, cost);
        CHECK(j == doctest::Approx(0.9).epsilon(1e-10));
    }
    SUBCASE("optimum is minimal over sampled policies") {
        RngStream rng(14);
        const FiniteKernel k = random_mixed_kernel(rng, 4, 2, 0.3);
        const auto cost = random_cost(rng, 4, 2);
        const auto [j, pol] = brute_force_optimal(k, cost);
        for (int trial = 0; trial < 10; ++trial) {
            std::vector<std::size_t> acts(4);
            for (auto& a : acts) a = rng.next_index(2);
            CHECK(j <= average_cost(k, cost, StationaryPolicy::deterministic(acts, 2)) + 1e-10);
        }
    }
    SUBCASE("agrees with relative value iteration") {
        RngStream rng(15);
        for (int trial = 0; trial < 10; ++trial) {
            const FiniteKernel k = random_mixed_kernel(rng, 4, 3, 0.3);
            const auto cost = random_cost(rng, 4, 3);
            const auto [j_bf, pol] = brute_force_optimal(k, cost);
            const PlannerSolution sol = relative_value_iteration(k, cost, 1e-10, 50000);
            CHECK(sol.j_star == doctest::Approx(j_bf).epsilon(1e-8));
        }
    }
}

TEST_CASE("span seminorm contraction") {
    RngStream rng(16);
    for (int trial = 0; trial < 100; ++trial) {
        const FiniteKernel k = random_mixed_kernel(rng, 4, 3, 0.2);
        const auto cost = random_cost(rng, 4, 3);
        const double beta = dobrushin_coefficient(k).value;
        std::vector<double> v(4), w(4);
        for (auto& x : v) x = 4.0 * rng.next_double() - 2.0;
        for (auto& x : w) x = 4.0 * rng.next_double() - 2.0;
        const auto tv = bellman_apply(k, cost, v).first;
        const auto tw = bellman_apply(k, cost, w).first;
        std::vector<double> dv(4), dT(4);
        for (std::size_t i = 0; i < 4; ++i) {
            dv[i] = v[i] - w[i];
            dT[i] = tv[i] - tw[i];
        }
        CHECK(span(dT) <= beta * span(dv) + 1e-12);
    }
}
