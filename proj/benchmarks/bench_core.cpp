#include <benchmark/benchmark.h>

#include <vector>

#include "borel_adapt/adaptive.hpp"
#include "borel_adapt/metrics.hpp"
#include "borel_adapt/planner.hpp"
#include "borel_adapt/quantize.hpp"
#include "borel_adapt/rng.hpp"

using namespace borel_adapt;

namespace {

QuantizedMDP benchmark_mdp(std::size_t n) {
    const Quantizer q(n);
    return build_quantized_kernel({1.0, 0.5, 0.3, 0.25}, CostFunction::quadratic(0.5, 0.2), q,
                                  q);
}

FiniteKernel random_kernel(RngStream& rng, std::size_t ns, std::size_t na) {
    FiniteKernel k(ns, na);
    for (std::size_t x = 0; x < ns; ++x)
        for (std::size_t u = 0; u < na; ++u) {
            double s = 0.0;
            for (double& v : k.row(x, u)) {
                v = rng.next_double() + 1e-3;
                s += v;
            }
            for (double& v : k.row(x, u)) v /= s;
        }
    return k;
}

void BM_rvi_solve(benchmark::State& state) {
    const QuantizedMDP mdp = benchmark_mdp(std::size_t(state.range(0)));
    for (auto _ : state) {
        const auto sol = relative_value_iteration(mdp.kernel, mdp.cost, 1e-9, 500000);
        benchmark::DoNotOptimize(sol.j_star);
    }
}
BENCHMARK(BM_rvi_solve)->Arg(8)->Arg(20)->Arg(40)->Arg(80);

void BM_rvi_warm_start(benchmark::State& state) {
    const QuantizedMDP mdp = benchmark_mdp(40);
    const auto cold = relative_value_iteration(mdp.kernel, mdp.cost, 1e-9, 500000);
    for (auto _ : state) {
        const auto sol =
            relative_value_iteration(mdp.kernel, mdp.cost, 1e-9, 500000, &cold.v_star);
        benchmark::DoNotOptimize(sol.j_star);
    }
}
BENCHMARK(BM_rvi_warm_start);

void BM_bl_distance(benchmark::State& state) {
    const std::size_t n = std::size_t(state.range(0));
    RngStream rng(7);
    std::vector<double> mu(n), nu(n);
    double sm = 0.0, sn = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mu[i] = rng.next_double() + 1e-3;
        nu[i] = rng.next_double() + 1e-3;
        sm += mu[i];
        sn += nu[i];
    }
    for (std::size_t i = 0; i < n; ++i) {
        mu[i] /= sm;
        nu[i] /= sn;
    }
    std::vector<std::vector<double>> d(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            d[i][j] = double(i > j ? i - j : j - i) / double(n);
    for (auto _ : state) {
        const auto rep = bl_distance(mu, nu, d);
        benchmark::DoNotOptimize(rep.value);
    }
}
BENCHMARK(BM_bl_distance)->Arg(3)->Arg(8)->Arg(32);

void BM_dobrushin(benchmark::State& state) {
    RngStream rng(11);
    const FiniteKernel k = random_kernel(rng, std::size_t(state.range(0)), 8);
    for (auto _ : state) {
        const auto rep = dobrushin_coefficient(k);
        benchmark::DoNotOptimize(rep.value);
    }
}
BENCHMARK(BM_dobrushin)->Arg(8)->Arg(20)->Arg(40);

void BM_quantize_exact(benchmark::State& state) {
    const std::size_t n = std::size_t(state.range(0));
    const Quantizer q(n);
    const ContinuousModel m{1.0, 0.5, 0.3, 0.25};
    const CostFunction c = CostFunction::quadratic(0.5, 0.2);
    for (auto _ : state) {
        const QuantizedMDP mdp = build_quantized_kernel(m, c, q, q);
        benchmark::DoNotOptimize(mdp.c_max);
    }
}
BENCHMARK(BM_quantize_exact)->Arg(8)->Arg(40)->Arg(80);

void BM_adaptive_step_loop(benchmark::State& state) {
    const QuantizedMDP truth = benchmark_mdp(8);
    EmpiricalRunConfig cfg;
    cfg.horizon = std::size_t(state.range(0));
    cfg.seed = 3;
    for (auto _ : state) {
        const auto res = run_algorithm1(truth, cfg);
        benchmark::DoNotOptimize(res.record.final_avg_cost);
    }
    state.SetItemsProcessed(std::int64_t(state.iterations()) * state.range(0));
}
BENCHMARK(BM_adaptive_step_loop)->Arg(1000)->Arg(10000);

}  // namespace

BENCHMARK_MAIN();
