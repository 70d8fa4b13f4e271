#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "borel_adapt/harness.hpp"
#include "borel_adapt/planner.hpp"

using namespace borel_adapt;
namespace fs = std::filesystem;

namespace {

fs::path write_temp(const std::string& name, const std::string& body) {
    const fs::path p = fs::temp_directory_path() / name;
    std::ofstream(p) << body;
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

const char* kMinimalFinite = R"({
  "model": {"type": "finite", "n_states": 2, "n_actions": 1,
            "rows": [[0.5, 0.5], [0.2, 0.8]]},
  "cost": {"kind": "table", "table": [[1.0], [0.0]]},
  "strategy": "alg1",
  "horizon": 10,
  "seeds": [1]
})";

}  // namespace

TEST_CASE("config loading") {
    SUBCASE("minimal finite-model config uses documented defaults") {
        const auto path = write_temp("cfg_minimal.json", kMinimalFinite);
        const ExperimentConfig cfg = load_config(path);
        CHECK(cfg.strategy == Strategy::alg1);
        CHECK(cfg.horizon == 10);
        CHECK(cfg.replan_every == 1);
        CHECK(cfg.quant_states == 2);  // taken from the finite kernel
        CHECK(cfg.quant_actions == 1);
        CHECK(cfg.gap_tolerance == 0.05);
        CHECK(cfg.est_err_tolerance == 0.05);
        CHECK(cfg.absorb_exploit_data);
    }
    SUBCASE("a negative horizon is rejected with its field path") {
        std::string body = kMinimalFinite;
        body.replace(body.find("\"horizon\": 10"), 13, "\"horizon\": -5");
        const auto path = write_temp("cfg_neg_horizon.json", body);
        try {
            load_config(path);
            FAIL("expected a rejection");
        } catch (const std::runtime_error& e) {
            CHECK(std::string(e.what()).find("horizon") != std::string::npos);
        }
    }
    SUBCASE("an unknown strategy is rejected") {
        std::string body = kMinimalFinite;
        body.replace(body.find("\"alg1\""), 6, "\"warp\"");
        const auto path = write_temp("cfg_bad_strategy.json", body);
        try {
            load_config(path);
            FAIL("expected a rejection");
        } catch (const std::runtime_error& e) {
            CHECK(std::string(e.what()).find("warp") != std::string::npos);
        }
    }
    SUBCASE("a non-stochastic kernel row is rejected with its path") {
        std::string body = kMinimalFinite;
        body.replace(body.find("[0.5, 0.5]"), 10, "[0.5, 0.6]");
        const auto path = write_temp("cfg_bad_row.json", body);
        CHECK_THROWS_AS(load_config(path), std::runtime_error);
    }
    SUBCASE("posterior strategies require a family") {
        std::string body = kMinimalFinite;
        body.replace(body.find("\"alg1\""), 6, "\"simultaneous\"");
        const auto path = write_temp("cfg_no_family.json", body);
        try {
            load_config(path);
            FAIL("expected a rejection");
        } catch (const std::runtime_error& e) {
            CHECK(std::string(e.what()).find("family") != std::string::npos);
        }
    }
}

TEST_CASE("experiment execution") {
    const fs::path out = fs::temp_directory_path() / "harness_test_out";
    fs::remove_all(out);
    std::string body = kMinimalFinite;
    body.insert(body.rfind('}'), ",\n  \"output_dir\": \"" + out.string() + "\"\n");
    const auto path = write_temp("cfg_run.json", body);
    const ExperimentConfig cfg = load_config(path);

    SUBCASE("a ten-step run yields a ten-row trace and a one-row summary") {
        const ExperimentSummary summary = run_experiment(cfg);
        REQUIRE(summary.runs.size() == 1);
        const std::string trace = slurp(out / "alg1_seed1.csv");
        // header + 10 data rows
        CHECK(std::count(trace.begin(), trace.end(), '\n') == 11);
        const std::string sum = slurp(out / "summary.csv");
        CHECK(std::count(sum.begin(), sum.end(), '\n') == 2);
        CHECK(sum.rfind("seed,final_gap,stabilization_step,pass", 0) == 0);
    }
    SUBCASE("reruns are byte-identical") {
        run_experiment(cfg);
        const std::string first = slurp(out / "alg1_seed1.csv");
        const std::string first_sum = slurp(out / "summary.csv");
        run_experiment(cfg);
        CHECK(slurp(out / "alg1_seed1.csv") == first);
        CHECK(slurp(out / "summary.csv") == first_sum);
    }
    SUBCASE("threaded sweeps match the serial outputs") {
        ExperimentConfig many = cfg;
        many.seeds = {1, 2, 3, 4, 5};
        run_experiment(many);
        std::vector<std::string> serial;
        for (int s = 1; s <= 5; ++s)
            serial.push_back(slurp(out / ("alg1_seed" + std::to_string(s) + ".csv")));
        const std::string serial_sum = slurp(out / "summary.csv");
        run_experiment(many, 0, 4);
        for (int s = 1; s <= 5; ++s)
            CHECK(slurp(out / ("alg1_seed" + std::to_string(s) + ".csv")) == serial[s - 1]);
        CHECK(slurp(out / "summary.csv") == serial_sum);
    }
    SUBCASE("the summary average cost matches a recomputation from the trace") {
        const QuantizedMDP truth = resolve_truth(cfg);
        const RunRecord rec = run_strategy(cfg, truth, 0.0, 1);
        double sum = 0.0;
        for (const auto& s : rec.steps) sum += s.cost;
        CHECK(rec.final_avg_cost ==
              doctest::Approx(sum / double(rec.steps.size())).epsilon(1e-10));
        CHECK(rec.steps.back().avg_cost == doctest::Approx(rec.final_avg_cost).epsilon(1e-10));
    }
    SUBCASE("seed offsets shift every run") {
        const ExperimentSummary summary = run_experiment(cfg, 100);
        REQUIRE(summary.runs.size() == 1);
        CHECK(summary.runs[0].seed == 101);
        CHECK(fs::exists(out / "alg1_seed101.csv"));
    }
}

TEST_CASE("plot data emission") {
    const fs::path out = fs::temp_directory_path() / "harness_plot_out";
    fs::create_directories(out);
    RunRecord a, b;
    for (int t = 0; t < 50; ++t) {
        StepRow r;
        r.t = t;
        r.avg_cost = 1.0 + t * 0.01;
        r.est_err_tv = 2.0 - t * 0.01;
        a.steps.push_back(r);
        r.avg_cost = 2.0 - t * 0.01;
        b.steps.push_back(r);
    }
    SUBCASE("bands cover the per-seed extremes") {
        emit_plot_data({a, b}, PlotKind::cost_trace, out / "cost.csv");
        std::ifstream in(out / "cost.csv");
        std::string line;
        std::getline(in, line);
        CHECK(line.rfind("#", 0) == 0);
        std::getline(in, line);
        std::getline(in, line);
        CHECK(line == "t,mean,min,max");
        std::getline(in, line);  // t = 0: values 1.0 and 2.0
        CHECK(line == "0,1.5,1,2");
    }
    SUBCASE("an empty record set is rejected") {
        CHECK_THROWS_AS(emit_plot_data({}, PlotKind::cost_trace, out / "x.csv"),
                        std::invalid_argument);
    }
}

TEST_CASE("quantization trend file") {
    const fs::path out = fs::temp_directory_path() / "harness_trend_out";
    fs::create_directories(out);
    const ContinuousModel m{1.0, 0.5, 0.3, 0.25};
    emit_quantization_trend(m, CostFunction::quadratic(0.5, 0.2), {5, 10}, 20,
                            out / "trend.csv");
    std::ifstream in(out / "trend.csv");
    std::string line;
    int data_rows = 0;
    while (std::getline(in, line))
        if (!line.empty() && line[0] != '#' && line[0] != 'n') ++data_rows;
    CHECK(data_rows == 2);
}

TEST_CASE("trailing average cost") {
    RunRecord rec;
    for (int t = 0; t < 10; ++t) {
        StepRow r;
        r.cost = t;  // 0..9
        rec.steps.push_back(r);
    }
    CHECK(trailing_average_cost(rec, 4) == doctest::Approx((6 + 7 + 8 + 9) / 4.0));
    CHECK(trailing_average_cost(rec, 100) == doctest::Approx(4.5));
    CHECK(trailing_average_cost(rec, 0) == doctest::Approx(4.5));
}
