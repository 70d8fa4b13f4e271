#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "borel_adapt/adaptive.hpp"
#include "borel_adapt/models.hpp"
#include "borel_adapt/quantize.hpp"
#include "borel_adapt/run_record.hpp"

namespace borel_adapt {

enum class Strategy { alg1, alg2, alternating, simultaneous };

std::string strategy_name(Strategy s);
Strategy parse_strategy(const std::string& name);

struct FamilySpec {
    // each member is either a continuous model (quantized with the
    // experiment's quantizers) or an explicit finite kernel
    std::vector<std::variant<ContinuousModel, FiniteKernel>> members;
    std::vector<double> prior;  // empty = uniform
    std::optional<std::size_t> true_index;
};

struct ExperimentConfig {
    std::variant<ContinuousModel, FiniteKernel> model;
    CostFunction cost;
    std::size_t quant_states = 8;
    std::size_t quant_actions = 8;
    QuantizeMode quant_mode = QuantizeMode::exact;
    std::size_t quant_samples = 0;

    Strategy strategy = Strategy::alg1;
    double beta = 1.0;                   // algorithm II gate
    std::size_t replan_every = 1;
    Schedule schedule;                   // alternating
    std::size_t cycles = 0;              // alternating
    double epsilon = 2.0;                // alternating restriction radius
    bool absorb_exploit_data = true;
    std::optional<FamilySpec> family;    // bayes strategies

    std::size_t horizon = 0;
    std::vector<std::size_t> checkpoints;
    std::vector<std::uint64_t> seeds;
    double gap_tolerance = 0.05;     // fraction of c_max, cost-based strategies
    double est_err_tolerance = 0.05; // max-row TV, algorithm I
    std::string output_dir = "out";
};

/// Parse and validate a config file. Throws std::runtime_error with a
/// field path on parse or validation failure.
ExperimentConfig load_config(const std::filesystem::path& path);

struct RunSummary {
    std::uint64_t seed = 0;
    double final_gap = 0.0;
    std::int64_t stabilization_step = -1;
    bool pass = false;
    std::string error;  // nonempty when the run failed
};

struct ExperimentSummary {
    std::vector<RunSummary> runs;
    double j_star_ref = 0.0;
    bool all_pass() const;
};

/// Resolve the configured model to the finite MDP the strategies run on.
QuantizedMDP resolve_truth(const ExperimentConfig& cfg);

/// Execute every configured seed, writing one trace CSV per run plus a
/// summary CSV under output_dir. Per-run failures are recorded in the
/// summary, not rethrown. seed_offset shifts every configured seed. Runs are
/// independent and spread over n_threads workers; outputs are byte-identical
/// for any thread count because every run owns its files and the summary is
/// written once, in seed order.
ExperimentSummary run_experiment(const ExperimentConfig& cfg, std::uint64_t seed_offset = 0,
                                 unsigned n_threads = 1);

/// Run a single seed and return the full record (gap and reference filled).
/// When snapshots_out is nonnull the checkpointed kernel estimates of the
/// empirical strategies are copied into it.
RunRecord run_strategy(const ExperimentConfig& cfg, const QuantizedMDP& truth,
                       double j_star_ref, std::uint64_t seed,
                       std::vector<std::pair<std::size_t, FiniteKernel>>* snapshots_out = nullptr);

void write_run_csv(const RunRecord& rec, const std::filesystem::path& path);
void write_kernel_json(const FiniteKernel& k, const std::filesystem::path& path);

enum class PlotKind { cost_trace, est_err, posterior_mass };

/// Two-column mean trace with per-seed min/max band, downsampled to at most
/// `max_points` rows; columns documented in a header comment.
void emit_plot_data(const std::vector<RunRecord>& records, PlotKind kind,
                    const std::filesystem::path& path, std::size_t max_points = 2000);

/// (n, |j*_n - j*_ref|) rows for a ladder of quantization resolutions.
void emit_quantization_trend(const ContinuousModel& model, const CostFunction& cost,
                             const std::vector<std::size_t>& ns, std::size_t n_ref,
                             const std::filesystem::path& path);

/// Trailing-window mean of the cost column (window capped at the trace
/// length).
double trailing_average_cost(const RunRecord& rec, std::size_t window);

}  // namespace borel_adapt
