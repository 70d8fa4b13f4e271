#pragma once

#include <cstdint>
#include <vector>

namespace borel_adapt {

/// One row of a trajectory trace. est_err_tv is the max-row TV distance of
/// the current kernel estimate to the reference kernel; map_index and phase
/// are -1 for strategies that do not track them.
struct StepRow {
    std::uint64_t t = 0;
    std::uint32_t state = 0;
    std::uint32_t action = 0;
    double cost = 0.0;
    double avg_cost = 0.0;
    std::uint8_t explore_flag = 0;
    double est_err_tv = 0.0;
    std::int64_t map_index = -1;
    std::int64_t phase = -1;
};

/// Per-cycle summary of the alternating strategy.
struct CycleRow {
    std::size_t cycle = 0;
    std::size_t map_index = 0;
    double exploit_avg_cost = 0.0;
    double cumulative_avg_cost = 0.0;
};

/// Full trace of one adaptive run plus summary statistics.
struct RunRecord {
    std::vector<StepRow> steps;

    double final_avg_cost = 0.0;
    double j_star_ref = 0.0;       // optimal cost of the reference model
    double gap = 0.0;              // final_avg_cost - j_star_ref
    std::int64_t stabilization_step = -1;

    std::vector<std::size_t> phase_boundaries;  // simultaneous strategy
    std::vector<std::size_t> map_change_trace;  // k at each step (bayes strategies)
    std::vector<double> posterior_mass_trace;   // max bin posterior per step
    std::vector<CycleRow> cycles;               // alternating strategy
};

}  // namespace borel_adapt
