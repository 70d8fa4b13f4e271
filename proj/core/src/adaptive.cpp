#include "borel_adapt/adaptive.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>

#include "borel_adapt/metrics.hpp"

namespace borel_adapt {

namespace {

// Aperiodicity transform for planning on raw empirical estimates: rows can
// be point masses that form periodic or multichain structure under a greedy
// policy, on which plain RVI stalls. Planning on (1-alpha) K + alpha I has
// the same ACOE solution (bias scaled by 1/(1-alpha)) and the same greedy
// policy, and converges whenever the chain is unichain.
constexpr double kAperiodicAlpha = 0.25;

FiniteKernel transform_kernel(const FiniteKernel& k) {
    FiniteKernel out(k.n_states(), k.n_actions());
    for (std::size_t x = 0; x < k.n_states(); ++x)
        for (std::size_t u = 0; u < k.n_actions(); ++u) {
            auto& row = out.row(x, u);
            const auto& src = k.row(x, u);
            for (std::size_t y = 0; y < k.n_states(); ++y)
                row[y] = (1.0 - kAperiodicAlpha) * src[y];
            row[x] += kAperiodicAlpha;
        }
    return out;
}

void transform_row(FiniteKernel& plan, const std::vector<double>& src, std::size_t x,
                   std::size_t u) {
    auto& row = plan.row(x, u);
    for (std::size_t y = 0; y < src.size(); ++y) row[y] = (1.0 - kAperiodicAlpha) * src[y];
    row[x] += kAperiodicAlpha;
}

// Tracks max pairwise row TV of a kernel under single-row updates.
class DobrushinTracker {
  public:
    explicit DobrushinTracker(const FiniteKernel& k)
        : na_(k.n_actions()), n_(k.n_states() * k.n_actions()),
          d_(n_, std::vector<double>(n_, 0.0)), rowmax_(n_, 0.0) {
        for (std::size_t r = 0; r < n_; ++r)
            for (std::size_t s = r + 1; s < n_; ++s) {
                const double v = tv_distance(k.row(r / na_, r % na_), k.row(s / na_, s % na_));
                d_[r][s] = d_[s][r] = v;
            }
        for (std::size_t r = 0; r < n_; ++r)
            rowmax_[r] = *std::max_element(d_[r].begin(), d_[r].end());
    }

    void update_row(const FiniteKernel& k, std::size_t x, std::size_t u) {
        const std::size_t r = x * na_ + u;
        for (std::size_t s = 0; s < n_; ++s) {
            if (s == r) continue;
            const double old = d_[r][s];
            const double v = tv_distance(k.row(r / na_, r % na_), k.row(s / na_, s % na_));
            d_[r][s] = d_[s][r] = v;
            if (v > rowmax_[s]) {
                rowmax_[s] = v;
            } else if (old == rowmax_[s] && v < old) {
                rowmax_[s] = *std::max_element(d_[s].begin(), d_[s].end());
            }
        }
        rowmax_[r] = *std::max_element(d_[r].begin(), d_[r].end());
    }

    double coefficient() const {
        return 0.5 * *std::max_element(rowmax_.begin(), rowmax_.end());
    }

  private:
    std::size_t na_;
    std::size_t n_;
    std::vector<std::vector<double>> d_;
    std::vector<double> rowmax_;
};

EmpiricalRunResult run_empirical(const QuantizedMDP& truth, const EmpiricalRunConfig& cfg,
                                 bool use_gate, double beta) {
    if (cfg.horizon == 0) throw std::invalid_argument("run: horizon must be >= 1");
    if (cfg.replan_every == 0) throw std::invalid_argument("run: replan_every must be >= 1");
    const std::size_t ns = truth.kernel.n_states(), na = truth.kernel.n_actions();

    RngStream env_rng = RngStream::substream(cfg.seed, 0);
    RngStream explore_rng = RngStream::substream(cfg.seed, 1);
    RngStream action_rng = RngStream::substream(cfg.seed, 2);

    CountsTable counts(ns, na);
    FiniteKernel raw = FiniteKernel::uniform(ns, na);  // Q_t with uniform fallback rows
    FiniteKernel accepted = raw;                       // M_t (equals raw without the gate)
    FiniteKernel plan = transform_kernel(accepted);

    std::unique_ptr<DobrushinTracker> gate;
    if (use_gate) {
        gate = std::make_unique<DobrushinTracker>(raw);
        if (gate->coefficient() > beta + 1e-12)
            throw std::invalid_argument("run_algorithm2: initial estimate fails the gate");
    }
    std::vector<bool> pending_rows(ns * na, false);  // raw rows not yet copied into accepted

    // per-row TV error of the accepted estimate against the reference
    std::vector<double> row_err(ns * na, 0.0);
    for (std::size_t r = 0; r < ns * na; ++r)
        row_err[r] = tv_distance(accepted.row(r / na, r % na), truth.kernel.row(r / na, r % na));

    EmpiricalRunResult out;
    out.record.steps.reserve(cfg.horizon);

    std::vector<double> v_warm(ns, 0.0);
    PlannerSolution sol;
    auto replan = [&]() {
        try {
            sol = relative_value_iteration(plan, truth.cost, cfg.rvi_tol, cfg.rvi_max_iter,
                                           &v_warm);
            v_warm = sol.v_star;
        } catch (const std::runtime_error& e) {
            throw std::runtime_error("planner failure on degenerate estimate at step " +
                                     std::to_string(out.record.steps.size()) + ": " + e.what());
        }
    };
    replan();

    std::size_t x = cfg.x0;
    double cost_sum = 0.0;
    double max_err = *std::max_element(row_err.begin(), row_err.end());
    std::size_t next_checkpoint = 0;

    for (std::size_t t = 0; t < cfg.horizon; ++t) {
        bool explore = false;
        std::size_t u;
        if (t == 0) {
            u = sol.policy.action(x);
        } else {
            if (t % cfg.replan_every == 0) replan();
            explore = explore_rng.bernoulli(std::min(1.0, 1.0 / static_cast<double>(t)));
            u = explore ? action_rng.next_index(na) : sol.policy.action(x);
        }
        const std::size_t x_next = sample_transition(truth.kernel, x, u, env_rng);
        const double c = truth.cost[x][u];
        cost_sum += c;

        counts.record(x, u, x_next);
        {  // refresh the raw estimate row for (x, u)
            auto& row = raw.row(x, u);
            const auto& tr = counts.transitions(x, u);
            const double v = static_cast<double>(counts.visits(x, u));
            for (std::size_t y = 0; y < ns; ++y) row[y] = static_cast<double>(tr[y]) / v;
        }
        pending_rows[x * na + u] = true;

        bool adopt = true;
        if (use_gate) {
            gate->update_row(raw, x, u);
            adopt = gate->coefficient() <= beta + 1e-12;
        }
        if (adopt) {
            for (std::size_t r = 0; r < ns * na; ++r) {
                if (!pending_rows[r]) continue;
                const std::size_t rx = r / na, ru = r % na;
                accepted.row(rx, ru) = raw.row(rx, ru);
                transform_row(plan, raw.row(rx, ru), rx, ru);
                row_err[r] = tv_distance(raw.row(rx, ru), truth.kernel.row(rx, ru));
                pending_rows[r] = false;
            }
            max_err = *std::max_element(row_err.begin(), row_err.end());
            if (use_gate)
                out.max_accepted_dobrushin =
                    std::max(out.max_accepted_dobrushin, gate->coefficient());
        }

        StepRow row;
        row.t = t;
        row.state = static_cast<std::uint32_t>(x);
        row.action = static_cast<std::uint32_t>(u);
        row.cost = c;
        row.avg_cost = cost_sum / static_cast<double>(t + 1);
        row.explore_flag = explore ? 1 : 0;
        row.est_err_tv = max_err;
        out.record.steps.push_back(row);

        if (next_checkpoint < cfg.checkpoints.size() &&
            t + 1 == cfg.checkpoints[next_checkpoint]) {
            out.snapshots.emplace_back(t + 1, accepted);
            ++next_checkpoint;
        }
        x = x_next;
    }

    out.final_estimate = accepted;
    out.record.final_avg_cost = cost_sum / static_cast<double>(cfg.horizon);
    for (const auto& s : out.record.steps)
        if (s.est_err_tv <= 0.05) {
            out.record.stabilization_step = static_cast<std::int64_t>(s.t);
            break;
        }
    return out;
}

}  // namespace

bool CountsTable::consistent() const {
    for (std::size_t r = 0; r < visit_.size(); ++r) {
        std::uint64_t s = 0;
        for (auto c : transition_[r]) s += c;
        if (s != visit_[r]) return false;
    }
    return true;
}

Schedule Schedule::with_sqrt_exploration(std::size_t T_prime) {
    Schedule s;
    s.T_prime = T_prime;
    s.T_l = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(T_prime))));
    return s;
}

StationaryPolicy mix_policies(const StationaryPolicy& gamma_s, const StationaryPolicy& gamma_e,
                              double p) {
    if (gamma_s.n_states() != gamma_e.n_states() || gamma_s.n_actions() != gamma_e.n_actions())
        throw std::invalid_argument("mix_policies: shape mismatch");
    if (p < 0.0 || p > 1.0) throw std::invalid_argument("mix_policies: p must be in [0,1]");
    std::vector<std::vector<double>> rows(gamma_s.n_states());
    for (std::size_t x = 0; x < gamma_s.n_states(); ++x) {
        rows[x].resize(gamma_s.n_actions());
        for (std::size_t u = 0; u < gamma_s.n_actions(); ++u)
            rows[x][u] = (1.0 - p) * gamma_s.row(x)[u] + p * gamma_e.row(x)[u];
    }
    return StationaryPolicy::randomized(std::move(rows));
}

StationaryPolicy uniform_exploration_policy(std::size_t n_states, std::size_t n_actions) {
    if (n_states == 0 || n_actions == 0)
        throw std::invalid_argument("uniform_exploration_policy: empty space");
    return StationaryPolicy::uniform(n_states, n_actions);
}

FiniteKernel empirical_kernel(const CountsTable& counts, const FiniteKernel& fallback) {
    const std::size_t ns = counts.n_states(), na = counts.n_actions();
    if (fallback.n_states() != ns || fallback.n_actions() != na)
        throw std::invalid_argument("empirical_kernel: fallback shape mismatch");
    FiniteKernel k(ns, na);
    for (std::size_t x = 0; x < ns; ++x)
        for (std::size_t u = 0; u < na; ++u) {
            const auto v = counts.visits(x, u);
            auto& row = k.row(x, u);
            if (v == 0) {
                row = fallback.row(x, u);
            } else {
                const auto& tr = counts.transitions(x, u);
                for (std::size_t y = 0; y < ns; ++y)
                    row[y] = static_cast<double>(tr[y]) / static_cast<double>(v);
            }
        }
    return k;
}

EmpiricalRunResult run_algorithm1(const QuantizedMDP& truth, const EmpiricalRunConfig& cfg) {
    return run_empirical(truth, cfg, /*use_gate=*/false, 1.0);
}

EmpiricalRunResult run_algorithm2(const QuantizedMDP& truth, double beta,
                                  const EmpiricalRunConfig& cfg) {
    if (beta < 0.0 || beta > 1.0)
        throw std::invalid_argument("run_algorithm2: beta must be in [0,1]");
    return run_empirical(truth, cfg, /*use_gate=*/true, beta);
}

namespace {

EpsilonNet identity_net(std::size_t n) {
    EpsilonNet net;
    net.representatives.resize(n);
    net.assignment.resize(n);
    for (std::size_t i = 0; i < n; ++i) net.representatives[i] = net.assignment[i] = i;
    return net;
}

std::vector<double> member_errors(const CandidateFamily& family, const FiniteKernel& truth) {
    std::vector<double> errs(family.size(), 0.0);
    for (std::size_t m = 0; m < family.size(); ++m) {
        double e = 0.0;
        for (std::size_t x = 0; x < truth.n_states(); ++x)
            for (std::size_t u = 0; u < truth.n_actions(); ++u)
                e = std::max(e, tv_distance(family.members[m].row(x, u), truth.row(x, u)));
        errs[m] = e;
    }
    return errs;
}

}  // namespace

RunRecord run_alternating(const QuantizedMDP& truth, const CandidateFamily& family,
                          const std::vector<double>& prior,
                          const std::vector<std::vector<double>>& d_state,
                          const AlternatingConfig& cfg) {
    if (!cfg.schedule.valid())
        throw std::invalid_argument("run_alternating: schedule requires 1 <= T_l < T_prime");
    if (cfg.cycles == 0) throw std::invalid_argument("run_alternating: cycles must be >= 1");
    const std::size_t ns = truth.kernel.n_states(), na = truth.kernel.n_actions();

    RngStream env_rng = RngStream::substream(cfg.seed, 0);
    RngStream action_rng = RngStream::substream(cfg.seed, 2);

    PosteriorState posterior = init_posterior(prior, identity_net(family.size()));
    const auto errs = member_errors(family, truth.kernel);

    RunRecord rec;
    rec.steps.reserve(cfg.cycles * cfg.schedule.T_prime);

    std::size_t x = cfg.x0;
    double cost_sum = 0.0;
    std::size_t steps_done = 0;
    std::optional<std::size_t> first_map;

    auto do_step = [&](std::size_t u, bool explore, std::size_t cycle, bool absorb) {
        const std::size_t x_next = sample_transition(truth.kernel, x, u, env_rng);
        const double c = truth.cost[x][u];
        cost_sum += c;
        if (absorb) {
            try {
                posterior.update(family, x, u, x_next);
            } catch (const std::runtime_error& e) {
                throw std::runtime_error("run_alternating: posterior collapse in cycle " +
                                         std::to_string(cycle) + ": " + e.what());
            }
        }
        StepRow row;
        row.t = steps_done;
        row.state = static_cast<std::uint32_t>(x);
        row.action = static_cast<std::uint32_t>(u);
        row.cost = c;
        row.avg_cost = cost_sum / static_cast<double>(steps_done + 1);
        row.explore_flag = explore ? 1 : 0;
        row.est_err_tv = errs[posterior.map_index()];
        row.map_index = static_cast<std::int64_t>(posterior.map_index());
        row.phase = static_cast<std::int64_t>(cycle);
        rec.steps.push_back(row);
        rec.map_change_trace.push_back(posterior.map_change_count());
        rec.posterior_mass_trace.push_back(posterior.max_bin_mass());
        ++steps_done;
        x = x_next;
    };

    for (std::size_t cycle = 0; cycle < cfg.cycles; ++cycle) {
        for (std::size_t i = 0; i < cfg.schedule.T_l; ++i)
            do_step(action_rng.next_index(na), true, cycle, true);

        const std::size_t map = map_estimate(posterior);
        if (!first_map) {
            first_map = map;
            // subsequent updates only consider candidates within epsilon of
            // the initial estimate (uniform BL)
            std::vector<bool> keep(family.size(), false);
            for (std::size_t m = 0; m < family.size(); ++m)
                keep[m] = uniform_bl_distance(family.members[m], family.members[map], d_state)
                              .value <= cfg.epsilon;
            posterior.restrict_support(keep);
        }
        const auto sol = relative_value_iteration(family.members[map], truth.cost, cfg.rvi_tol,
                                                  cfg.rvi_max_iter);

        const double exploit_start_sum = cost_sum;
        for (std::size_t i = 0; i < cfg.schedule.T_a(); ++i)
            do_step(sol.policy.action(x), false, cycle, cfg.absorb_exploit_data);

        CycleRow cr;
        cr.cycle = cycle;
        cr.map_index = map;
        cr.exploit_avg_cost =
            (cost_sum - exploit_start_sum) / static_cast<double>(cfg.schedule.T_a());
        cr.cumulative_avg_cost = cost_sum / static_cast<double>(steps_done);
        rec.cycles.push_back(cr);
    }

    rec.final_avg_cost = cost_sum / static_cast<double>(steps_done);
    for (std::size_t i = 1; i < rec.map_change_trace.size(); ++i)
        if (rec.map_change_trace[i] != rec.map_change_trace[i - 1])
            rec.stabilization_step = static_cast<std::int64_t>(i);
    return rec;
}

RunRecord run_simultaneous(const QuantizedMDP& truth, const CandidateFamily& family,
                           const std::vector<double>& prior, const SimultaneousConfig& cfg) {
    if (cfg.horizon == 0) throw std::invalid_argument("run_simultaneous: horizon must be >= 1");
    const std::size_t na = truth.kernel.n_actions();

    RngStream env_rng = RngStream::substream(cfg.seed, 0);
    RngStream explore_rng = RngStream::substream(cfg.seed, 1);
    RngStream action_rng = RngStream::substream(cfg.seed, 2);

    PosteriorState posterior = init_posterior(prior, identity_net(family.size()));
    const auto errs = member_errors(family, truth.kernel);

    auto solve_for = [&](std::size_t m) {
        return relative_value_iteration(family.members[m], truth.cost, cfg.rvi_tol,
                                        cfg.rvi_max_iter)
            .policy;
    };
    StationaryPolicy exploit = solve_for(map_estimate(posterior));
    const StationaryPolicy explore_policy = uniform_exploration_policy(
        truth.kernel.n_states(), na);

    RunRecord rec;
    rec.steps.reserve(cfg.horizon);

    std::size_t phase = 1;
    std::size_t x = cfg.x0;
    double cost_sum = 0.0;

    for (std::size_t t = 0; t < cfg.horizon; ++t) {
        bool explore = false;
        std::size_t u;
        if (t == 0) {
            u = exploit.action(x);
        } else {
            const double k = static_cast<double>(posterior.map_change_count());
            explore = explore_rng.bernoulli(1.0 / ((1.0 + k) * (1.0 + k)));
            u = explore ? explore_policy.sample_action(x, action_rng) : exploit.action(x);
        }
        const std::size_t x_next = sample_transition(truth.kernel, x, u, env_rng);
        const double c = truth.cost[x][u];
        cost_sum += c;
        try {
            posterior.update(family, x, u, x_next);
        } catch (const std::runtime_error& e) {
            throw std::runtime_error("run_simultaneous: posterior collapse at step " +
                                     std::to_string(t) + ": " + e.what());
        }

        // at most one phase advance per step (the stopping times are
        // strictly increasing)
        if (posterior.max_bin_mass() >= 1.0 - std::pow(2.0, -static_cast<double>(phase))) {
            exploit = solve_for(map_estimate(posterior));
            rec.phase_boundaries.push_back(t);
            ++phase;
        }

        StepRow row;
        row.t = t;
        row.state = static_cast<std::uint32_t>(x);
        row.action = static_cast<std::uint32_t>(u);
        row.cost = c;
        row.avg_cost = cost_sum / static_cast<double>(t + 1);
        row.explore_flag = explore ? 1 : 0;
        row.est_err_tv = errs[posterior.map_index()];
        row.map_index = static_cast<std::int64_t>(posterior.map_index());
        row.phase = static_cast<std::int64_t>(phase);
        rec.steps.push_back(row);
        rec.map_change_trace.push_back(posterior.map_change_count());
        rec.posterior_mass_trace.push_back(posterior.max_bin_mass());
        x = x_next;
    }

    rec.final_avg_cost = cost_sum / static_cast<double>(cfg.horizon);
    for (std::size_t i = 1; i < rec.map_change_trace.size(); ++i)
        if (rec.map_change_trace[i] != rec.map_change_trace[i - 1])
            rec.stabilization_step = static_cast<std::int64_t>(i);
    return rec;
}

}  // namespace borel_adapt
