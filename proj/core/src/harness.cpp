#include "borel_adapt/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "borel_adapt/metrics.hpp"
#include "borel_adapt/planner.hpp"

namespace borel_adapt {

using nlohmann::json;

std::string strategy_name(Strategy s) {
    switch (s) {
        case Strategy::alg1: return "alg1";
        case Strategy::alg2: return "alg2";
        case Strategy::alternating: return "alternating";
        case Strategy::simultaneous: return "simultaneous";
    }
    throw std::logic_error("strategy_name: unknown strategy");
}

Strategy parse_strategy(const std::string& name) {
    if (name == "alg1") return Strategy::alg1;
    if (name == "alg2") return Strategy::alg2;
    if (name == "alternating") return Strategy::alternating;
    if (name == "simultaneous") return Strategy::simultaneous;
    throw std::runtime_error("strategy: unknown value '" + name + "'");
}

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw std::runtime_error("config error at " + path + ": " + what);
}

const json& require(const json& j, const std::string& key, const std::string& path) {
    if (!j.is_object()) fail(path, "expected an object");
    auto it = j.find(key);
    if (it == j.end()) fail(path + "." + key, "missing required field");
    return *it;
}

double as_number(const json& j, const std::string& path) {
    if (!j.is_number()) fail(path, "expected a number");
    return j.get<double>();
}

std::size_t as_size(const json& j, const std::string& path) {
    if (!j.is_number_integer() || j.get<std::int64_t>() < 0)
        fail(path, "expected a non-negative integer");
    return j.get<std::size_t>();
}

std::string as_string(const json& j, const std::string& path) {
    if (!j.is_string()) fail(path, "expected a string");
    return j.get<std::string>();
}

FiniteKernel parse_finite_kernel(const json& j, const std::string& path) {
    const std::size_t ns = as_size(require(j, "n_states", path), path + ".n_states");
    const std::size_t na = as_size(require(j, "n_actions", path), path + ".n_actions");
    if (ns == 0 || na == 0) fail(path, "n_states and n_actions must be positive");
    const json& rows = require(j, "rows", path);
    if (!rows.is_array() || rows.size() != ns * na)
        fail(path + ".rows", "expected " + std::to_string(ns * na) +
                                 " row-major probability rows");
    FiniteKernel k(ns, na);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const json& row = rows[r];
        const std::string rpath = path + ".rows[" + std::to_string(r) + "]";
        if (!row.is_array() || row.size() != ns)
            fail(rpath, "expected " + std::to_string(ns) + " entries");
        std::vector<double>& dst = k.row(r / na, r % na);
        for (std::size_t i = 0; i < ns; ++i)
            dst[i] = as_number(row[i], rpath + "[" + std::to_string(i) + "]");
    }
    const auto problems = validate_kernel(k);
    if (!problems.empty()) fail(path + ".rows", problems.front());
    return k;
}

ContinuousModel parse_continuous_model(const json& j, const std::string& path) {
    ContinuousModel m;
    m.a = as_number(require(j, "a", path), path + ".a");
    m.b = as_number(require(j, "b", path), path + ".b");
    m.p_full = as_number(require(j, "p_full", path), path + ".p_full");
    m.sigma = as_number(require(j, "sigma", path), path + ".sigma");
    if (m.p_full < 0.0 || m.p_full > 1.0) fail(path + ".p_full", "must lie in [0, 1]");
    if (m.sigma <= 0.0 || m.sigma > 1.0) fail(path + ".sigma", "must lie in (0, 1]");
    return m;
}

std::variant<ContinuousModel, FiniteKernel> parse_model(const json& j, const std::string& path) {
    const std::string type = as_string(require(j, "type", path), path + ".type");
    if (type == "continuous") return parse_continuous_model(j, path);
    if (type == "finite") return parse_finite_kernel(j, path);
    fail(path + ".type", "expected 'continuous' or 'finite'");
}

CostFunction parse_cost(const json& j, const std::string& path) {
    const std::string kind = as_string(require(j, "kind", path), path + ".kind");
    if (kind == "quadratic") {
        const double xt = as_number(require(j, "x_target", path), path + ".x_target");
        const double uw = as_number(require(j, "u_weight", path), path + ".u_weight");
        const double ut =
            j.contains("u_target") ? as_number(j["u_target"], path + ".u_target") : 0.0;
        return CostFunction::quadratic(xt, uw, ut);
    }
    if (kind == "constant")
        return CostFunction::constant(as_number(require(j, "value", path), path + ".value"));
    if (kind == "table") {
        const json& tbl = require(j, "table", path);
        if (!tbl.is_array() || tbl.empty()) fail(path + ".table", "expected a non-empty array");
        std::vector<std::vector<double>> table;
        double c_max = 0.0;
        for (std::size_t x = 0; x < tbl.size(); ++x) {
            const std::string rpath = path + ".table[" + std::to_string(x) + "]";
            if (!tbl[x].is_array() || tbl[x].empty()) fail(rpath, "expected a non-empty array");
            std::vector<double> row;
            for (std::size_t u = 0; u < tbl[x].size(); ++u) {
                const double c = as_number(tbl[x][u], rpath + "[" + std::to_string(u) + "]");
                if (c < 0.0) fail(rpath + "[" + std::to_string(u) + "]", "costs must be >= 0");
                c_max = std::max(c_max, c);
                row.push_back(c);
            }
            table.push_back(std::move(row));
        }
        return CostFunction::from_table(std::move(table), c_max);
    }
    fail(path + ".kind", "expected 'quadratic', 'table', or 'constant'");
}

FamilySpec parse_family(const json& j, const std::string& path) {
    FamilySpec spec;
    const json& members = require(j, "members", path);
    if (!members.is_array() || members.empty())
        fail(path + ".members", "expected a non-empty array");
    for (std::size_t m = 0; m < members.size(); ++m)
        spec.members.push_back(
            parse_model(members[m], path + ".members[" + std::to_string(m) + "]"));
    if (j.contains("prior")) {
        const json& prior = j["prior"];
        if (!prior.is_array() || prior.size() != members.size())
            fail(path + ".prior", "expected one weight per member");
        for (std::size_t m = 0; m < prior.size(); ++m)
            spec.prior.push_back(as_number(prior[m], path + ".prior[" + std::to_string(m) + "]"));
    }
    if (j.contains("true_index")) {
        const std::size_t ti = as_size(j["true_index"], path + ".true_index");
        if (ti >= members.size()) fail(path + ".true_index", "out of range");
        spec.true_index = ti;
    }
    return spec;
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);  // binary: byte-identical across platforms
    if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
    return out;
}

}  // namespace

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("config error at <file>: cannot open " + path.string());
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw std::runtime_error(std::string("config error at <file>: ") + e.what());
    }

    ExperimentConfig cfg;
    cfg.model = parse_model(require(j, "model", "$"), "$.model");
    cfg.cost = parse_cost(require(j, "cost", "$"), "$.cost");

    if (j.contains("quantization")) {
        const json& q = j["quantization"];
        if (q.contains("n_states")) cfg.quant_states = as_size(q["n_states"], "$.quantization.n_states");
        if (q.contains("n_actions"))
            cfg.quant_actions = as_size(q["n_actions"], "$.quantization.n_actions");
        if (q.contains("mode")) {
            const std::string mode = as_string(q["mode"], "$.quantization.mode");
            if (mode == "exact") cfg.quant_mode = QuantizeMode::exact;
            else if (mode == "monte_carlo") cfg.quant_mode = QuantizeMode::monte_carlo;
            else fail("$.quantization.mode", "expected 'exact' or 'monte_carlo'");
        }
        if (q.contains("samples")) cfg.quant_samples = as_size(q["samples"], "$.quantization.samples");
        if (cfg.quant_mode == QuantizeMode::monte_carlo && cfg.quant_samples == 0)
            fail("$.quantization.samples", "monte_carlo mode needs samples > 0");
    }
    if (cfg.quant_states == 0 || cfg.quant_actions == 0)
        fail("$.quantization", "n_states and n_actions must be positive");
    if (std::holds_alternative<FiniteKernel>(cfg.model)) {
        const auto& k = std::get<FiniteKernel>(cfg.model);
        cfg.quant_states = k.n_states();
        cfg.quant_actions = k.n_actions();
    }

    cfg.strategy = parse_strategy(as_string(require(j, "strategy", "$"), "$.strategy"));

    const json params = j.contains("params") ? j["params"] : json::object();
    if (params.contains("beta")) {
        cfg.beta = as_number(params["beta"], "$.params.beta");
        if (cfg.beta < 0.0 || cfg.beta > 1.0) fail("$.params.beta", "must lie in [0, 1]");
    }
    if (params.contains("replan_every")) {
        cfg.replan_every = as_size(params["replan_every"], "$.params.replan_every");
        if (cfg.replan_every == 0) fail("$.params.replan_every", "must be >= 1");
    }
    if (params.contains("cycles")) cfg.cycles = as_size(params["cycles"], "$.params.cycles");
    if (params.contains("epsilon")) {
        cfg.epsilon = as_number(params["epsilon"], "$.params.epsilon");
        if (cfg.epsilon <= 0.0) fail("$.params.epsilon", "must be > 0");
    }
    if (params.contains("absorb_exploit_data")) {
        if (!params["absorb_exploit_data"].is_boolean())
            fail("$.params.absorb_exploit_data", "expected a boolean");
        cfg.absorb_exploit_data = params["absorb_exploit_data"].get<bool>();
    }
    if (params.contains("schedule")) {
        const json& s = params["schedule"];
        cfg.schedule.T_prime = as_size(require(s, "T_prime", "$.params.schedule"),
                                       "$.params.schedule.T_prime");
        cfg.schedule = s.contains("T_l")
                           ? Schedule{cfg.schedule.T_prime,
                                      as_size(s["T_l"], "$.params.schedule.T_l")}
                           : Schedule::with_sqrt_exploration(cfg.schedule.T_prime);
        if (!cfg.schedule.valid())
            fail("$.params.schedule", "need 1 <= T_l < T_prime");
    }
    if (params.contains("family"))
        cfg.family = parse_family(params["family"], "$.params.family");

    cfg.horizon = as_size(require(j, "horizon", "$"), "$.horizon");
    if (cfg.horizon == 0) fail("$.horizon", "must be >= 1");

    if (j.contains("checkpoints")) {
        const json& cps = j["checkpoints"];
        if (!cps.is_array()) fail("$.checkpoints", "expected an array");
        for (std::size_t i = 0; i < cps.size(); ++i)
            cfg.checkpoints.push_back(
                as_size(cps[i], "$.checkpoints[" + std::to_string(i) + "]"));
        if (!std::is_sorted(cfg.checkpoints.begin(), cfg.checkpoints.end()))
            fail("$.checkpoints", "must be sorted ascending");
    }

    const json& seeds = require(j, "seeds", "$");
    if (!seeds.is_array() || seeds.empty()) fail("$.seeds", "expected a non-empty array");
    for (std::size_t i = 0; i < seeds.size(); ++i) {
        const std::string p = "$.seeds[" + std::to_string(i) + "]";
        if (!seeds[i].is_number_integer() || seeds[i].get<std::int64_t>() < 0)
            fail(p, "expected a non-negative integer");
        cfg.seeds.push_back(seeds[i].get<std::uint64_t>());
    }

    if (j.contains("tolerances")) {
        const json& t = j["tolerances"];
        if (t.contains("gap")) {
            cfg.gap_tolerance = as_number(t["gap"], "$.tolerances.gap");
            if (cfg.gap_tolerance < 0.0) fail("$.tolerances.gap", "must be >= 0");
        }
        if (t.contains("est_err")) {
            cfg.est_err_tolerance = as_number(t["est_err"], "$.tolerances.est_err");
            if (cfg.est_err_tolerance < 0.0) fail("$.tolerances.est_err", "must be >= 0");
        }
    }
    if (j.contains("output_dir")) cfg.output_dir = as_string(j["output_dir"], "$.output_dir");

    const bool needs_family =
        cfg.strategy == Strategy::alternating || cfg.strategy == Strategy::simultaneous;
    if (needs_family && !cfg.family)
        fail("$.params.family", "required for the posterior-based strategies");
    if (cfg.strategy == Strategy::alternating) {
        if (!cfg.schedule.valid()) fail("$.params.schedule", "required for 'alternating'");
        if (cfg.cycles == 0) fail("$.params.cycles", "required for 'alternating'");
    }
    return cfg;
}

QuantizedMDP resolve_truth(const ExperimentConfig& cfg) {
    const Quantizer qs(cfg.quant_states);
    const Quantizer qa(cfg.quant_actions);
    if (std::holds_alternative<ContinuousModel>(cfg.model)) {
        RngStream rng = RngStream::substream(0x51AB5EEDull, 0);
        return build_quantized_kernel(std::get<ContinuousModel>(cfg.model), cfg.cost, qs, qa,
                                      cfg.quant_mode, cfg.quant_samples,
                                      cfg.quant_mode == QuantizeMode::monte_carlo ? &rng
                                                                                  : nullptr);
    }
    const FiniteKernel& k = std::get<FiniteKernel>(cfg.model);
    QuantizedMDP mdp{qs, qa, k, {}, 0.0};
    if (cfg.cost.is_table()) {
        for (std::size_t x = 0; x < k.n_states(); ++x) {
            std::vector<double> row;
            for (std::size_t u = 0; u < k.n_actions(); ++u) row.push_back(cfg.cost.at(x, u));
            mdp.cost.push_back(std::move(row));
        }
    } else {
        mdp.cost = cfg.cost.tabulate(qs.centers(), qa.centers());
    }
    for (const auto& row : mdp.cost)
        for (double c : row) mdp.c_max = std::max(mdp.c_max, c);
    return mdp;
}

namespace {

FiniteKernel resolve_member(const std::variant<ContinuousModel, FiniteKernel>& member,
                            const ExperimentConfig& cfg, const Quantizer& qs,
                            const Quantizer& qa) {
    if (std::holds_alternative<FiniteKernel>(member)) {
        const FiniteKernel& k = std::get<FiniteKernel>(member);
        if (k.n_states() != qs.size() || k.n_actions() != qa.size())
            throw std::runtime_error("config error at $.params.family: member shape mismatch");
        return k;
    }
    return build_quantized_kernel(std::get<ContinuousModel>(member), cfg.cost, qs, qa,
                                  QuantizeMode::exact)
        .kernel;
}

CandidateFamily resolve_family(const ExperimentConfig& cfg, const QuantizedMDP& truth) {
    CandidateFamily family;
    for (std::size_t m = 0; m < cfg.family->members.size(); ++m) {
        family.members.push_back(resolve_member(cfg.family->members[m], cfg,
                                                truth.quantizer_state,
                                                truth.quantizer_action));
        family.labels.push_back("member_" + std::to_string(m));
    }
    family.true_index = cfg.family->true_index;
    return family;
}

std::vector<double> resolve_prior(const ExperimentConfig& cfg, std::size_t n_members) {
    if (!cfg.family->prior.empty()) {
        if (cfg.family->prior.size() != n_members)
            throw std::runtime_error("config error at $.params.family.prior: length mismatch");
        return cfg.family->prior;
    }
    return std::vector<double>(n_members, 1.0 / double(n_members));
}

}  // namespace

double trailing_average_cost(const RunRecord& rec, std::size_t window) {
    if (rec.steps.empty()) return 0.0;
    const std::size_t w = std::min(window == 0 ? rec.steps.size() : window, rec.steps.size());
    double s = 0.0;
    for (std::size_t i = rec.steps.size() - w; i < rec.steps.size(); ++i)
        s += rec.steps[i].cost;
    return s / double(w);
}

RunRecord run_strategy(const ExperimentConfig& cfg, const QuantizedMDP& truth,
                       double j_star_ref, std::uint64_t seed,
                       std::vector<std::pair<std::size_t, FiniteKernel>>* snapshots_out) {
    RunRecord rec;
    switch (cfg.strategy) {
        case Strategy::alg1:
        case Strategy::alg2: {
            EmpiricalRunConfig rc;
            rc.horizon = cfg.horizon;
            rc.seed = seed;
            rc.replan_every = cfg.replan_every;
            rc.checkpoints = cfg.checkpoints;
            EmpiricalRunResult res = cfg.strategy == Strategy::alg1
                                         ? run_algorithm1(truth, rc)
                                         : run_algorithm2(truth, cfg.beta, rc);
            if (snapshots_out) *snapshots_out = std::move(res.snapshots);
            rec = std::move(res.record);
            break;
        }
        case Strategy::alternating: {
            const CandidateFamily family = resolve_family(cfg, truth);
            AlternatingConfig ac;
            ac.schedule = cfg.schedule;
            ac.cycles = cfg.cycles;
            ac.epsilon = cfg.epsilon;
            ac.seed = seed;
            ac.absorb_exploit_data = cfg.absorb_exploit_data;
            const auto d_state =
                FiniteSpace::equispaced_circle(truth.quantizer_state.size()).metric;
            rec = run_alternating(truth, family, resolve_prior(cfg, family.size()), d_state, ac);
            break;
        }
        case Strategy::simultaneous: {
            const CandidateFamily family = resolve_family(cfg, truth);
            SimultaneousConfig sc;
            sc.horizon = cfg.horizon;
            sc.seed = seed;
            rec = run_simultaneous(truth, family, resolve_prior(cfg, family.size()), sc);
            break;
        }
    }
    rec.j_star_ref = j_star_ref;
    rec.gap = trailing_average_cost(rec, std::min<std::size_t>(rec.steps.size(), 10000)) -
              j_star_ref;
    return rec;
}

void write_run_csv(const RunRecord& rec, const std::filesystem::path& path) {
    std::ofstream out = open_out(path);
    out << "t,state,action,cost,avg_cost,explore_flag,est_err_tv,map_index,phase\n";
    for (const StepRow& s : rec.steps) {
        out << s.t << ',' << s.state << ',' << s.action << ',' << fmt(s.cost) << ','
            << fmt(s.avg_cost) << ',' << unsigned(s.explore_flag) << ',' << fmt(s.est_err_tv)
            << ',' << s.map_index << ',' << s.phase << '\n';
    }
}

void write_kernel_json(const FiniteKernel& k, const std::filesystem::path& path) {
    json j;
    j["n_states"] = k.n_states();
    j["n_actions"] = k.n_actions();
    json rows = json::array();
    for (std::size_t x = 0; x < k.n_states(); ++x)
        for (std::size_t u = 0; u < k.n_actions(); ++u) rows.push_back(k.row(x, u));
    j["rows"] = std::move(rows);
    std::ofstream out = open_out(path);
    out << j.dump(2) << '\n';
}

bool ExperimentSummary::all_pass() const {
    for (const RunSummary& r : runs)
        if (!r.pass) return false;
    return true;
}

ExperimentSummary run_experiment(const ExperimentConfig& cfg, std::uint64_t seed_offset,
                                 unsigned n_threads) {
    namespace fs = std::filesystem;
    fs::create_directories(cfg.output_dir);

    const QuantizedMDP truth = resolve_truth(cfg);
    const PlannerSolution ref = relative_value_iteration(truth.kernel, truth.cost, 1e-9, 500000);

    ExperimentSummary summary;
    summary.j_star_ref = ref.j_star;
    summary.runs.resize(cfg.seeds.size());

    std::vector<std::optional<RunRecord>> slots(cfg.seeds.size());
    const auto run_one = [&](std::size_t i) {
        const std::uint64_t seed = cfg.seeds[i] + seed_offset;
        RunSummary rs;
        rs.seed = seed;
        try {
            std::vector<std::pair<std::size_t, FiniteKernel>> snapshots;
            RunRecord rec = run_strategy(cfg, truth, ref.j_star, seed, &snapshots);
            const std::string stem =
                strategy_name(cfg.strategy) + "_seed" + std::to_string(seed);
            write_run_csv(rec, fs::path(cfg.output_dir) / (stem + ".csv"));
            for (const auto& [step, kernel] : snapshots)
                write_kernel_json(kernel, fs::path(cfg.output_dir) /
                                              (stem + "_estimate_t" + std::to_string(step) +
                                               ".json"));
            rs.stabilization_step = rec.stabilization_step;
            if (cfg.strategy == Strategy::alg1) {
                // identification strategy: judged on estimation error, not cost
                rs.final_gap = rec.steps.empty() ? 0.0 : rec.steps.back().est_err_tv;
                rs.pass = rs.final_gap <= cfg.est_err_tolerance;
            } else {
                rs.final_gap = rec.gap;
                rs.pass = rec.gap <= cfg.gap_tolerance * truth.c_max;
            }
            slots[i] = std::move(rec);
        } catch (const std::exception& e) {
            rs.error = e.what();
            rs.pass = false;
        }
        summary.runs[i] = std::move(rs);
    };

    if (n_threads <= 1 || cfg.seeds.size() <= 1) {
        for (std::size_t i = 0; i < cfg.seeds.size(); ++i) run_one(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> workers;
        const unsigned count = std::min<std::size_t>(n_threads, cfg.seeds.size());
        for (unsigned w = 0; w < count; ++w)
            workers.emplace_back([&] {
                for (std::size_t i = next.fetch_add(1); i < cfg.seeds.size();
                     i = next.fetch_add(1))
                    run_one(i);
            });
        for (std::thread& t : workers) t.join();
    }

    std::vector<RunRecord> records;
    for (auto& slot : slots)
        if (slot) records.push_back(std::move(*slot));

    {
        std::ofstream out = open_out(fs::path(cfg.output_dir) / "summary.csv");
        out << "seed,final_gap,stabilization_step,pass\n";
        for (const RunSummary& r : summary.runs)
            out << r.seed << ',' << fmt(r.final_gap) << ',' << r.stabilization_step << ','
                << (r.pass ? 1 : 0) << '\n';
    }

    if (!records.empty()) {
        emit_plot_data(records, PlotKind::cost_trace,
                       fs::path(cfg.output_dir) / "plot_cost_trace.csv");
        if (cfg.strategy == Strategy::alg1 || cfg.strategy == Strategy::alg2)
            emit_plot_data(records, PlotKind::est_err,
                           fs::path(cfg.output_dir) / "plot_est_err.csv");
        else
            emit_plot_data(records, PlotKind::posterior_mass,
                           fs::path(cfg.output_dir) / "plot_posterior_mass.csv");
    }
    return summary;
}

void emit_plot_data(const std::vector<RunRecord>& records, PlotKind kind,
                    const std::filesystem::path& path, std::size_t max_points) {
    if (records.empty()) throw std::invalid_argument("emit_plot_data: no records");
    const auto value_at = [&](const RunRecord& r, std::size_t t) -> double {
        switch (kind) {
            case PlotKind::cost_trace: return r.steps[t].avg_cost;
            case PlotKind::est_err: return r.steps[t].est_err_tv;
            case PlotKind::posterior_mass: return r.posterior_mass_trace[t];
        }
        return 0.0;
    };
    std::size_t horizon = records.front().steps.size();
    for (const RunRecord& r : records) {
        const std::size_t len = kind == PlotKind::posterior_mass
                                    ? r.posterior_mass_trace.size()
                                    : r.steps.size();
        horizon = std::min(horizon, len);
    }
    if (horizon == 0) throw std::invalid_argument("emit_plot_data: empty records");
    const std::size_t stride = std::max<std::size_t>(1, horizon / std::max<std::size_t>(1, max_points));

    std::ofstream out = open_out(path);
    const char* what = kind == PlotKind::cost_trace ? "running average cost"
                       : kind == PlotKind::est_err  ? "max-row TV estimation error"
                                                    : "max posterior bin mass";
    out << "# " << what << " across " << records.size() << " seeds\n";
    out << "# columns: t, mean, min, max\n";
    out << "t,mean,min,max\n";
    for (std::size_t t = 0; t < horizon; t += stride) {
        double lo = value_at(records.front(), t), hi = lo, sum = 0.0;
        for (const RunRecord& r : records) {
            const double v = value_at(r, t);
            lo = std::min(lo, v);
            hi = std::max(hi, v);
            sum += v;
        }
        out << t << ',' << fmt(sum / double(records.size())) << ',' << fmt(lo) << ','
            << fmt(hi) << '\n';
    }
}

void emit_quantization_trend(const ContinuousModel& model, const CostFunction& cost,
                             const std::vector<std::size_t>& ns, std::size_t n_ref,
                             const std::filesystem::path& path) {
    const auto solve_at = [&](std::size_t n) {
        const Quantizer q(n);
        const QuantizedMDP mdp = build_quantized_kernel(model, cost, q, q);
        return relative_value_iteration(mdp.kernel, mdp.cost, 1e-9, 500000).j_star;
    };
    const double j_ref = solve_at(n_ref);
    std::ofstream out = open_out(path);
    out << "# optimal average cost of the n-point quantized model vs the reference at n = "
        << n_ref << '\n';
    out << "# columns: n, j_star_n, abs_gap_to_reference\n";
    out << "n,j_star,abs_gap\n";
    for (std::size_t n : ns) {
        const double j_n = solve_at(n);
        out << n << ',' << fmt(j_n) << ',' << fmt(std::fabs(j_n - j_ref)) << '\n';
    }
}

}  // namespace borel_adapt
