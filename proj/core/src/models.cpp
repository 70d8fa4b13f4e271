#include "borel_adapt/models.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "borel_adapt/metrics.hpp"

namespace borel_adapt {

namespace {

constexpr double kRowTol = 1e-12;

double wrap01(double x) {
    double r = std::fmod(x, 1.0);
    if (r < 0.0) r += 1.0;
    // fmod can return exactly 1.0 after the correction when x is a tiny
    // negative number
    if (r >= 1.0) r = 0.0;
    return r;
}

// length of the overlap between the wrapped arc [start, start+len) and the
// plain interval [lo, hi) in [0,1)
double arc_overlap(double start, double len, double lo, double hi) {
    double total = 0.0;
    // the arc covers floor(len) full turns plus a fractional piece
    double full_turns = std::floor(len);
    total += full_turns * (hi - lo);
    double frac = len - full_turns;
    double s = wrap01(start);
    double e = s + frac;
    auto seg = [&](double a, double b) {
        return std::max(0.0, std::min(b, hi) - std::max(a, lo));
    };
    if (e <= 1.0) {
        total += seg(s, e);
    } else {
        total += seg(s, 1.0);
        total += seg(0.0, e - 1.0);
    }
    return total;
}

}  // namespace

FiniteSpace FiniteSpace::equispaced_circle(std::size_t n) {
    FiniteSpace sp;
    sp.points.resize(n);
    sp.metric.assign(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) sp.points[i] = {(i + 0.5) / n};
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            double d = std::fabs(sp.points[i][0] - sp.points[j][0]);
            sp.metric[i][j] = std::min(d, 1.0 - d);
        }
    return sp;
}

std::vector<std::string> FiniteSpace::validate() const {
    std::vector<std::string> out;
    const std::size_t n = points.size();
    if (metric.size() != n) {
        out.push_back("metric table size does not match point count");
        return out;
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (metric[i].size() != n) {
            out.push_back("metric row " + std::to_string(i) + " has wrong length");
            return out;
        }
        if (std::fabs(metric[i][i]) > kRowTol)
            out.push_back("metric diagonal nonzero at " + std::to_string(i));
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            if (metric[i][j] < 0.0)
                out.push_back("negative distance at (" + std::to_string(i) + "," + std::to_string(j) + ")");
            if (std::fabs(metric[i][j] - metric[j][i]) > kRowTol)
                out.push_back("asymmetric at (" + std::to_string(i) + "," + std::to_string(j) + ")");
        }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k)
                if (metric[i][k] > metric[i][j] + metric[j][k] + 1e-12) {
                    out.push_back("triangle inequality fails at (" + std::to_string(i) + "," +
                                  std::to_string(j) + "," + std::to_string(k) + ")");
                    return out;
                }
    return out;
}

FiniteKernel FiniteKernel::uniform(std::size_t n_states, std::size_t n_actions) {
    FiniteKernel k(n_states, n_actions);
    for (std::size_t x = 0; x < n_states; ++x)
        for (std::size_t u = 0; u < n_actions; ++u)
            std::fill(k.row(x, u).begin(), k.row(x, u).end(), 1.0 / n_states);
    return k;
}

double ContinuousModel::drift(double x, double u) const { return wrap01(a * x + b * u); }

double ContinuousModel::sample(double x, double u, RngStream& rng) const {
    const double base = drift(x, u);
    double w;
    if (rng.bernoulli(p_full)) {
        w = rng.next_double();
    } else {
        w = sigma * rng.next_double();
    }
    return wrap01(base + w);
}

double ContinuousModel::bin_mass(double x, double u, double lo, double hi) const {
    if (!(lo >= 0.0 && hi <= 1.0 && lo <= hi))
        throw std::invalid_argument("bin_mass: interval must satisfy 0 <= lo <= hi <= 1");
    const double base = drift(x, u);
    double mass = p_full * (hi - lo);
    if (p_full < 1.0) mass += (1.0 - p_full) * arc_overlap(base, sigma, lo, hi) / sigma;
    return mass;
}

CostFunction CostFunction::from_table(std::vector<std::vector<double>> table, double c_max) {
    CostFunction c;
    c.table_ = std::move(table);
    c.c_max_ = c_max;
    return c;
}

CostFunction CostFunction::quadratic(double x_target, double u_weight, double u_target) {
    CostFunction c;
    c.fn_ = [=](double x, double u) {
        double dx = x - x_target, du = u - u_target;
        return dx * dx + u_weight * du * du;
    };
    double m = 0.0;
    for (double x : {0.0, 1.0})
        for (double u : {0.0, 1.0}) m = std::max(m, c.fn_(x, u));
    c.c_max_ = m;
    return c;
}

CostFunction CostFunction::constant(double value) {
    CostFunction c;
    c.fn_ = [=](double, double) { return value; };
    c.c_max_ = value;
    return c;
}

std::vector<std::vector<double>> CostFunction::tabulate(
    const std::vector<double>& state_centers, const std::vector<double>& action_centers) const {
    if (is_table()) return table_;
    std::vector<std::vector<double>> t(state_centers.size(),
                                       std::vector<double>(action_centers.size()));
    for (std::size_t i = 0; i < state_centers.size(); ++i)
        for (std::size_t j = 0; j < action_centers.size(); ++j)
            t[i][j] = fn_(state_centers[i], action_centers[j]);
    return t;
}

std::vector<std::string> CandidateFamily::validate() const {
    std::vector<std::string> out;
    if (members.empty()) {
        out.push_back("family is empty");
        return out;
    }
    const auto ns = members.front().n_states();
    const auto na = members.front().n_actions();
    for (std::size_t i = 1; i < members.size(); ++i)
        if (members[i].n_states() != ns || members[i].n_actions() != na)
            out.push_back("member " + std::to_string(i) + " has mismatched shape");
    if (!labels.empty()) {
        auto sorted = labels;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
            out.push_back("duplicate labels");
        if (labels.size() != members.size()) out.push_back("label count mismatch");
    }
    if (true_index && *true_index >= members.size()) out.push_back("true_index out of range");
    return out;
}

std::vector<std::string> validate_kernel(const FiniteKernel& k) {
    std::vector<std::string> out;
    for (std::size_t x = 0; x < k.n_states(); ++x)
        for (std::size_t u = 0; u < k.n_actions(); ++u) {
            const auto& r = k.row(x, u);
            double sum = 0.0;
            bool neg = false;
            for (double p : r) {
                sum += p;
                if (p < 0.0) neg = true;
            }
            std::ostringstream loc;
            loc << "(state " << x << ", action " << u << ")";
            if (neg) out.push_back("negative entry in row " + loc.str());
            if (std::fabs(sum - 1.0) > kRowTol)
                out.push_back("row " + loc.str() + " sums to " + std::to_string(sum));
        }
    return out;
}

std::size_t sample_transition(const FiniteKernel& k, std::size_t x, std::size_t u,
                              RngStream& rng) {
    if (x >= k.n_states() || u >= k.n_actions())
        throw std::out_of_range("sample_transition: state or action index out of range");
    return rng.categorical(k.row(x, u));
}

double estimate_bl_modulus(const ContinuousModel& m,
                           const std::vector<std::pair<double, double>>& grid, double delta,
                           std::size_t n_bins) {
    if (grid.empty()) throw std::invalid_argument("estimate_bl_modulus: empty grid");
    if (delta <= 0.0) return 0.0;
    const FiniteSpace sp = FiniteSpace::equispaced_circle(n_bins);
    auto row_of = [&](double x, double u) {
        std::vector<double> r(n_bins);
        for (std::size_t k = 0; k < n_bins; ++k)
            r[k] = m.bin_mass(x, u, double(k) / n_bins, double(k + 1) / n_bins);
        return r;
    };
    std::vector<std::vector<double>> rows;
    rows.reserve(grid.size());
    for (auto [x, u] : grid) rows.push_back(row_of(x, u));
    double modulus = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i)
        for (std::size_t j = i + 1; j < grid.size(); ++j) {
            double dx = std::fabs(grid[i].first - grid[j].first);
            dx = std::min(dx, 1.0 - dx);
            const double du = std::fabs(grid[i].second - grid[j].second);
            if (std::max(dx, du) > delta) continue;
            modulus = std::max(modulus, bl_distance(rows[i], rows[j], sp.metric).value);
        }
    return modulus;
}

double estimate_bl_modulus(const FiniteKernel& k, const FiniteSpace& states,
                           const FiniteSpace& actions,
                           const std::vector<std::pair<std::size_t, std::size_t>>& grid,
                           double delta) {
    if (grid.empty()) throw std::invalid_argument("estimate_bl_modulus: empty grid");
    if (delta <= 0.0) return 0.0;
    double modulus = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i)
        for (std::size_t j = i + 1; j < grid.size(); ++j) {
            const double d = std::max(states.metric[grid[i].first][grid[j].first],
                                      actions.metric[grid[i].second][grid[j].second]);
            if (d > delta) continue;
            modulus = std::max(
                modulus, bl_distance(k.row(grid[i].first, grid[i].second),
                                     k.row(grid[j].first, grid[j].second), states.metric)
                             .value);
        }
    return modulus;
}

}  // namespace borel_adapt
