#pragma once

#include <vector>

namespace borel_adapt {

/// Dense primal simplex for small LPs of the form
///   max c.x   s.t.  A x <= b,  x >= 0,  b >= 0,
/// so the slack basis is feasible at the origin. Dantzig pricing with a
/// Bland fallback after an iteration budget. Throws std::runtime_error on
/// unboundedness or failure to converge.
struct SimplexResult {
    double objective = 0.0;
    std::vector<double> x;
};

SimplexResult simplex_maximize(const std::vector<double>& c,
                               const std::vector<std::vector<double>>& a,
                               const std::vector<double>& b);

}  // namespace borel_adapt
