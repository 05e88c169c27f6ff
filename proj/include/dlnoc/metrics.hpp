#pragma once

#include <cmath>

#include "dlnoc/error.hpp"
#include "dlnoc/flow_matrix.hpp"
#include "dlnoc/solver.hpp"

namespace dlnoc {

struct Metrics {
    double makespan = 0.0;    ///< alpha_0 * omega * Tcp * load
    double w_eq = 0.0;        ///< equivalent inverse speed, alpha_0 * omega
    double speedup = 0.0;     ///< 1 / alpha_0
    double speedup_det = 0.0; ///< |det A| / |det A*_0|
};

/// `load` scales the makespan linearly; fractions are always of a unit load.
inline Metrics compute_metrics(const LevelAllocation& alloc, const Scenario& scenario, const FlowMatrix& fm,
                               double load = 1.0) {
    if (alloc.fractions.empty()) throw InputError("empty allocation");
    const double a0 = alloc.fractions.front();
    if (!(a0 > 0.0)) throw InputError("metrics undefined: root fraction must be > 0");
    if (!(load > 0.0) || !std::isfinite(load)) throw InputError("load must be finite and > 0");

    Metrics m;
    m.w_eq = a0 * scenario.omega;
    m.makespan = m.w_eq * scenario.tcp * load;
    m.speedup = 1.0 / a0;
    const double det_a0 = replaced_determinant(fm, 0);
    m.speedup_det = det_a0 == 0.0 ? INFINITY : std::abs(determinant(fm)) / std::abs(det_a0);
    return m;
}

} // namespace dlnoc
