#pragma once

// Optimal single-source divisible-load distribution on homogeneous mesh,
// torus and hypercube interconnects via per-level flow matrices.

#include "dlnoc/error.hpp"
#include "dlnoc/flow_matrix.hpp"
#include "dlnoc/format.hpp"
#include "dlnoc/metrics.hpp"
#include "dlnoc/report.hpp"
#include "dlnoc/scenario_file.hpp"
#include "dlnoc/solver.hpp"
#include "dlnoc/timeline.hpp"
#include "dlnoc/topology.hpp"
