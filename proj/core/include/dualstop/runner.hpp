#pragma once

#include <ostream>

#include "dualstop/report.hpp"
#include "dualstop/run_config.hpp"

namespace dualstop {

inline constexpr int kExitOk = 0;
inline constexpr int kExitNumerical = 1;
inline constexpr int kExitUsage = 2;

// Trains and evaluates every (row, lambda) job of the config in catalog order.
// Invariant violations are reported as warnings; numerical failures throw
// NumericalError.
Report run(const RunConfig& config);

// Runs the config and writes the report to config.output (or out). Returns
// the process exit status; diagnostics go to err.
int run_and_report(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace dualstop
