#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "peakheight/cli/run_config.hpp"

namespace peakheight::cli {

/// Process exit codes.
enum ExitCode : int {
  kExitOk = 0,
  kExitFailed = 1,
  kExitInvalidArgs = 2,
  kExitInsufficientPeaks = 3,
  kExitNotMonotone = 4,
};

/// Tabulates F (and h where available) over cfg.grid; writes to cfg.out_path
/// or `out`. Returns kExitNotMonotone if the written F column increases
/// beyond its tolerance.
int cmd_eval(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// Runs the simulation campaign for cfg.family and writes a JSON report.
int cmd_validate(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// Full command line entry point (argv[0] is the program name).
int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err);

/// 17 significant digits, shortest form, no locale.
std::string format_number(double v);

}  // namespace peakheight::cli
