#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace peakheight::cli {

struct SelftestCheck {
  std::string name;
  /// Returns an empty string on success, otherwise a short failure reason.
  std::function<std::string(bool tamper)> run;
};

/// Closed-form and cross-family checks, each well under a minute.
std::vector<SelftestCheck> selftest_checks();

/// Prints one PASS/FAIL line per check. `tamper` perturbs one reference
/// constant so the failure path can be exercised. Returns the exit code.
int cmd_selftest(std::ostream& out, bool tamper = false);

}  // namespace peakheight::cli
