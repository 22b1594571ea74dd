#pragma once

#include <string>
#include <vector>

#include "pdmsusy/config.hpp"
#include "pdmsusy/io.hpp"

namespace pdmsusy::app {

struct CheckResult {
  std::string check;
  double residual;
  double tolerance;
  bool pass;
  std::string detail;  // error message when the check could not run
};

struct VerifyReport {
  std::vector<CheckResult> checks;

  bool passed() const;
  /// {"checks": [{check, residual, tolerance, pass[, detail]}], "passed": bool}
  json to_json() const;
};

/// Runs the invariant suite for the configuration. A check that throws is
/// recorded as failed with the message in `detail`.
VerifyReport run_verify(const RunConfig& c);

}  // namespace pdmsusy::app
