#pragma once

#include <string>
#include <vector>

namespace ramsim {

struct SelfTestOptions {
  /// Relative error injected into every closed-form overlap before it is
  /// compared with the quadrature oracle. Zero for a normal run; nonzero
  /// values exist so the check itself can be shown to fail.
  double analytic_perturbation = 0.0;
};

struct SelfTestCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct SelfTestResult {
  std::vector<SelfTestCheck> checks;
  double seconds = 0.0;

  bool passed() const;
  std::string summary() const;
};

SelfTestResult run_selftest(const SelfTestOptions& options = {});

}  // namespace ramsim
