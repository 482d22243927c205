#include "ramsim/selftest.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include <fmt/format.h>

#include "ramsim/bessel.hpp"
#include "ramsim/control.hpp"
#include "ramsim/detection.hpp"
#include "ramsim/errors.hpp"
#include "ramsim/quadrature.hpp"

namespace ramsim {

bool SelfTestResult::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const SelfTestCheck& c) { return c.passed; });
}

std::string SelfTestResult::summary() const {
  std::string out;
  for (const auto& c : checks) out += fmt::format("{}  {:<28} {}\n", c.passed ? "PASS" : "FAIL", c.name, c.detail);
  const auto failed = std::count_if(checks.begin(), checks.end(), [](const SelfTestCheck& c) { return !c.passed; });
  out += fmt::format("{} checks, {} failed, {:.2f} s\n", checks.size(), failed, seconds);
  return out;
}

namespace {

SelfTestCheck overlap_grid(double perturbation) {
  constexpr double w = 1e-3;
  const double offsets[] = {0.0, 0.3 * w, -0.7 * w, 1.5 * w};
  std::vector<Aperture> apertures = {FullPlane{},
                                     HalfPlaneScreen{-0.4 * w},
                                     HalfPlaneScreen{0.9 * w},
                                     OffsetRect{0.2 * w, -0.1 * w, 0.8 * w, 0.6 * w}};
  double worst = 0.0;
  int cases = 0;
  for (const auto& ap : apertures) {
    for (double xa : offsets) {
      for (double xb : offsets) {
        const SpatialMode a{w, xa, 0.0};
        const SpatialMode b{w, xb, 0.0};
        const cplx closed = overlap_analytic(a, b, ap) * (1.0 + perturbation);
        cplx oracle;
        try {
          oracle = overlap_quadrature_oracle(a, b, ap);
        } catch (const NonConvergenceError& e) {
          return {"overlap analytic vs oracle", false, e.what()};
        }
        const double err = std::abs(closed - oracle) / std::max(std::abs(oracle), 1e-12);
        worst = std::max(worst, err);
        ++cases;
      }
    }
  }
  return {"overlap analytic vs oracle", worst <= 1e-8, fmt::format("{} cases, worst rel err {:.2e}", cases, worst)};
}

SelfTestCheck bessel_identities() {
  double worst = 0.0;
  for (double beta : {0.1, 0.5, 1.0, 2.4048, 5.0, 12.0}) {
    const int n_max = minimum_sideband_order(beta) + 4;
    const BesselComb comb = bessel_amplitudes(beta, n_max);
    worst = std::max(worst, std::abs(comb.power() - 1.0));
    // J_{n-1} + J_{n+1} = (2n / beta) J_n
    for (int n = 1; n < n_max; ++n)
      worst = std::max(worst, std::abs(comb.at(n - 1) + comb.at(n + 1) - 2.0 * n / beta * comb.at(n)));
  }
  return {"bessel identities", worst <= 1e-12, fmt::format("worst residual {:.2e}", worst)};
}

SelfTestCheck loop_stability() {
  // Linear plant with a rotated, sheared response; the calibrated loop must
  // contract by exactly (1 - g dt) per step.
  const PlantModel plant{{0.3, -0.2}, {0.4, 0.9}, {-1.1, 0.25}};
  ControllerState state;
  state.gain = 50.0;
  state.dt = 1e-3;
  state = calibrate(state, probe_plant([&](const DriveEnvelope& m) { return plant.predict(m); }, 1e-3));
  const double start = std::abs(plant.offset);
  constexpr int steps = 100;
  for (int i = 0; i < steps; ++i) state = controller_step(state, calibrated_error(plant.predict(state.drive()), state));
  const double ratio = std::abs(plant.predict(state.drive())) / start;
  const double expected = std::pow(1.0 - state.gain * state.dt, steps);
  const double err = std::abs(ratio / expected - 1.0);
  return {"loop stability", err <= 1e-6, fmt::format("decay {:.4e}, expected {:.4e}", ratio, expected)};
}

}  // namespace

SelfTestResult run_selftest(const SelfTestOptions& options) {
  const auto t0 = std::chrono::steady_clock::now();
  SelfTestResult r;
  r.checks.push_back(overlap_grid(options.analytic_perturbation));
  r.checks.push_back(bessel_identities());
  r.checks.push_back(loop_stability());
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

}  // namespace ramsim
