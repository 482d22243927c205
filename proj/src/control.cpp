#include "ramsim/control.hpp"

#include <cmath>
#include <limits>
#include <random>

#include "ramsim/errors.hpp"
#include "ramsim/experiments.hpp"

namespace ramsim {

void ControllerState::validate() const {
  const double g = gain * dt;
  if (!(g > 0.0 && g < 2.0)) throw InvalidArgument("controller: gain * dt must lie in (0, 2)");
}

IqError demodulate_iq(cplx c1, double reference_phase) {
  const cplx e = c1 * std::polar(1.0, -reference_phase);
  return {e.real(), e.imag()};
}

ControllerState controller_step(const ControllerState& state, IqError error) {
  if (std::isnan(error.e_i) || std::isnan(error.e_q)) throw InvalidArgument("controller_step: NaN error");
  ControllerState next = state;
  const double g = state.gain * state.dt;
  next.m_i = state.m_i - g * error.e_i;
  next.m_q = state.m_q - g * error.e_q;
  const double mag = std::hypot(next.m_i, next.m_q);
  if (mag > 1.0) {
    next.m_i /= mag;
    next.m_q /= mag;
    next.clamped = true;
  }
  return next;
}

PlantModel probe_plant(const std::function<cplx(const DriveEnvelope&)>& c1_at, double probe) {
  if (!(probe > 0.0 && probe <= 1.0)) throw InvalidArgument("probe_plant: probe must lie in (0, 1]");
  PlantModel p;
  p.offset = c1_at({});
  p.d_mi = (c1_at({probe, 0.0}) - c1_at({-probe, 0.0})) / (2.0 * probe);
  p.d_mq = (c1_at({0.0, probe}) - c1_at({0.0, -probe})) / (2.0 * probe);
  return p;
}

ControllerState calibrate(ControllerState state, const PlantModel& plant, const double* fixed_phase) {
  state.reference_phase = fixed_phase ? *fixed_phase : std::arg(plant.d_mi);
  const IqError col_i = demodulate_iq(plant.d_mi, state.reference_phase);
  const IqError col_q = demodulate_iq(plant.d_mq, state.reference_phase);
  // Demodulated plant [[a, b], [c, d]] with columns (m_i, m_q).
  const double a = col_i.e_i, b = col_q.e_i, c = col_i.e_q, d = col_q.e_q;
  const double det = a * d - b * c;
  const double scale = std::max({std::abs(a), std::abs(b), std::abs(c), std::abs(d)});
  if (!(std::abs(det) > 1e-12 * scale * scale)) throw Error("calibrate: plant matrix is singular");
  state.decoupling = {d / det, -b / det, -c / det, a / det};
  return state;
}

IqError calibrated_error(cplx c1, const ControllerState& state) {
  const IqError raw = demodulate_iq(c1, state.reference_phase);
  const auto& m = state.decoupling;
  return {m[0] * raw.e_i + m[1] * raw.e_q, m[2] * raw.e_i + m[3] * raw.e_q};
}

RejectionReport run_closed_loop(const Scenario& scenario, int steps) {
  if (steps < 1) throw InvalidArgument("run_closed_loop: steps must be >= 1");
  const auto& cfg = scenario.controller;

  ControllerState state;
  state.gain = cfg.gain;
  state.dt = cfg.dt;
  state.validate();

  auto pd1_c1 = [&](const DriveEnvelope& m) { return detect(scenario, m, 1).pd1.at(1); };
  const double* fixed = cfg.reference_phase ? &*cfg.reference_phase : nullptr;
  state = calibrate(state, probe_plant(pd1_c1, cfg.probe), fixed);

  std::mt19937_64 rng(effective_seed(scenario) ^ 0x9e3779b97f4a7c15ULL);
  std::normal_distribution<double> gauss(0.0, 1.0);

  RejectionReport report;
  report.reference_phase = state.reference_phase;
  report.beam1_c1.reserve(static_cast<std::size_t>(steps) + 1);
  report.beam2_c1.reserve(static_cast<std::size_t>(steps) + 1);

  double beam2_final_c0 = 0.0;
  cplx beam2_final_c1{0.0};
  for (int step = 0; step <= steps; ++step) {
    const DetectedPair h = detect(scenario, state.drive(), 1);
    const cplx c1_pd1 = h.pd1.at(1);
    report.beam1_c1.push_back(std::abs(c1_pd1));
    report.beam2_c1.push_back(std::abs(h.pd2.at(1)));
    if (step == 0) {
      report.beam1_initial_c0 = h.pd1.dc();
      report.beam2_initial_c0 = h.pd2.dc();
    }
    if (step == steps) {
      beam2_final_c0 = h.pd2.dc();
      beam2_final_c1 = h.pd2.at(1);
      break;
    }
    cplx measured = c1_pd1;
    if (cfg.error_noise > 0.0) {
      const double sigma = cfg.error_noise * h.pd1.dc() / std::sqrt(2.0);
      measured += cplx{sigma * gauss(rng), sigma * gauss(rng)};
    }
    state = controller_step(state, calibrated_error(measured, state));
  }

  report.final_drive = state.drive();
  report.actuator_clamped = state.clamped;
  report.residual_relative_am = beam2_final_c0 > 0.0 ? 2.0 * std::abs(beam2_final_c1) / beam2_final_c0 : 0.0;

  const double nan = std::numeric_limits<double>::quiet_NaN();
  const double b1_0 = report.beam1_c1.front();
  const double b2_0 = report.beam2_c1.front();
  report.no_disturbance = !(b1_0 > kDisturbanceFloor * report.beam1_initial_c0);
  report.beam1_rejection_db = report.no_disturbance ? nan : 20.0 * std::log10(b1_0 / report.beam1_c1.back());
  report.beam2_rejection_db = (b2_0 > kDisturbanceFloor * report.beam2_initial_c0)
                                  ? 20.0 * std::log10(b2_0 / report.beam2_c1.back())
                                  : nan;

  // Settled once every later step changes |c1| by less than 1e-3 of its initial value.
  const double threshold = 1e-3 * (report.no_disturbance ? report.beam1_initial_c0 : b1_0);
  std::size_t settled = report.beam1_c1.size() - 1;
  while (settled > 0 && std::abs(report.beam1_c1[settled] - report.beam1_c1[settled - 1]) < threshold) --settled;
  report.settle_time_s = static_cast<double>(settled) * cfg.dt;
  const std::size_t tail = std::max<std::size_t>(1, static_cast<std::size_t>(steps) / 10);
  report.converged = settled + tail <= static_cast<std::size_t>(steps);
  return report;
}

}  // namespace ramsim
