#pragma once

// Narrow-band AM canceller: synchronous I/Q detection of the correction
// beam's photocurrent at f_m, integral control, actuation on the RF drive
// envelope. The loop runs on harmonic amplitudes, one evaluation per step.

#include <array>
#include <functional>
#include <vector>

#include "ramsim/beamline.hpp"

namespace ramsim {

struct Scenario;

struct IqError {
  double e_i = 0.0;
  double e_q = 0.0;
};

struct ControllerState {
  double m_i = 0.0;
  double m_q = 0.0;
  double gain = 50.0;  ///< [1/s]
  double dt = 1e-3;    ///< [s]
  double reference_phase = 0.0;
  /// Row-major 2x2 map from the demodulated error to unit plant gain. Identity
  /// until calibrate() has probed the plant.
  std::array<double, 4> decoupling{1.0, 0.0, 0.0, 1.0};
  bool clamped = false;

  /// Throws InvalidArgument unless 0 < gain*dt < 2.
  void validate() const;
  DriveEnvelope drive() const { return {m_i, m_q}; }
};

/// e_i + i e_q = c1 exp(-i reference_phase).
IqError demodulate_iq(cplx c1, double reference_phase);

/// Integrator update m -= gain dt e, with the drive magnitude clamped to 1
/// (and `clamped` set) when it would overmodulate. NaN errors throw.
ControllerState controller_step(const ControllerState& state, IqError error);

/// First-order model c1(m) ~ offset + d_mi m_i + d_mq m_q around m = 0.
struct PlantModel {
  cplx offset;
  cplx d_mi;
  cplx d_mq;

  cplx predict(const DriveEnvelope& m) const { return offset + d_mi * m.m_i + d_mq * m.m_q; }
};

/// Identifies the plant by central differences of size `probe` on each actuator.
PlantModel probe_plant(const std::function<cplx(const DriveEnvelope&)>& c1_at, double probe);

/// Aligns the reference phase with the m_i response (unless `fixed_phase` is
/// given) and sets the decoupling to the inverse of the demodulated plant.
/// Throws Error when the plant matrix is singular.
ControllerState calibrate(ControllerState state, const PlantModel& plant, const double* fixed_phase = nullptr);

/// Demodulated error mapped through the calibration's decoupling matrix.
IqError calibrated_error(cplx c1, const ControllerState& state);

/// Initial |c1| / c0 at or below this counts as "no disturbance".
inline constexpr double kDisturbanceFloor = 1e-12;

struct RejectionReport {
  double beam1_rejection_db = 0.0;  ///< NaN when the beam had no initial AM
  double beam2_rejection_db = 0.0;
  bool converged = false;
  double settle_time_s = 0.0;
  double residual_relative_am = 0.0;  ///< final 2|c1|/c0 on beam 2
  bool no_disturbance = false;        ///< initial beam-1 |c1| was zero
  bool actuator_clamped = false;
  double reference_phase = 0.0;
  DriveEnvelope final_drive;
  double beam1_initial_c0 = 0.0;
  double beam2_initial_c0 = 0.0;
  std::vector<double> beam1_c1;  ///< |c1| at PD1 before each step, plus the final value
  std::vector<double> beam2_c1;
};

/// Closed loop for `steps` control periods on the scenario's topology.
RejectionReport run_closed_loop(const Scenario& scenario, int steps);

}  // namespace ramsim
