#pragma once

// Optical state of the modulated beam and the element transforms that act on it.
// Everything is a value; every transform is a pure function. SI units throughout.

#include <complex>
#include <optional>
#include <utility>
#include <vector>

namespace ramsim {

using cplx = std::complex<double>;

struct ModulationSpec {
  double f_carrier = 250e6;  ///< AOM frequency shift [Hz]
  double f_m = 2.5e6;        ///< modulation frequency [Hz]
  double beta = 1.0;         ///< FM index
  int n_max = 8;             ///< sideband truncation order

  /// Checks f_m > 0, beta >= 0, n_max >= 1 and the 1e-9 truncation rule.
  void validate() const;
  bool operator==(const ModulationSpec&) const = default;
};

struct AomSpec {
  double v_ac = 4200.0;          ///< acoustic velocity [m/s]
  double wavelength = 532e-9;    ///< optical wavelength [m]
  double f_lens = 1.061;         ///< focal length of the lens after the AOM [m]
  std::optional<double> lateral_shift_override;  ///< measured shift per order [m]

  void validate() const;
  bool operator==(const AomSpec&) const = default;
};

/// Normalised Gaussian amplitude profile, |g|^2 integrates to one over the plane:
/// g(x, y) = sqrt(2 / (pi w0^2)) exp(-((x - center_x)^2 + y^2) / w0^2) exp(i k tilt (x - center_x)).
struct SpatialMode {
  double w0 = 1e-3;
  double center_x = 0.0;
  double tilt = 0.0;

  bool operator==(const SpatialMode&) const = default;
};

struct FourierComponent {
  int order = 0;  ///< optical frequency is f_carrier + order * f_m
  cplx amplitude;  ///< [sqrt(W)]
  SpatialMode mode;
};

struct BeamState {
  std::vector<FourierComponent> components;  ///< ascending, unique orders
  double pol_angle = 0.0;                     ///< linear polarisation angle [rad]
  double wavelength = 532e-9;                 ///< needed to turn tilts into phase gradients

  /// Sum of |amplitude|^2 [W].
  double power() const;
  const FourierComponent* find(int order) const;
};

/// Sampled complex response of the RF chain + AOM across the drive band,
/// linearly interpolated in real and imaginary parts.
class RfChainResponse {
 public:
  RfChainResponse() = default;
  /// Frequencies must be strictly increasing, at least two samples.
  RfChainResponse(std::vector<double> freqs, std::vector<cplx> gains);

  /// Unit response over [lo, hi].
  static RfChainResponse flat(double lo, double hi);
  /// Table sampled at every comb line f_carrier + n f_m, |n| <= n_max, from
  /// H = sum_k coeffs[k] u^k with u = (f - f_carrier) / f_m.
  static RfChainResponse from_polynomial(const std::vector<cplx>& coeffs, const ModulationSpec& mod);

  cplx at(double f) const;
  /// Throws InvalidArgument unless the table spans f_carrier +- n_max f_m.
  void validate_covers(const ModulationSpec& mod) const;

  const std::vector<double>& freqs() const { return freqs_; }
  const std::vector<cplx>& gains() const { return gains_; }
  bool operator==(const RfChainResponse&) const = default;

 private:
  std::vector<double> freqs_;
  std::vector<cplx> gains_;
};

struct FiberSpec {
  double w_fiber = 1e-3;  ///< mode waist at the coupling plane [m]
  double offset_x = 0.0;  ///< lateral misalignment [m]
  double tilt = 0.0;      ///< angular misalignment [rad]

  void validate() const;
  bool operator==(const FiberSpec&) const = default;
};

struct SplitterSpec {
  double r_p = 0.5;
  double r_s = 0.5;

  void validate() const;
  /// Power reflectivity seen by light polarised at pol_angle.
  double reflectivity(double pol_angle) const;
  bool operator==(const SplitterSpec&) const = default;
};

/// AM applied to the RF drive: envelope 1 + m_i cos(w_m t) + m_q sin(w_m t).
struct DriveEnvelope {
  double m_i = 0.0;
  double m_q = 0.0;

  double magnitude() const;
};

/// Plane at which aom_modulate reports the component modes.
enum class AomOutputPlane {
  LensFocal,  ///< after the lens that has the AOM at its focus: centres n A, no tilt
  AomExit,    ///< at the AOM: common centre, tilts n lambda f_m / v_ac
};

/// Deflection angle between successive orders, lambda f_m / v_ac [rad].
double angular_step(const AomSpec& aom, double f_m);

/// Lateral shift between successive orders behind the lens [m]: the override
/// when present, else f_lens lambda f_m / v_ac.
double lateral_shift(const AomSpec& aom, double f_m);

/// Single-component, order-0 beam of the given power.
BeamState make_carrier(double power, const SpatialMode& mode, double pol_angle, double wavelength);

/// FM comb a_n = a_c J_n(beta) H(f_c + n f_m), mixed by the drive envelope into
/// orders n +- 1 with weights (m_i -+ i m_q) / 2. Orders beyond n_max are dropped.
/// Throws OvermodulationError when |m| > 1.
BeamState aom_modulate(const BeamState& carrier, const ModulationSpec& mod, const AomSpec& aom,
                       const RfChainResponse& rf, const DriveEnvelope& drive = {},
                       AomOutputPlane plane = AomOutputPlane::LensFocal);

/// Ideal lossless imaging: tilts zeroed, centres scaled, waists set to new_w0.
BeamState apply_lens_telescope(const BeamState& beam, double new_w0, double shift_scale);

/// Returns (reflected, transmitted).
std::pair<BeamState, BeamState> split(const BeamState& beam, const SplitterSpec& splitter);

/// Half-wave plate: pol_angle -> 2 plate_angle - pol_angle.
BeamState rotate_halfwave(const BeamState& beam, double plate_angle);

/// Amplitude coupling of a Gaussian mode into the fibre mode, tilt and
/// misalignment included. |c| <= 1.
cplx fiber_coupling(const SpatialMode& mode, const FiberSpec& fiber, double wavelength);

/// Every component leaves in the fibre's fundamental mode (centre 0, no tilt).
BeamState fiber_project(const BeamState& beam, const FiberSpec& fiber);

}  // namespace ramsim
