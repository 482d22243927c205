#pragma once

#include <limits>
#include <map>
#include <span>
#include <utility>
#include <variant>
#include <vector>

#include "ramsim/beamline.hpp"

namespace ramsim {

struct FullPlane {
  bool operator==(const FullPlane&) const = default;
};

/// Opaque screen covering x < edge_x; light at x >= edge_x reaches the detector.
struct HalfPlaneScreen {
  double edge_x = 0.0;
  bool operator==(const HalfPlaneScreen&) const = default;
};

/// Finite rectangular photodiode area.
struct OffsetRect {
  double center_x = 0.0;
  double center_y = 0.0;
  double half_width = 1e-3;
  double half_height = 1e-3;
  bool operator==(const OffsetRect&) const = default;
};

using Aperture = std::variant<FullPlane, HalfPlaneScreen, OffsetRect>;

void validate(const Aperture& aperture);

struct DetectorSpec {
  Aperture aperture = FullPlane{};
  double rho = 1.0;  ///< responsivity [A/W]

  void validate() const;
  bool operator==(const DetectorSpec&) const = default;
};

/// Photocurrent harmonics i(t) = sum_k c_k exp(i k w_m t); stores k >= 0,
/// negative k follow from c_{-k} = conj(c_k).
class HarmonicSet {
 public:
  HarmonicSet() = default;
  HarmonicSet(std::vector<cplx> nonnegative, bool clipped)
      : c_(std::move(nonnegative)), clipped_(clipped) {}

  int k_max() const { return static_cast<int>(c_.size()) - 1; }
  /// c_k for |k| <= k_max, zero beyond.
  cplx at(int k) const;
  double dc() const { return c_.empty() ? 0.0 : c_[0].real(); }
  /// Set when the requested k_max exceeded what the comb can produce.
  bool clipped() const { return clipped_; }
  const std::vector<cplx>& nonnegative() const { return c_; }

  /// i(t) at modulation phase w_m t.
  double evaluate(double phase) const;
  /// Minimum of i(t) over `phases` equally spaced samples of one period.
  double min_over_period(int phases = 256) const;

 private:
  std::vector<cplx> c_;
  bool clipped_ = false;
};

/// Transmission of a unit-normalised 1D Gaussian intensity exp(-2 (x - mean)^2 / w^2)
/// through [lo, hi]. Uses erfc on whichever side keeps the difference well conditioned.
double gaussian_interval_fraction(double lo, double hi, double mean, double w);

/// Closed-form overlap of two equal-waist, untilted modes. Throws
/// InvalidArgument when that precondition does not hold.
cplx overlap_analytic(const SpatialMode& a, const SpatialMode& b, const Aperture& aperture);

/// Aperture-restricted inner product  integral of g_a conj(g_b). Equal-waist untilted
/// pairs take the closed form; anything else goes to the quadrature oracle
/// (`wavelength` is then required when either mode is tilted).
cplx overlap(const SpatialMode& a, const SpatialMode& b, const Aperture& aperture,
             double wavelength = std::numeric_limits<double>::quiet_NaN());

inline constexpr int kDefaultHarmonics = 4;

/// c_k = rho sum_n a_{n+k} conj(a_n) overlap(mode_{n+k}, mode_n) for 0 <= k <= k_max.
HarmonicSet photocurrent_harmonics(const BeamState& beam, const DetectorSpec& det, int k_max = kDefaultHarmonics);

struct Fig2Point {
  double x_over_w0;
  double normalized_ifm;  ///< |2 c_1(X)| / (rho P0)
};

/// Occultation sweep: a half-plane screen at X = x_over_w0 * w0 in front of a
/// detector of responsivity rho. w0 is taken from the beam's order-0 component.
std::vector<Fig2Point> fig2_scan(const BeamState& beam, double rho, std::span<const double> x_over_w0);

/// Evenly spaced sweep [lo, hi] with `points` entries.
std::vector<double> linspace(double lo, double hi, int points);

}  // namespace ramsim
