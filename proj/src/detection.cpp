#include "ramsim/detection.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include <fmt/format.h>

#include "ramsim/errors.hpp"
#include "ramsim/quadrature.hpp"

namespace ramsim {

void validate(const Aperture& aperture) {
  if (const auto* s = std::get_if<HalfPlaneScreen>(&aperture)) {
    if (std::isnan(s->edge_x)) throw InvalidArgument("aperture: screen edge is NaN");
  } else if (const auto* r = std::get_if<OffsetRect>(&aperture)) {
    if (!(r->half_width > 0.0) || !(r->half_height > 0.0))
      throw InvalidArgument("aperture: rectangle half-sizes must be > 0");
    if (!std::isfinite(r->center_x) || !std::isfinite(r->center_y) || !std::isfinite(r->half_width) ||
        !std::isfinite(r->half_height))
      throw InvalidArgument("aperture: non-finite rectangle");
  }
}

void DetectorSpec::validate() const {
  ramsim::validate(aperture);
  if (!(rho > 0.0) || !std::isfinite(rho)) throw InvalidArgument("detector: rho must be > 0");
}

cplx HarmonicSet::at(int k) const {
  const int m = std::abs(k);
  if (m > k_max()) return cplx{0.0};
  const cplx v = c_[static_cast<std::size_t>(m)];
  return k < 0 ? std::conj(v) : v;
}

double HarmonicSet::evaluate(double phase) const {
  double i = dc();
  for (int k = 1; k <= k_max(); ++k) i += 2.0 * (c_[static_cast<std::size_t>(k)] * std::polar(1.0, k * phase)).real();
  return i;
}

double HarmonicSet::min_over_period(int phases) const {
  double lo = evaluate(0.0);
  for (int j = 1; j < phases; ++j) lo = std::min(lo, evaluate(2.0 * std::numbers::pi * j / phases));
  return lo;
}

double gaussian_interval_fraction(double lo, double hi, double mean, double w) {
  if (!(hi > lo)) return 0.0;
  const double s = std::numbers::sqrt2 / w;
  const double a = s * (lo - mean);
  const double b = s * (hi - mean);
  if (a >= 0.0) return 0.5 * (std::erfc(a) - std::erfc(b));
  if (b <= 0.0) return 0.5 * (std::erfc(-b) - std::erfc(-a));
  return 1.0 - 0.5 * std::erfc(-a) - 0.5 * std::erfc(b);
}

cplx overlap_analytic(const SpatialMode& a, const SpatialMode& b, const Aperture& aperture) {
  if (a.w0 != b.w0 || a.tilt != 0.0 || b.tilt != 0.0)
    throw InvalidArgument("overlap_analytic: needs equal waists and zero tilt");
  const double w = a.w0;
  const double delta = a.center_x - b.center_x;
  const double mid = 0.5 * (a.center_x + b.center_x);
  const double base = std::exp(-delta * delta / (2.0 * w * w));
  constexpr double inf = std::numeric_limits<double>::infinity();

  double factor = 1.0;
  if (const auto* screen = std::get_if<HalfPlaneScreen>(&aperture)) {
    factor = gaussian_interval_fraction(screen->edge_x, inf, mid, w);
  } else if (const auto* rect = std::get_if<OffsetRect>(&aperture)) {
    factor = gaussian_interval_fraction(rect->center_x - rect->half_width, rect->center_x + rect->half_width, mid, w) *
             gaussian_interval_fraction(rect->center_y - rect->half_height, rect->center_y + rect->half_height, 0.0, w);
  }
  return cplx{base * factor};
}

cplx overlap(const SpatialMode& a, const SpatialMode& b, const Aperture& aperture, double wavelength) {
  for (double v : {a.w0, b.w0, a.center_x, b.center_x, a.tilt, b.tilt})
    if (!std::isfinite(v)) throw InvalidArgument("overlap: non-finite mode parameter");
  validate(aperture);
  if (a.w0 == b.w0 && a.tilt == 0.0 && b.tilt == 0.0) return overlap_analytic(a, b, aperture);
  QuadratureOptions opts;
  opts.wavelength = wavelength;
  return overlap_quadrature_oracle(a, b, aperture, opts);
}

HarmonicSet photocurrent_harmonics(const BeamState& beam, const DetectorSpec& det, int k_max) {
  det.validate();
  if (k_max < 0) throw InvalidArgument("photocurrent_harmonics: k_max must be >= 0");
  const int count = static_cast<int>(beam.components.size());
  const int reach = std::max(count - 1, 0);
  const int k_used = std::min(k_max, reach);
  const bool clipped = k_max > reach;

  std::vector<cplx> c(static_cast<std::size_t>(k_used) + 1, cplx{0.0});
  for (int k = 0; k <= k_used; ++k) {
    cplx sum{0.0};
    for (const auto& lower : beam.components) {
      const FourierComponent* upper = beam.find(lower.order + k);
      if (upper == nullptr) continue;
      sum += upper->amplitude * std::conj(lower.amplitude) *
             overlap(upper->mode, lower.mode, det.aperture, beam.wavelength);
    }
    c[static_cast<std::size_t>(k)] = det.rho * sum;
  }
  c[0] = cplx{c[0].real()};  // the imaginary part is round-off only
  return HarmonicSet(std::move(c), clipped);
}

std::vector<Fig2Point> fig2_scan(const BeamState& beam, double rho, std::span<const double> x_over_w0) {
  std::set<double> centers;
  for (const auto& c : beam.components) centers.insert(c.mode.center_x);
  if (beam.components.size() < 3 || centers.size() != beam.components.size())
    throw InvalidArgument("fig2_scan: need at least three components with distinct centres");
  const FourierComponent* carrier = beam.find(0);
  if (carrier == nullptr) throw InvalidArgument("fig2_scan: beam has no order-0 component");
  const double w0 = carrier->mode.w0;

  DetectorSpec det{FullPlane{}, rho};
  const double p0 = photocurrent_harmonics(beam, det, 1).dc() / rho;

  std::vector<Fig2Point> out;
  out.reserve(x_over_w0.size());
  for (double x : x_over_w0) {
    det.aperture = HalfPlaneScreen{x * w0};
    const HarmonicSet h = photocurrent_harmonics(beam, det, 1);
    out.push_back({x, std::abs(2.0 * h.at(1)) / (rho * p0)});
  }
  return out;
}

std::vector<double> linspace(double lo, double hi, int points) {
  if (points < 1) throw InvalidArgument("linspace: need at least one point");
  if (points == 1) return {lo};
  std::vector<double> v(static_cast<std::size_t>(points));
  const double step = (hi - lo) / (points - 1);
  for (int i = 0; i < points; ++i) v[static_cast<std::size_t>(i)] = lo + i * step;
  v.back() = hi;
  return v;
}

}  // namespace ramsim
