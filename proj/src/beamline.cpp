#include "ramsim/beamline.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "ramsim/bessel.hpp"
#include "ramsim/errors.hpp"

namespace ramsim {

namespace {

bool positive(double v) { return v > 0.0 && std::isfinite(v); }

}  // namespace

void ModulationSpec::validate() const {
  if (!positive(f_m)) throw InvalidArgument("modulation: f_m must be > 0");
  if (!std::isfinite(f_carrier)) throw InvalidArgument("modulation: f_carrier must be finite");
  if (!(beta >= 0.0) || !std::isfinite(beta)) throw InvalidArgument("modulation: beta must be >= 0");
  if (n_max < 1) throw InvalidArgument("modulation: n_max must be >= 1");
  bessel_amplitudes(beta, n_max);  // throws InsufficientOrderError
}

void AomSpec::validate() const {
  if (!positive(v_ac)) throw InvalidArgument("aom: v_ac must be > 0");
  if (!positive(wavelength)) throw InvalidArgument("aom: wavelength must be > 0");
  if (!positive(f_lens)) throw InvalidArgument("aom: f_lens must be > 0");
  if (lateral_shift_override && !positive(*lateral_shift_override))
    throw InvalidArgument("aom: lateral_shift must be > 0");
}

double BeamState::power() const {
  double p = 0.0;
  for (const auto& c : components) p += std::norm(c.amplitude);
  return p;
}

const FourierComponent* BeamState::find(int order) const {
  auto it = std::lower_bound(components.begin(), components.end(), order,
                             [](const FourierComponent& c, int n) { return c.order < n; });
  return (it != components.end() && it->order == order) ? &*it : nullptr;
}

RfChainResponse::RfChainResponse(std::vector<double> freqs, std::vector<cplx> gains)
    : freqs_(std::move(freqs)), gains_(std::move(gains)) {
  if (freqs_.size() != gains_.size()) throw InvalidArgument("rf_response: frequency and gain counts differ");
  if (freqs_.size() < 2) throw InvalidArgument("rf_response: need at least two samples");
  for (std::size_t i = 0; i < freqs_.size(); ++i) {
    if (!std::isfinite(freqs_[i]) || !std::isfinite(gains_[i].real()) || !std::isfinite(gains_[i].imag()))
      throw InvalidArgument("rf_response: non-finite sample");
    if (i > 0 && !(freqs_[i] > freqs_[i - 1]))
      throw InvalidArgument("rf_response: frequencies must be strictly increasing");
  }
}

RfChainResponse RfChainResponse::flat(double lo, double hi) { return {{lo, hi}, {cplx{1.0}, cplx{1.0}}}; }

RfChainResponse RfChainResponse::from_polynomial(const std::vector<cplx>& coeffs, const ModulationSpec& mod) {
  if (coeffs.empty()) throw InvalidArgument("rf_response: empty polynomial");
  std::vector<double> f;
  std::vector<cplx> g;
  for (int n = -mod.n_max; n <= mod.n_max; ++n) {
    const double u = n;
    cplx h{0.0};
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) h = h * u + *it;
    f.push_back(mod.f_carrier + n * mod.f_m);
    g.push_back(h);
  }
  return {std::move(f), std::move(g)};
}

cplx RfChainResponse::at(double f) const {
  if (freqs_.empty()) throw InvalidArgument("rf_response: empty table");
  if (f < freqs_.front() || f > freqs_.back())
    throw InvalidArgument(fmt::format("rf_response: {} Hz outside table [{}, {}]", f, freqs_.front(), freqs_.back()));
  auto it = std::lower_bound(freqs_.begin(), freqs_.end(), f);
  const auto i = static_cast<std::size_t>(it - freqs_.begin());
  if (*it == f) return gains_[i];
  const double t = (f - freqs_[i - 1]) / (freqs_[i] - freqs_[i - 1]);
  return gains_[i - 1] + t * (gains_[i] - gains_[i - 1]);
}

void RfChainResponse::validate_covers(const ModulationSpec& mod) const {
  const double lo = mod.f_carrier - mod.n_max * mod.f_m;
  const double hi = mod.f_carrier + mod.n_max * mod.f_m;
  if (freqs_.empty() || freqs_.front() > lo || freqs_.back() < hi)
    throw InvalidArgument(fmt::format("rf_response: table must span [{}, {}] Hz", lo, hi));
}

void FiberSpec::validate() const {
  if (!positive(w_fiber)) throw InvalidArgument("fiber: w_fiber must be > 0");
  if (!std::isfinite(offset_x) || !std::isfinite(tilt)) throw InvalidArgument("fiber: non-finite misalignment");
}

void SplitterSpec::validate() const {
  for (double r : {r_p, r_s})
    if (!(r >= 0.0 && r <= 1.0)) throw InvalidArgument("splitter: reflectivities must lie in [0, 1]");
}

double SplitterSpec::reflectivity(double pol_angle) const {
  const double c = std::cos(pol_angle);
  const double s = std::sin(pol_angle);
  return r_p * c * c + r_s * s * s;
}

double DriveEnvelope::magnitude() const { return std::hypot(m_i, m_q); }

double angular_step(const AomSpec& aom, double f_m) { return aom.wavelength * f_m / aom.v_ac; }

double lateral_shift(const AomSpec& aom, double f_m) {
  if (aom.lateral_shift_override) return *aom.lateral_shift_override;
  return aom.f_lens * angular_step(aom, f_m);
}

BeamState make_carrier(double power, const SpatialMode& mode, double pol_angle, double wavelength) {
  if (!(power >= 0.0)) throw InvalidArgument("carrier power must be >= 0");
  BeamState b;
  b.components.push_back({0, cplx{std::sqrt(power)}, mode});
  b.pol_angle = pol_angle;
  b.wavelength = wavelength;
  return b;
}

BeamState aom_modulate(const BeamState& carrier, const ModulationSpec& mod, const AomSpec& aom,
                       const RfChainResponse& rf, const DriveEnvelope& drive, AomOutputPlane plane) {
  if (carrier.components.size() != 1 || carrier.components.front().order != 0)
    throw InvalidArgument("aom_modulate: carrier must be a single order-0 component");
  if (drive.magnitude() > 1.0)
    throw OvermodulationError(fmt::format("aom_modulate: drive envelope depth {} exceeds 1", drive.magnitude()));

  const BesselComb comb = bessel_amplitudes(mod.beta, mod.n_max);
  const FourierComponent& in = carrier.components.front();
  const int n_max = mod.n_max;
  const auto width = static_cast<std::size_t>(2 * n_max + 1);

  std::vector<cplx> bare(width);
  for (int n = -n_max; n <= n_max; ++n)
    bare[static_cast<std::size_t>(n + n_max)] = in.amplitude * comb.at(n) * rf.at(mod.f_carrier + n * mod.f_m);

  // Envelope sidebands: e^{+i w t} carries (m_i - i m_q)/2, e^{-i w t} its conjugate.
  const cplx up{0.5 * drive.m_i, -0.5 * drive.m_q};
  const cplx down = std::conj(up);

  const double shift = lateral_shift(aom, mod.f_m);
  const double step = angular_step(aom, mod.f_m);

  BeamState out;
  out.pol_angle = carrier.pol_angle;
  out.wavelength = carrier.wavelength;
  out.components.reserve(width);
  for (std::size_t i = 0; i < width; ++i) {
    cplx a = bare[i];
    if (i > 0) a += up * bare[i - 1];
    if (i + 1 < width) a += down * bare[i + 1];
    const int n = static_cast<int>(i) - n_max;
    SpatialMode m = in.mode;
    if (plane == AomOutputPlane::LensFocal) {
      m.center_x = in.mode.center_x + n * shift;
      m.tilt = 0.0;
    } else {
      m.tilt = in.mode.tilt + n * step;
    }
    out.components.push_back({n, a, m});
  }
  return out;
}

BeamState apply_lens_telescope(const BeamState& beam, double new_w0, double shift_scale) {
  if (!positive(new_w0)) throw InvalidArgument("telescope: new_w0 must be > 0");
  BeamState out = beam;
  for (auto& c : out.components) {
    c.mode.tilt = 0.0;
    c.mode.center_x *= shift_scale;
    c.mode.w0 = new_w0;
  }
  return out;
}

std::pair<BeamState, BeamState> split(const BeamState& beam, const SplitterSpec& splitter) {
  splitter.validate();
  const double r = splitter.reflectivity(beam.pol_angle);
  const double rr = std::sqrt(r);
  const double tt = std::sqrt(1.0 - r);
  BeamState reflected = beam;
  BeamState transmitted = beam;
  for (std::size_t i = 0; i < beam.components.size(); ++i) {
    reflected.components[i].amplitude *= rr;
    transmitted.components[i].amplitude *= tt;
  }
  return {std::move(reflected), std::move(transmitted)};
}

BeamState rotate_halfwave(const BeamState& beam, double plate_angle) {
  BeamState out = beam;
  out.pol_angle = 2.0 * plate_angle - beam.pol_angle;
  return out;
}

cplx fiber_coupling(const SpatialMode& mode, const FiberSpec& fiber, double wavelength) {
  const double wa2 = mode.w0 * mode.w0;
  const double wf2 = fiber.w_fiber * fiber.w_fiber;
  const double sum = wa2 + wf2;
  const double d = mode.center_x - fiber.offset_x;
  const double k = 2.0 * std::numbers::pi / wavelength;
  const double q = k * (mode.tilt - fiber.tilt);

  const double magnitude = (2.0 * mode.w0 * fiber.w_fiber / sum) * std::exp(-d * d / sum) *
                           std::exp(-q * q * wa2 * wf2 / (4.0 * sum));
  if (q == 0.0 && mode.tilt == 0.0 && fiber.tilt == 0.0) return cplx{magnitude};

  const double mu = (mode.center_x * wf2 + fiber.offset_x * wa2) / sum;
  const double phase = q * mu - k * mode.tilt * mode.center_x + k * fiber.tilt * fiber.offset_x;
  return std::polar(magnitude, phase);
}

BeamState fiber_project(const BeamState& beam, const FiberSpec& fiber) {
  fiber.validate();
  const SpatialMode out_mode{fiber.w_fiber, 0.0, 0.0};
  BeamState out = beam;
  for (auto& c : out.components) {
    c.amplitude *= fiber_coupling(c.mode, fiber, beam.wavelength);
    c.mode = out_mode;
  }
  return out;
}

}  // namespace ramsim
