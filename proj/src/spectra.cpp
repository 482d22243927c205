#include "ramsim/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <memory>
#include <numbers>

#include <fftw3.h>
#include <fmt/format.h>

#include "ramsim/errors.hpp"

namespace ramsim {

namespace {

bool seven_smooth(std::size_t n) {
  if (n == 0) return false;
  for (std::size_t p : {2u, 3u, 5u, 7u})
    while (n % p == 0) n /= p;
  return n == 1;
}

struct SpanBins {
  std::size_t lo, hi;  // inclusive
};

SpanBins span_bins(const SpectrumRequest& req, std::size_t length) {
  const double scale = static_cast<double>(length) / req.f_s;
  const double lo = std::max(0.0, std::ceil((req.span_center - 0.5 * req.span_width) * scale - 1e-9));
  const double hi = std::min(static_cast<double>(length / 2), std::floor((req.span_center + 0.5 * req.span_width) * scale + 1e-9));
  if (hi < lo) throw InvalidArgument("estimate_psd: span contains no frequency bins");
  return {static_cast<std::size_t>(lo), static_cast<std::size_t>(hi)};
}

double bin_scale(std::size_t k, std::size_t length, double coherent_sum) {
  const bool edge = k == 0 || (length % 2 == 0 && k == length / 2);
  return (edge ? 1.0 : 2.0) / (coherent_sum * coherent_sum);
}

struct Layout {
  std::size_t length;
  std::size_t hop;
  int segments;
  SpanBins bins;
  std::vector<double> window;
  double coherent_sum;
};

Layout plan_layout(std::size_t samples, const SpectrumRequest& req) {
  if (!(req.f_s > 0.0) || !(req.rbw_hz > 0.0) || !(req.span_width > 0.0) || !(req.reference_amplitude > 0.0))
    throw InvalidArgument("estimate_psd: f_s, rbw, span width and reference must be > 0");
  Layout l;
  l.length = choose_segment_length(req);
  l.hop = l.length / 2;
  const std::size_t needed = l.length + (kMinSegments - 1) * l.hop;
  if (samples < needed)
    throw InvalidArgument(fmt::format("estimate_psd: {} samples is too short for RBW {} Hz; need at least {} samples, "
                                      "a minimum duration of {:.6g} s at {} S/s",
                                      samples, req.rbw_hz, needed, minimum_duration(req), req.f_s));
  l.segments = static_cast<int>(std::min<std::size_t>(kMaxSegments, (samples - l.length) / l.hop + 1));
  l.bins = span_bins(req, l.length);
  l.window = window_samples(req.window, l.length);
  l.coherent_sum = 0.0;
  for (double w : l.window) l.coherent_sum += w;
  return l;
}

Spectrum finish(const Layout& l, const SpectrumRequest& req, std::vector<double> summed) {
  Spectrum s;
  s.segment_length = l.length;
  s.segments = l.segments;
  s.enbw_bins = enbw_bins(l.window);
  s.rbw_hz = s.enbw_bins * req.f_s / static_cast<double>(l.length);
  s.window = to_string(req.window);
  s.reference_amplitude = req.reference_amplitude;
  const double ref_power = 0.5 * req.reference_amplitude * req.reference_amplitude;
  for (std::size_t k = l.bins.lo; k <= l.bins.hi; ++k) {
    const double p = summed[k - l.bins.lo] / l.segments;
    s.freqs.push_back(static_cast<double>(k) * req.f_s / static_cast<double>(l.length));
    s.power.push_back(p);
    s.dbc.push_back(10.0 * std::log10(std::max(p, 1e-300) / ref_power));
  }
  return s;
}

// Sums per-segment spectra in segment order so every execution mode agrees bit for bit.
std::vector<double> reduce(const std::vector<std::vector<double>>& per_segment) {
  std::vector<double> total(per_segment.front().size(), 0.0);
  for (const auto& seg : per_segment)
    for (std::size_t i = 0; i < seg.size(); ++i) total[i] += seg[i];
  return total;
}

struct FftwDeleter {
  void operator()(double* p) const { fftw_free(p); }
  void operator()(fftw_complex* p) const { fftw_free(p); }
};

}  // namespace

std::string to_string(Window w) {
  switch (w) {
    case Window::BlackmanHarris4: return "blackman-harris-4";
    case Window::Hann: return "hann";
    case Window::Rectangular: return "rectangular";
  }
  return "unknown";
}

Window window_from_string(const std::string& name) {
  if (name == "blackman-harris-4") return Window::BlackmanHarris4;
  if (name == "hann") return Window::Hann;
  if (name == "rectangular") return Window::Rectangular;
  throw InvalidArgument(fmt::format("unknown window '{}'", name));
}

std::vector<double> window_samples(Window w, std::size_t length) {
  std::vector<double> v(length, 1.0);
  const double n = static_cast<double>(length);
  for (std::size_t j = 0; j < length; ++j) {
    const double x = 2.0 * std::numbers::pi * static_cast<double>(j) / n;  // periodic form
    switch (w) {
      case Window::BlackmanHarris4:
        v[j] = 0.35875 - 0.48829 * std::cos(x) + 0.14128 * std::cos(2 * x) - 0.01168 * std::cos(3 * x);
        break;
      case Window::Hann: v[j] = 0.5 - 0.5 * std::cos(x); break;
      case Window::Rectangular: break;
    }
  }
  return v;
}

double enbw_bins(std::span<const double> window) {
  double s1 = 0.0, s2 = 0.0;
  for (double w : window) {
    s1 += w;
    s2 += w * w;
  }
  return static_cast<double>(window.size()) * s2 / (s1 * s1);
}

std::size_t choose_segment_length(const SpectrumRequest& req) {
  const double enbw = enbw_bins(window_samples(req.window, 1 << 14));
  const double target = enbw * req.f_s / req.rbw_hz;
  if (target < 16.0) throw InvalidArgument("estimate_psd: RBW too wide for the sample rate");

  const auto score = [&](std::size_t len) { return std::abs(static_cast<double>(len) / target - 1.0); };
  std::size_t best = 0;

  if (req.span_center > 0.0) {
    const double bins_per_sample = req.span_center / req.f_s;
    const auto k_lo = static_cast<long long>(std::floor(0.85 * target * bins_per_sample));
    const auto k_hi = static_cast<long long>(std::ceil(1.15 * target * bins_per_sample));
    for (long long k = std::max(1LL, k_lo); k <= k_hi; ++k) {
      const double exact = static_cast<double>(k) / bins_per_sample;
      const double len = std::round(exact);
      if (std::abs(len - exact) > 1e-9 * exact) continue;
      const auto cand = static_cast<std::size_t>(len);
      if (!seven_smooth(cand)) continue;
      if (best == 0 || score(cand) < score(best)) best = cand;
    }
  }
  if (best == 0) {
    const auto lo = static_cast<std::size_t>(0.85 * target);
    const auto hi = static_cast<std::size_t>(1.15 * target);
    for (std::size_t cand = lo; cand <= hi; ++cand)
      if (seven_smooth(cand) && (best == 0 || score(cand) < score(best))) best = cand;
  }
  if (best == 0) best = static_cast<std::size_t>(std::llround(target));
  return best;
}

double minimum_duration(const SpectrumRequest& req) {
  const std::size_t len = choose_segment_length(req);
  return static_cast<double>(len + (kMinSegments - 1) * (len / 2)) / req.f_s;
}

Spectrum estimate_psd(std::span<const double> samples, const SpectrumRequest& req) {
  const Layout l = plan_layout(samples.size(), req);
  const std::size_t n_out = l.length / 2 + 1;
  const std::size_t width = l.bins.hi - l.bins.lo + 1;

  fftw_plan plan;
  {
    std::unique_ptr<double, FftwDeleter> in(fftw_alloc_real(l.length));
    std::unique_ptr<fftw_complex, FftwDeleter> out(fftw_alloc_complex(n_out));
    plan = fftw_plan_dft_r2c_1d(static_cast<int>(l.length), in.get(), out.get(), FFTW_ESTIMATE);
  }
  if (plan == nullptr) throw Error("estimate_psd: FFTW planning failed");

  std::vector<std::vector<double>> per_segment(static_cast<std::size_t>(l.segments), std::vector<double>(width));
  auto segment = [&](int s) {
    std::unique_ptr<double, FftwDeleter> in(fftw_alloc_real(l.length));
    std::unique_ptr<fftw_complex, FftwDeleter> out(fftw_alloc_complex(n_out));
    const std::size_t start = static_cast<std::size_t>(s) * l.hop;
    for (std::size_t j = 0; j < l.length; ++j) in.get()[j] = samples[start + j] * l.window[j];
    fftw_execute_dft_r2c(plan, in.get(), out.get());
    auto& dst = per_segment[static_cast<std::size_t>(s)];
    for (std::size_t k = l.bins.lo; k <= l.bins.hi; ++k) {
      const double re = out.get()[k][0];
      const double im = out.get()[k][1];
      dst[k - l.bins.lo] = (re * re + im * im) * bin_scale(k, l.length, l.coherent_sum);
    }
  };

  if (req.exec == parallel::Exec::Parallel) {
#pragma omp parallel for schedule(static)
    for (int s = 0; s < l.segments; ++s) segment(s);
  } else {
    for (int s = 0; s < l.segments; ++s) segment(s);
  }
  fftw_destroy_plan(plan);
  return finish(l, req, reduce(per_segment));
}

Spectrum estimate_psd_reference(std::span<const double> samples, const SpectrumRequest& req) {
  const Layout l = plan_layout(samples.size(), req);
  const std::size_t width = l.bins.hi - l.bins.lo + 1;
  std::vector<std::vector<double>> per_segment(static_cast<std::size_t>(l.segments), std::vector<double>(width));
  for (int s = 0; s < l.segments; ++s) {
    const std::size_t start = static_cast<std::size_t>(s) * l.hop;
    for (std::size_t k = l.bins.lo; k <= l.bins.hi; ++k) {
      std::complex<double> acc{0.0};
      for (std::size_t j = 0; j < l.length; ++j) {
        const std::size_t turn = (k * j) % l.length;
        const double angle = -2.0 * std::numbers::pi * static_cast<double>(turn) / static_cast<double>(l.length);
        acc += samples[start + j] * l.window[j] * std::polar(1.0, angle);
      }
      per_segment[static_cast<std::size_t>(s)][k - l.bins.lo] = std::norm(acc) * bin_scale(k, l.length, l.coherent_sum);
    }
  }
  return finish(l, req, reduce(per_segment));
}

std::pair<double, double> Spectrum::peak(double lo, double hi) const {
  std::pair<double, double> best{0.0, -std::numeric_limits<double>::infinity()};
  for (std::size_t i = 0; i < freqs.size(); ++i)
    if (freqs[i] >= lo && freqs[i] <= hi && dbc[i] > best.second) best = {freqs[i], dbc[i]};
  return best;
}

double Spectrum::band_power(double lo, double hi) const {
  double sum = 0.0;
  for (std::size_t i = 0; i < freqs.size(); ++i)
    if (freqs[i] >= lo && freqs[i] <= hi) sum += power[i];
  return sum / enbw_bins;
}

}  // namespace ramsim
