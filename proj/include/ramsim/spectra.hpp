#pragma once

#include <span>
#include <string>
#include <vector>

#include "ramsim/parallel.hpp"

namespace ramsim {

enum class Window { BlackmanHarris4, Hann, Rectangular };

std::string to_string(Window w);
/// Accepts "blackman-harris-4", "hann", "rectangular"; throws InvalidArgument otherwise.
Window window_from_string(const std::string& name);
std::vector<double> window_samples(Window w, std::size_t length);
/// Equivalent noise bandwidth in bins, L sum w^2 / (sum w)^2.
double enbw_bins(std::span<const double> window);

inline constexpr int kMinSegments = 4;
inline constexpr int kMaxSegments = 16;

struct SpectrumRequest {
  double f_s = 20e6;
  double rbw_hz = 30.0;
  Window window = Window::BlackmanHarris4;
  double span_center = 2.5e6;
  double span_width = 10e3;
  /// Level of the carrier the dBc scale refers to: a sinusoid of this
  /// amplitude reads 0 dBc.
  double reference_amplitude = 1.0;
  parallel::Exec exec = parallel::Exec::Parallel;
};

struct Spectrum {
  std::vector<double> freqs;  ///< [Hz], strictly increasing
  std::vector<double> power;  ///< per bin, scaled so a sinusoid of amplitude a peaks at a^2 / 2
  std::vector<double> dbc;    ///< 10 log10(power / (reference^2 / 2))
  double rbw_hz = 0.0;        ///< effective, enbw_bins * f_s / segment_length
  double enbw_bins = 0.0;
  std::size_t segment_length = 0;
  int segments = 0;
  std::string window;
  double reference_amplitude = 1.0;

  /// Highest bin in [lo, hi] as (frequency, dBc).
  std::pair<double, double> peak(double lo, double hi) const;
  /// Mean-square signal content of [lo, hi], i.e. the bin sum divided by the ENBW.
  double band_power(double lo, double hi) const;
};

/// Segment length whose ENBW matches rbw, nudged so span_center sits on a bin
/// and the FFT length has only factors 2, 3, 5, 7.
std::size_t choose_segment_length(const SpectrumRequest& req);

/// Shortest record that yields kMinSegments half-overlapping segments.
double minimum_duration(const SpectrumRequest& req);

/// Welch-averaged periodogram, 50% overlap, at most kMaxSegments segments.
/// Throws InvalidArgument naming the minimum duration when too few samples are given.
Spectrum estimate_psd(std::span<const double> samples, const SpectrumRequest& req);

/// Same estimator with a direct DFT over the span bins only. Slow; the
/// reference the FFT path is tested against.
Spectrum estimate_psd_reference(std::span<const double> samples, const SpectrumRequest& req);

}  // namespace ramsim
