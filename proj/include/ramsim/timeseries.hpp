#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "ramsim/detection.hpp"
#include "ramsim/parallel.hpp"

namespace ramsim {

/// Low-frequency technical noise: white Gaussian through a one-pole low-pass,
/// scaled to `rin_level` RMS, multiplying the total intensity.
struct NoiseSpec {
  std::uint64_t seed = 1;
  double rin_level = 0.0;
  double corner_hz = 1e3;

  void validate() const;
  bool operator==(const NoiseSpec&) const = default;
};

/// Deterministic intensity tone of relative depth `depth` at f_m + offset_hz.
struct AmTone {
  double depth = 0.0;
  double offset_hz = 0.0;
};

inline constexpr std::size_t kMaxSamples = std::size_t{1} << 26;

/// Number of samples for duration * f_s; throws InvalidArgument beyond kMaxSamples.
std::size_t sample_count(double f_s, double duration);

/// Stationary one-pole filtered Gaussian noise with RMS rin_level. Deterministic for a seed.
std::vector<double> one_pole_noise(const NoiseSpec& noise, double f_s, std::size_t count);

/// i(t_j) = [sum_k c_k e^{i k w_m t_j}] (1 + nu(t_j) + depth cos(2 pi (f_m + offset) t_j)).
/// Requires f_s >= 8 f_m.
std::vector<double> synthesize_timeseries(const HarmonicSet& harmonics, double f_m, double f_s, double duration,
                                          const std::optional<NoiseSpec>& noise = std::nullopt,
                                          const std::optional<AmTone>& tone = std::nullopt,
                                          parallel::Exec exec = parallel::Exec::Parallel);

}  // namespace ramsim
