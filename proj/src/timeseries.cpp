#include "ramsim/timeseries.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include <fmt/format.h>

#include "ramsim/errors.hpp"

namespace ramsim {

namespace {

// Phase 2 pi frac(f t_j), reduced before scaling so long records keep precision.
double cycle_phase(double cycles_per_sample, std::size_t j) {
  const double c = cycles_per_sample * static_cast<double>(j);
  return 2.0 * std::numbers::pi * (c - std::floor(c));
}

}  // namespace

void NoiseSpec::validate() const {
  if (!(rin_level >= 0.0) || !std::isfinite(rin_level)) throw InvalidArgument("noise: rin_level must be >= 0");
  if (!(corner_hz > 0.0) || !std::isfinite(corner_hz)) throw InvalidArgument("noise: corner_hz must be > 0");
}

std::size_t sample_count(double f_s, double duration) {
  if (!(f_s > 0.0) || !(duration > 0.0)) throw InvalidArgument("synthesis: f_s and duration must be > 0");
  const double n = std::round(duration * f_s);
  if (n > static_cast<double>(kMaxSamples))
    throw InvalidArgument(fmt::format("synthesis: {} samples exceeds the 2^26 limit", n));
  return static_cast<std::size_t>(n);
}

std::vector<double> one_pole_noise(const NoiseSpec& noise, double f_s, std::size_t count) {
  noise.validate();
  std::vector<double> nu(count, 0.0);
  if (noise.rin_level == 0.0 || count == 0) return nu;

  std::mt19937_64 rng(noise.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const double alpha = std::exp(-2.0 * std::numbers::pi * noise.corner_hz / f_s);
  // Output variance is (1 - alpha) / (1 + alpha) times the drive variance.
  const double drive = noise.rin_level * std::sqrt((1.0 + alpha) / (1.0 - alpha));

  double y = noise.rin_level * gauss(rng);
  for (std::size_t j = 0; j < count; ++j) {
    nu[j] = y;
    y = alpha * y + (1.0 - alpha) * drive * gauss(rng);
  }
  return nu;
}

std::vector<double> synthesize_timeseries(const HarmonicSet& harmonics, double f_m, double f_s, double duration,
                                          const std::optional<NoiseSpec>& noise,
                                          const std::optional<AmTone>& tone, parallel::Exec exec) {
  if (!(f_m > 0.0)) throw InvalidArgument("synthesis: f_m must be > 0");
  if (!(f_s >= 8.0 * f_m)) throw InvalidArgument("synthesis: f_s must be at least 8 f_m");
  const std::size_t count = sample_count(f_s, duration);

  std::vector<double> out = noise ? one_pole_noise(*noise, f_s, count) : std::vector<double>(count, 0.0);

  const double mod_step = f_m / f_s;
  const double tone_step = tone ? (f_m + tone->offset_hz) / f_s : 0.0;
  const double depth = tone ? tone->depth : 0.0;

  auto sample = [&](std::size_t j) {
    double gain = 1.0 + out[j];
    if (depth != 0.0) gain += depth * std::cos(cycle_phase(tone_step, j));
    out[j] = harmonics.evaluate(cycle_phase(mod_step, j)) * gain;
  };

  const auto n = static_cast<std::ptrdiff_t>(count);
  if (exec == parallel::Exec::Parallel) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t j = 0; j < n; ++j) sample(static_cast<std::size_t>(j));
  } else {
    for (std::ptrdiff_t j = 0; j < n; ++j) sample(static_cast<std::size_t>(j));
  }
  return out;
}

}  // namespace ramsim
