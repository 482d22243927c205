#pragma once

// Declarative description of one beamline experiment and its text format.
//
// The format is line oriented: `[section]` headers, `key = value` lines and
// `#` comments. Lists are comma separated. Every field has a value in the
// parsed Scenario; to_text() writes all of them, so a serialised scenario
// records every default that was applied.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ramsim/beamline.hpp"
#include "ramsim/detection.hpp"
#include "ramsim/spectra.hpp"
#include "ramsim/timeseries.hpp"

namespace ramsim {

inline constexpr int kFormatVersion = 1;

enum class Topology {
  Fig1,  ///< AOM, lens/telescope, then the splitter; no fibre
  Fig3,  ///< AOM, single-mode fibre, splitter; only the useful beam crosses the telescope
};

struct LaserSpec {
  double power = 1e-3;  ///< [W]
  double w0 = 4e-3;     ///< waist of the beam entering the AOM output plane [m]
  double pol_angle = 0.0;
  bool operator==(const LaserSpec&) const = default;
};

/// RF response, either a polynomial in the comb order or an explicit table.
struct RfSource {
  enum class Kind { Polynomial, Table };
  Kind kind = Kind::Polynomial;
  std::vector<cplx> coefficients{cplx{1.0}};  ///< H = sum_k c_k u^k, u = (f - f_carrier) / f_m
  std::vector<double> table_freqs;
  std::vector<cplx> table_gains;

  RfChainResponse build(const ModulationSpec& mod) const;
  bool operator==(const RfSource&) const = default;
};

struct TelescopeSpec {
  double w0 = 4e-3;
  double shift_scale = 1.0;
  bool operator==(const TelescopeSpec&) const = default;
};

struct ControllerConfig {
  double gain = 50.0;  ///< integrator gain [1/s]
  double dt = 1e-3;    ///< control period [s]
  int steps = 200;
  double probe = 1e-3;  ///< drive depth used to identify the plant
  std::optional<double> reference_phase;  ///< empty: auto-calibrated
  double error_noise = 0.0;  ///< RMS noise on the PD1 error, relative to the PD1 DC level
  bool operator==(const ControllerConfig&) const = default;
};

struct SpectrumConfig {
  double f_s = 20e6;
  double rbw_hz = 30.0;
  double span_width = 10e3;
  Window window = Window::BlackmanHarris4;
  std::optional<double> duration;  ///< empty: long enough for the maximum segment count
  bool operator==(const SpectrumConfig&) const = default;
};

struct Fig2Config {
  double x_min = -1.5;
  double x_max = 1.5;
  int points = 121;
  bool operator==(const Fig2Config&) const = default;
};

struct Scenario {
  int format_version = kFormatVersion;
  std::string name = "unnamed";
  Topology topology = Topology::Fig1;
  ModulationSpec modulation;
  AomSpec aom;
  AomOutputPlane aom_plane = AomOutputPlane::LensFocal;
  LaserSpec laser;
  RfSource rf;
  TelescopeSpec telescope;
  SplitterSpec splitter;
  double plate_angle = 0.0;
  std::optional<FiberSpec> fiber;
  DetectorSpec pd1;
  DetectorSpec pd2;
  ControllerConfig controller;
  std::optional<NoiseSpec> noise;
  SpectrumConfig spectrum;
  Fig2Config fig2;

  /// Throws InvalidArgument on the first violated invariant.
  void validate() const;
  bool operator==(const Scenario&) const = default;
};

/// Parses and validates. Throws ConfigError with the offending line.
Scenario parse_scenario(std::string_view text);
Scenario load_scenario(const std::string& path);

/// Canonical text form; parse_scenario(to_text(s)) == s.
std::string to_text(const Scenario& s);

/// FNV-1a of the canonical text, 16 hex digits.
std::string scenario_hash(const Scenario& s);

std::string to_string(Topology t);

}  // namespace ramsim
