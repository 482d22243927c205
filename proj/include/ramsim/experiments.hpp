#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ramsim/control.hpp"
#include "ramsim/detection.hpp"
#include "ramsim/scenario.hpp"
#include "ramsim/spectra.hpp"

namespace ramsim {

struct BeamPair {
  BeamState correction;  ///< beam 1, at PD1
  BeamState useful;      ///< beam 2, at PD2
};

/// Carrier through the scenario's optical train with the given AM drive.
BeamPair propagate(const Scenario& scenario, const DriveEnvelope& drive);

struct DetectedPair {
  HarmonicSet pd1;
  HarmonicSet pd2;
};

DetectedPair detect(const Scenario& scenario, const DriveEnvelope& drive, int k_max = kDefaultHarmonics);

/// Occultation curve of the useful beam (zero drive) over the scenario's sweep.
std::vector<Fig2Point> run_fig2(const Scenario& scenario);

struct SpectrumPair {
  Spectrum before;  ///< drive frozen at zero
  Spectrum after;   ///< drive at the loop's final value
  RejectionReport report;
  double duration = 0.0;
};

/// PD2 spectra around f_m without and with correction. `duration` defaults to
/// the scenario's, or to the record length that fills kMaxSegments.
SpectrumPair before_after_spectra(const Scenario& scenario, std::optional<double> duration = std::nullopt);

SpectrumRequest spectrum_request(const Scenario& scenario, double reference_amplitude);

/// Seed used for every random draw of a run.
std::uint64_t effective_seed(const Scenario& scenario);

// Output files. All carry `# key: value` header lines naming units, the
// scenario hash and the seed, and are byte-identical for identical inputs.
void write_fig2_csv(const std::string& path, const Scenario& scenario, const std::vector<Fig2Point>& points);
void write_rejection_csv(const std::string& path, const Scenario& scenario, const RejectionReport& report);
void write_spectrum_csv(const std::string& path, const Scenario& scenario, const Spectrum& spectrum,
                        const std::string& label);
std::string format_report(const RejectionReport& report);

}  // namespace ramsim
