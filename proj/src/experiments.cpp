#include "ramsim/experiments.hpp"

#include <cmath>
#include <fstream>

#include <fmt/format.h>

#include "ramsim/errors.hpp"
#include "ramsim/timeseries.hpp"

namespace ramsim {

namespace {

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(fmt::format("cannot write '{}'", path));
  return out;
}

void write_header(std::ofstream& out, const Scenario& s, const std::string& kind) {
  out << "# kind: " << kind << "\n";
  out << "# scenario: " << s.name << "\n";
  out << "# scenario_hash: " << scenario_hash(s) << "\n";
  out << "# topology: " << to_string(s.topology) << "\n";
  out << "# seed: " << effective_seed(s) << "\n";
}

std::string db(double v) { return std::isnan(v) ? std::string("undefined") : fmt::format("{:.3f}", v); }

}  // namespace

BeamPair propagate(const Scenario& s, const DriveEnvelope& drive) {
  const RfChainResponse rf = s.rf.build(s.modulation);
  const BeamState carrier = make_carrier(s.laser.power, SpatialMode{s.laser.w0, 0.0, 0.0}, s.laser.pol_angle,
                                         s.aom.wavelength);
  BeamState beam = aom_modulate(carrier, s.modulation, s.aom, rf, drive, s.aom_plane);

  if (s.topology == Topology::Fig1) {
    beam = apply_lens_telescope(beam, s.telescope.w0, s.telescope.shift_scale);
    beam = rotate_halfwave(beam, s.plate_angle);
    auto [reflected, transmitted] = split(beam, s.splitter);
    return {std::move(reflected), std::move(transmitted)};
  }

  beam = fiber_project(beam, *s.fiber);
  beam = rotate_halfwave(beam, s.plate_angle);
  auto [reflected, transmitted] = split(beam, s.splitter);
  return {std::move(reflected), apply_lens_telescope(transmitted, s.telescope.w0, s.telescope.shift_scale)};
}

DetectedPair detect(const Scenario& s, const DriveEnvelope& drive, int k_max) {
  const BeamPair beams = propagate(s, drive);
  return {photocurrent_harmonics(beams.correction, s.pd1, k_max), photocurrent_harmonics(beams.useful, s.pd2, k_max)};
}

std::vector<Fig2Point> run_fig2(const Scenario& s) {
  const BeamPair beams = propagate(s, {});
  const std::vector<double> xs = linspace(s.fig2.x_min, s.fig2.x_max, s.fig2.points);
  return fig2_scan(beams.useful, s.pd2.rho, xs);
}

std::uint64_t effective_seed(const Scenario& s) { return s.noise ? s.noise->seed : 1; }

SpectrumRequest spectrum_request(const Scenario& s, double reference_amplitude) {
  SpectrumRequest req;
  req.f_s = s.spectrum.f_s;
  req.rbw_hz = s.spectrum.rbw_hz;
  req.window = s.spectrum.window;
  req.span_center = s.modulation.f_m;
  req.span_width = s.spectrum.span_width;
  req.reference_amplitude = reference_amplitude;
  return req;
}

SpectrumPair before_after_spectra(const Scenario& s, std::optional<double> duration) {
  SpectrumPair out;
  out.report = run_closed_loop(s, s.controller.steps);

  const SpectrumRequest probe = spectrum_request(s, 1.0);
  const std::size_t len = choose_segment_length(probe);
  const double full = static_cast<double>(len + (kMaxSegments - 1) * (len / 2)) / probe.f_s;
  out.duration = duration ? *duration : s.spectrum.duration ? *s.spectrum.duration : full;

  auto measure = [&](const DriveEnvelope& drive) {
    const HarmonicSet h = detect(s, drive).pd2;
    const std::vector<double> samples =
        synthesize_timeseries(h, s.modulation.f_m, s.spectrum.f_s, out.duration, s.noise);
    return estimate_psd(samples, spectrum_request(s, h.dc()));
  };
  out.before = measure({});
  out.after = measure(out.report.final_drive);
  return out;
}

void write_fig2_csv(const std::string& path, const Scenario& s, const std::vector<Fig2Point>& points) {
  auto out = open_output(path);
  write_header(out, s, "occultation_curve");
  out << "# units: X_over_w0 dimensionless (screen edge / beam waist), normalized_ifm = |2 c1| / (rho P0)\n";
  out << "X_over_w0,normalized_ifm\n";
  for (const auto& p : points) out << fmt::format("{:.6f},{:.12e}\n", p.x_over_w0, p.normalized_ifm);
}

void write_rejection_csv(const std::string& path, const Scenario& s, const RejectionReport& r) {
  auto out = open_output(path);
  write_header(out, s, "rejection_trajectory");
  out << "# beam1_rejection_db: " << db(r.beam1_rejection_db) << "\n";
  out << "# beam2_rejection_db: " << db(r.beam2_rejection_db) << "\n";
  out << "# residual_relative_am: " << fmt::format("{:.6e}", r.residual_relative_am) << "\n";
  out << "# converged: " << (r.converged ? "true" : "false") << "\n";
  out << "# units: time_s seconds, beam*_c1 amperes (|c1| photocurrent harmonic at f_m)\n";
  out << "step,time_s,beam1_c1,beam2_c1\n";
  for (std::size_t i = 0; i < r.beam1_c1.size(); ++i)
    out << fmt::format("{},{:.6e},{:.12e},{:.12e}\n", i, static_cast<double>(i) * s.controller.dt, r.beam1_c1[i],
                       r.beam2_c1[i]);
}

void write_spectrum_csv(const std::string& path, const Scenario& s, const Spectrum& sp, const std::string& label) {
  auto out = open_output(path);
  write_header(out, s, "spectrum");
  out << "# label: " << label << "\n";
  out << "# rbw_hz: " << fmt::format("{:.6f}", sp.rbw_hz) << "\n";
  out << "# window: " << sp.window << "\n";
  out << "# segments: " << sp.segments << "\n";
  out << "# segment_length: " << sp.segment_length << "\n";
  out << "# f_m_hz: " << fmt::format("{:.6f}", s.modulation.f_m) << "\n";
  out << "# units: freq_hz hertz, dbc dB relative to the DC photocurrent as a full-scale sinusoid\n";
  out << "freq_hz,dbc\n";
  for (std::size_t i = 0; i < sp.freqs.size(); ++i) out << fmt::format("{:.6f},{:.6f}\n", sp.freqs[i], sp.dbc[i]);
}

std::string format_report(const RejectionReport& r) {
  std::string s;
  s += fmt::format("beam1_rejection_db   {}\n", db(r.beam1_rejection_db));
  s += fmt::format("beam2_rejection_db   {}\n", db(r.beam2_rejection_db));
  s += fmt::format("residual_relative_am {:.6e}\n", r.residual_relative_am);
  s += fmt::format("converged            {}\n", r.converged ? "yes" : "no");
  s += fmt::format("settle_time_s        {:.6f}\n", r.settle_time_s);
  s += fmt::format("reference_phase_rad  {:.6f}\n", r.reference_phase);
  s += fmt::format("final_drive          m_i={:.6e} m_q={:.6e}\n", r.final_drive.m_i, r.final_drive.m_q);
  if (r.no_disturbance) s += "note                 initial |c1| at PD1 is zero; rejection undefined\n";
  if (r.actuator_clamped) s += "note                 actuator clamped at |m| = 1\n";
  return s;
}

}  // namespace ramsim
