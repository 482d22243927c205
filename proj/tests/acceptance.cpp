// Acceptance checks, one line per criterion:
//   CRITERION <n> PASS|FAIL <seconds>s  <detail>
// Run all with no arguments or a single one with --only N. Exit status is
// nonzero when any selected criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include <fmt/format.h>

#include "oracles.hpp"
#include "ramsim/errors.hpp"
#include "ramsim/experiments.hpp"
#include "ramsim/quadrature.hpp"
#include "ramsim/scenario.hpp"
#include "ramsim/timeseries.hpp"

using namespace ramsim;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

Scenario shipped(const std::string& name) { return load_scenario(std::string(RAMSIM_SCENARIO_DIR) + "/" + name); }

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool within_runtime(double seconds, double limit, std::string& detail) {
  if (seconds < limit) return true;
  detail += fmt::format("; runtime {:.1f} s exceeds {:.0f} s", seconds, limit);
  return false;
}

// 1. Closed-form overlaps vs the quadrature oracle on a randomized grid.
Outcome criterion1() {
  std::mt19937_64 rng(20260101);
  std::uniform_real_distribution<double> waist(1e-3, 8e-3), delta(0.0, 2e-3), unit(-1.0, 1.0), pick(0.0, 1.0);
  double worst = 0.0;
  for (int i = 0; i < 200; ++i) {
    const double w = waist(rng);
    const double xa = unit(rng) * 1e-3;
    const double xb = xa + (pick(rng) < 0.5 ? -1.0 : 1.0) * delta(rng);
    const SpatialMode a{w, xa, 0.0}, b{w, xb, 0.0};
    Aperture ap;
    switch (i % 3) {
      case 0: ap = FullPlane{}; break;
      case 1: ap = HalfPlaneScreen{2.0 * unit(rng) * w}; break;
      default:
        ap = OffsetRect{unit(rng) * w, unit(rng) * w, (0.2 + 1.8 * pick(rng)) * w, (0.2 + 1.8 * pick(rng)) * w};
    }
    const cplx closed = overlap_analytic(a, b, ap);
    const cplx numeric = overlap_quadrature_oracle(a, b, ap);
    worst = std::max(worst, std::abs(closed - numeric) / std::abs(numeric));
  }
  return {worst <= 1e-8, fmt::format("200 cases, worst relative error {:.2e} (limit 1e-8)", worst)};
}

// 2. Pure FM through a flat RF chain onto a full detector carries no AM.
Outcome criterion2() {
  Scenario s = shipped("fig2.scenario");
  s.rf.coefficients = {cplx{1.0}};
  const DetectedPair h = detect(s, {});
  const double r1 = std::abs(h.pd1.at(1)) / h.pd1.dc();
  const double r2 = std::abs(h.pd2.at(1)) / h.pd2.dc();
  const double worst = std::max(r1, r2);
  return {worst <= 1e-10, fmt::format("|c1|/c0 = {:.2e} (limit 1e-10)", worst)};
}

// 3. Occultation curve: (i) nulls at the sweep ends, (ii) interior maximum,
// (iii) agreement with the time-synthesis oracle.
Outcome criterion3() {
  const Scenario s = shipped("fig2.scenario");
  const auto pts = run_fig2(s);
  double peak = 0.0;
  std::size_t arg = 0;
  for (std::size_t i = 0; i < pts.size(); ++i)
    if (pts[i].normalized_ifm > peak) peak = pts[i].normalized_ifm, arg = i;
  const double end = std::max(pts.front().normalized_ifm, pts.back().normalized_ifm);
  const bool null_ends = end <= 1e-4 * peak;
  const bool interior = peak > 0.0 && arg > 0 && arg + 1 < pts.size();

  const double w0 = s.telescope.w0;
  const double A = *s.aom.lateral_shift_override * s.telescope.shift_scale;
  double worst = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double ref = oracle::occultation_time_synthesis(s.modulation.beta, w0, A, pts[i].x_over_w0 * w0);
    worst = std::max(worst, std::abs(pts[i].normalized_ifm - ref));
  }
  const bool oracle_ok = worst <= 1e-6;
  return {null_ends && interior && oracle_ok,
          fmt::format("(i) {} end/peak = {:.3e} (limit 1e-4); (ii) {} peak {:.6f} at X/w0 = {:.3f}; "
                      "(iii) {} worst |diff| {:.2e} (limit 1e-6)",
                      null_ends ? "PASS" : "FAIL", end / peak, interior ? "PASS" : "FAIL", peak,
                      pts[arg].x_over_w0, oracle_ok ? "PASS" : "FAIL", worst)};
}

// 4. Fibre set-up: both beams rejected >= 60 dB, equal within 1 dB, and beam 2
// insensitive to the PD2 geometry.
Outcome criterion4() {
  const Scenario base = shipped("fig3_fiber.scenario");
  const double w0 = base.telescope.w0;
  const Aperture geometries[] = {FullPlane{}, OffsetRect{0.5e-3, 0.0, 3e-3, 3e-3}, OffsetRect{-0.5e-3, 0.0, 3e-3, 3e-3},
                                 HalfPlaneScreen{0.0}, HalfPlaneScreen{-w0 / 2}};
  double lo = INFINITY, hi = -INFINITY;
  bool ok = true;
  std::string detail;
  for (const auto& g : geometries) {
    Scenario s = base;
    s.pd2.aperture = g;
    const RejectionReport r = run_closed_loop(s, s.controller.steps);
    ok = ok && r.beam1_rejection_db >= 60.0 && r.beam2_rejection_db >= 60.0 &&
         std::abs(r.beam1_rejection_db - r.beam2_rejection_db) <= 1.0;
    lo = std::min(lo, r.beam2_rejection_db);
    hi = std::max(hi, r.beam2_rejection_db);
    detail += fmt::format("{:.1f}/{:.1f} ", r.beam1_rejection_db, r.beam2_rejection_db);
  }
  ok = ok && hi - lo < 1.0;
  return {ok, fmt::format("beam1/beam2 dB per geometry: {}; beam-2 spread {:.3f} dB (limit 1)", detail, hi - lo)};
}

// 5. No fibre, screen on beam 2 only: beam 1 >= 60 dB, beam 2 lower by >= 15 dB.
Outcome criterion5() {
  const Scenario s = shipped("fig1_noFiber.scenario");
  const RejectionReport r = run_closed_loop(s, s.controller.steps);
  const double gap = r.beam1_rejection_db - r.beam2_rejection_db;
  return {r.beam1_rejection_db >= 60.0 && gap >= 15.0,
          fmt::format("beam1 {:.1f} dB, beam2 {:.1f} dB, gap {:.1f} dB (limits 60, 15)", r.beam1_rejection_db,
                      r.beam2_rejection_db, gap)};
}

// 6. Residual relative AM after convergence on the fibre set-up.
Outcome criterion6() {
  const Scenario s = shipped("fig3_fiber.scenario");
  const RejectionReport r = run_closed_loop(s, s.controller.steps);
  return {r.converged && r.residual_relative_am <= 1e-4,
          fmt::format("converged {}, residual_relative_am {:.3e} (limit 1e-4)", r.converged ? "yes" : "no",
                      r.residual_relative_am)};
}

// 7. Spectrum calibration: 2 % tone level, floor scaling with RBW, Parseval.
Outcome criterion7() {
  const double f_m = 2.5e6;
  SpectrumRequest r30;
  r30.rbw_hz = 30.0;
  r30.span_center = f_m;
  r30.span_width = 4e3;
  SpectrumRequest r300 = r30;
  r300.rbw_hz = 300.0;

  const HarmonicSet tone({cplx{1.0}, cplx{0.01}}, false);  // 2|c1|/c0 = 0.02
  const auto x = synthesize_timeseries(tone, f_m, r30.f_s, minimum_duration(r30));
  const Spectrum s = estimate_psd(x, r30);
  const double level = s.peak(f_m - 100, f_m + 100).second;
  const double expected = 20.0 * std::log10(0.02);
  const bool tone_ok = std::abs(level - expected) <= 0.5;
  const double band = s.band_power(f_m - 200, f_m + 200);
  const double parseval = band / (0.02 * 0.02 / 2.0) - 1.0;  // sinusoid of amplitude 2|c1|
  const bool parseval_ok = std::abs(parseval) <= 0.01;

  NoiseSpec white;
  white.rin_level = 1e-4;
  white.corner_hz = 1e9;
  const auto n = synthesize_timeseries(HarmonicSet({cplx{1.0}}, false), f_m, r30.f_s, 2 * minimum_duration(r30), white);
  auto floor_db = [&](const Spectrum& sp) {
    double acc = 0.0;
    int k = 0;
    for (std::size_t i = 0; i < sp.freqs.size(); ++i)
      if (std::abs(sp.freqs[i] - f_m) <= 1500.0) acc += sp.power[i], ++k;
    return 10.0 * std::log10(acc / k);
  };
  const double shift = floor_db(estimate_psd(n, r300)) - floor_db(estimate_psd(n, r30));
  const bool shift_ok = std::abs(shift - 10.0) <= 0.5;
  return {tone_ok && parseval_ok && shift_ok,
          fmt::format("tone {:.3f} dBc (expected {:.3f} +- 0.5); floor shift {:.3f} dB (10 +- 0.5); "
                      "Parseval error {:.3f} % (limit 1 %)",
                      level, expected, shift, 100.0 * parseval)};
}

// 8. Every command writes byte-identical output for the same scenario and seed.
Outcome criterion8() {
  const fs::path dir = fs::temp_directory_path() / "ramsim_acceptance";
  fs::create_directories(dir);
  auto run_all = [&](const std::string& tag) {
    std::string all;
    const Scenario f2 = shipped("fig2.scenario");
    write_fig2_csv((dir / (tag + "_fig2.csv")).string(), f2, run_fig2(f2));
    all += slurp(dir / (tag + "_fig2.csv"));
    for (const char* name : {"fig1_noFiber.scenario", "fig3_fiber.scenario"}) {
      const Scenario s = shipped(name);
      const RejectionReport r = run_closed_loop(s, s.controller.steps);
      write_rejection_csv((dir / (tag + "_rej.csv")).string(), s, r);
      all += slurp(dir / (tag + "_rej.csv")) + format_report(r);
    }
    const Scenario s = shipped("fig3_fiber.scenario");
    const SpectrumPair sp = before_after_spectra(s);
    write_spectrum_csv((dir / (tag + "_before.csv")).string(), s, sp.before, "before");
    write_spectrum_csv((dir / (tag + "_after.csv")).string(), s, sp.after, "after");
    all += slurp(dir / (tag + "_before.csv")) + slurp(dir / (tag + "_after.csv"));
    return all;
  };
  const std::string a = run_all("a");
  const std::string b = run_all("b");
  return {a == b && !a.empty(), fmt::format("{} bytes compared across two runs (fig2, rejection x2, spectrum pair)", a.size())};
}

struct Criterion {
  int id;
  double runtime_limit;  ///< seconds; 0 when the criterion sets none
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  if (argc == 3 && std::strcmp(argv[1], "--only") == 0) only = std::atoi(argv[2]);

  const Criterion all[] = {{1, 60.0, criterion1}, {2, 0.0, criterion2}, {3, 30.0, criterion3},
                           {4, 60.0, criterion4}, {5, 60.0, criterion5}, {6, 0.0, criterion6},
                           {7, 0.0, criterion7}, {8, 0.0, criterion8}};
  bool ok = true;
  for (const auto& c : all) {
    if (only != 0 && c.id != only) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.runtime_limit > 0.0) o.pass = within_runtime(secs, c.runtime_limit, o.detail) && o.pass;
    fmt::print("CRITERION {} {} {:.2f}s  {}\n", c.id, o.pass ? "PASS" : "FAIL", secs, o.detail);
    std::fflush(stdout);
    ok = ok && o.pass;
  }
  return ok ? 0 : 1;
}
