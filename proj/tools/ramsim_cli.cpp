// ramsim: command-line front end for the RAM simulator.
//
// Exit codes: 0 success, 1 runtime failure, 2 configuration error,
// 3 numerical self-test failure.

#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "ramsim/errors.hpp"
#include "ramsim/experiments.hpp"
#include "ramsim/scenario.hpp"
#include "ramsim/selftest.hpp"

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitConfig = 2;
constexpr int kExitSelfTest = 3;

struct CommonArgs {
  std::string scenario;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<int> steps;
};

void add_common(CLI::App* cmd, CommonArgs& args, const std::string& out_help) {
  cmd->add_option("--scenario", args.scenario, "Scenario file")->required()->check(CLI::ExistingFile);
  cmd->add_option("--out", args.out, out_help)->required();
  cmd->add_option("--seed", args.seed, "Override the noise seed");
  cmd->add_option("--steps", args.steps, "Override the number of control steps")->check(CLI::PositiveNumber);
}

ramsim::Scenario load(const CommonArgs& args) {
  ramsim::Scenario s = ramsim::load_scenario(args.scenario);
  if (args.seed) {
    if (!s.noise) s.noise = ramsim::NoiseSpec{};
    s.noise->seed = *args.seed;
  }
  if (args.steps) s.controller.steps = *args.steps;
  s.validate();
  return s;
}

int cmd_fig2(const CommonArgs& args) {
  const ramsim::Scenario s = load(args);
  const auto points = ramsim::run_fig2(s);
  ramsim::write_fig2_csv(args.out, s, points);
  fmt::print("wrote {} points to {}\n", points.size(), args.out);
  return 0;
}

int cmd_rejection(const CommonArgs& args) {
  const ramsim::Scenario s = load(args);
  const auto report = ramsim::run_closed_loop(s, s.controller.steps);
  ramsim::write_rejection_csv(args.out, s, report);
  fmt::print("{}", ramsim::format_report(report));
  fmt::print("trajectory written to {}\n", args.out);
  return 0;
}

int cmd_spectrum(const CommonArgs& args) {
  const ramsim::Scenario s = load(args);
  const auto pair = ramsim::before_after_spectra(s);
  const std::string before = args.out + "_before.csv";
  const std::string after = args.out + "_after.csv";
  ramsim::write_spectrum_csv(before, s, pair.before, "before");
  ramsim::write_spectrum_csv(after, s, pair.after, "after");
  const double f_m = s.modulation.f_m;
  const double half = 2.0 * pair.before.rbw_hz;
  fmt::print("tone at f_m: before {:.2f} dBc, after {:.2f} dBc\n", pair.before.peak(f_m - half, f_m + half).second,
             pair.after.peak(f_m - half, f_m + half).second);
  fmt::print("wrote {} and {}\n", before, after);
  return 0;
}

int cmd_selftest(bool perturb) {
  ramsim::SelfTestOptions opt;
  if (perturb) opt.analytic_perturbation = 1e-6;
  const auto result = ramsim::run_selftest(opt);
  fmt::print("{}", result.summary());
  return result.passed() ? 0 : kExitSelfTest;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Residual amplitude modulation simulator"};
  app.require_subcommand(1);

  CommonArgs fig2_args, rej_args, spec_args;
  auto* fig2 = app.add_subcommand("fig2", "Occultation curve of the useful beam");
  add_common(fig2, fig2_args, "Output CSV");
  auto* rej = app.add_subcommand("rejection", "Closed-loop AM rejection on both beams");
  add_common(rej, rej_args, "Output CSV (per-step trajectory)");
  auto* spec = app.add_subcommand("spectrum", "PD2 spectra around f_m before and after correction");
  add_common(spec, spec_args, "Output prefix; writes <prefix>_before.csv and <prefix>_after.csv");
  bool perturb = false;
  auto* self = app.add_subcommand("selftest", "Numerical self-checks");
  self->add_flag("--perturb-analytic", perturb, "Inject an error into the closed-form overlaps (must fail)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*fig2) return cmd_fig2(fig2_args);
    if (*rej) return cmd_rejection(rej_args);
    if (*spec) return cmd_spectrum(spec_args);
    if (*self) return cmd_selftest(perturb);
  } catch (const ramsim::ConfigError& e) {
    fmt::print(stderr, "config error: {}\n", e.what());
    return kExitConfig;
  } catch (const ramsim::InvalidArgument& e) {
    fmt::print(stderr, "config error: {}\n", e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kExitRuntime;
  }
  return 0;
}
