#include <doctest.h>

#include "approx.hpp"

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "ramsim/beamline.hpp"
#include "ramsim/detection.hpp"
#include "ramsim/errors.hpp"
#include "ramsim/quadrature.hpp"

using namespace ramsim;

TEST_CASE("lateral shift from AOM parameters") {
  AomSpec aom;
  aom.wavelength = 532e-9;
  aom.v_ac = 4200.0;
  aom.f_lens = 1.061;
  // 1.061 * 532e-9 * 2.5e6 / 4200 = 3.35993e-4
  CHECK(lateral_shift(aom, 2.5e6) == rel(0.336e-3).epsilon(1e-4));
  CHECK(lateral_shift(aom, 0.0) == 0.0);
  CHECK(angular_step(aom, 2.5e6) == rel(532e-9 * 2.5e6 / 4200.0));
  aom.lateral_shift_override = 0.336e-3;
  CHECK(lateral_shift(aom, 2.5e6) == 0.336e-3);
}

TEST_CASE("splitter and half-wave plate") {
  const SplitterSpec pbs{0.0, 1.0};
  CHECK(pbs.reflectivity(std::numbers::pi / 4) == rel(0.5).epsilon(1e-15));
  CHECK(pbs.reflectivity(0.0) == 0.0);
  CHECK(pbs.reflectivity(std::numbers::pi / 2) == rel(1.0));

  BeamState b = make_carrier(2e-3, SpatialMode{4e-3, 0.0, 0.0}, 0.0, 532e-9);
  b = rotate_halfwave(b, std::numbers::pi / 8);
  CHECK(b.pol_angle == rel(std::numbers::pi / 4));
  const auto [r, t] = split(b, pbs);
  CHECK(r.power() == rel(1e-3));
  CHECK(r.power() + t.power() == rel(b.power()).epsilon(1e-15));
}

TEST_CASE("pure FM comb amplitudes and geometry") {
  ModulationSpec mod;
  mod.beta = 1.0;
  mod.n_max = 8;
  AomSpec aom;
  const double P = 1e-3;
  const BeamState carrier = make_carrier(P, SpatialMode{4e-3, 0.0, 0.0}, 0.0, aom.wavelength);
  const RfChainResponse flat = RfChainResponse::flat(mod.f_carrier - 10 * mod.f_m, mod.f_carrier + 10 * mod.f_m);

  const BeamState focal = aom_modulate(carrier, mod, aom, flat, {}, AomOutputPlane::LensFocal);
  REQUIRE(focal.components.size() == 17);
  const double A = lateral_shift(aom, mod.f_m);
  for (const auto& c : focal.components) {
    CHECK(std::abs(c.amplitude - std::sqrt(P) * oracle::bessel_series(c.order, 1.0)) <= 1e-15);
    CHECK(std::abs(c.mode.center_x - c.order * A) <= 1e-15);
    CHECK(c.mode.tilt == 0.0);
  }

  const BeamState exit = aom_modulate(carrier, mod, aom, flat, {}, AomOutputPlane::AomExit);
  for (const auto& c : exit.components) {
    CHECK(c.mode.center_x == 0.0);
    CHECK(std::abs(c.mode.tilt - c.order * angular_step(aom, mod.f_m)) <= 1e-15);
  }
  CHECK_THROWS_AS(aom_modulate(carrier, mod, aom, flat, {0.8, 0.8}), OvermodulationError);
}

TEST_CASE("RF polynomial response") {
  ModulationSpec mod;
  const RfChainResponse rf = RfChainResponse::from_polynomial({cplx{1.0}, cplx{0.01}}, mod);
  for (int n = -mod.n_max; n <= mod.n_max; ++n)
    CHECK(std::abs(rf.at(mod.f_carrier + n * mod.f_m) - cplx{1.0 + 0.01 * n}) <= 1e-14);
  CHECK_NOTHROW(rf.validate_covers(mod));
  const RfChainResponse narrow = RfChainResponse::flat(mod.f_carrier - mod.f_m, mod.f_carrier + mod.f_m);
  CHECK_THROWS_AS(narrow.validate_covers(mod), InvalidArgument);
}

TEST_CASE("fibre coupling closed form against the quadrature oracle") {
  const double lambda = 532e-9;
  struct Case {
    SpatialMode mode;
    FiberSpec fiber;
  };
  const Case cases[] = {
      {{100e-6, 0.0, 0.0}, {100e-6, 0.0, 0.0}},
      {{100e-6, 30e-6, 0.0}, {120e-6, -10e-6, 0.0}},
      {{100e-6, 0.0, 3e-4}, {100e-6, 0.0, 0.0}},
      {{80e-6, 20e-6, 3.2e-4}, {100e-6, 5e-6, -1e-4}},
  };
  QuadratureOptions opt;
  opt.wavelength = lambda;
  for (const auto& c : cases) {
    const cplx closed = fiber_coupling(c.mode, c.fiber, lambda);
    const cplx numeric =
        overlap_quadrature_oracle(c.mode, SpatialMode{c.fiber.w_fiber, c.fiber.offset_x, c.fiber.tilt}, FullPlane{}, opt);
    CHECK(std::abs(closed - numeric) <= 1e-9);
    CHECK(std::abs(closed) <= 1.0);
  }
  CHECK(std::abs(fiber_coupling({100e-6, 0.0, 0.0}, {100e-6, 0.0, 0.0}, lambda) - cplx{1.0}) <= 1e-15);
}

TEST_CASE("fibre projection gives every component the fibre mode") {
  ModulationSpec mod;
  AomSpec aom;
  const BeamState carrier = make_carrier(1e-3, SpatialMode{100e-6, 0.0, 0.0}, 0.0, aom.wavelength);
  const BeamState beam = aom_modulate(carrier, mod, aom, RfChainResponse::from_polynomial({cplx{1.0}}, mod), {},
                                      AomOutputPlane::AomExit);
  const BeamState out = fiber_project(beam, FiberSpec{100e-6, 0.0, 0.0});
  for (const auto& c : out.components) CHECK(c.mode == SpatialMode{100e-6, 0.0, 0.0});
  CHECK(out.power() <= beam.power());
}
