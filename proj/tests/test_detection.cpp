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

namespace {

BeamState pure_fm_focal(double w0, double A, double beta = 1.0) {
  ModulationSpec mod;
  mod.beta = beta;
  AomSpec aom;
  aom.lateral_shift_override = A;
  const BeamState carrier = make_carrier(1.0, SpatialMode{w0, 0.0, 0.0}, 0.0, aom.wavelength);
  return aom_modulate(carrier, mod, aom, RfChainResponse::from_polynomial({cplx{1.0}}, mod));
}

}  // namespace

TEST_CASE("Gaussian interval fraction") {
  const double w = 2e-3;
  CHECK(gaussian_interval_fraction(-1.0, 1.0, 0.0, w) == rel(1.0).epsilon(1e-15));
  CHECK(gaussian_interval_fraction(0.0, 1.0, 0.0, w) == rel(0.5).epsilon(1e-15));
  // Far tail stays accurate instead of cancelling to zero.
  const double tail = gaussian_interval_fraction(10 * w, 1.0, 0.0, w);
  CHECK(tail > 0.0);
  CHECK(tail == rel(0.5 * std::erfc(std::sqrt(2.0) * 10.0)).epsilon(1e-12));
}

TEST_CASE("closed-form overlaps against the quadrature oracle") {
  const double w = 3e-3;
  const SpatialMode a{w, 0.4e-3, 0.0};
  const SpatialMode b{w, -1.1e-3, 0.0};
  const Aperture apertures[] = {FullPlane{}, HalfPlaneScreen{-0.5e-3}, HalfPlaneScreen{2e-3},
                                OffsetRect{0.3e-3, 0.2e-3, 1.5e-3, 2.5e-3}};
  for (const auto& ap : apertures) {
    const cplx closed = overlap_analytic(a, b, ap);
    const cplx numeric = overlap_quadrature_oracle(a, b, ap);
    CHECK(std::abs(closed - numeric) <= 1e-8 * std::abs(numeric));
  }
  CHECK(overlap_analytic(a, a, FullPlane{}) == cplx{1.0});
  // Unequal waists fall through to the oracle.
  CHECK_THROWS_AS(overlap_analytic(a, SpatialMode{2e-3, 0.0, 0.0}, FullPlane{}), InvalidArgument);
  const cplx mixed = overlap(a, SpatialMode{2e-3, 0.0, 0.0}, FullPlane{});
  CHECK(std::abs(mixed) < 1.0);
}

TEST_CASE("quadrature reports non-convergence with its estimate") {
  QuadratureOptions opt;
  opt.panels = 2;
  opt.rel_tol = 1e-15;
  try {
    overlap_quadrature_oracle({1e-3, 0.0, 0.0}, {1e-3, 0.5e-3, 0.0}, HalfPlaneScreen{0.1e-3}, opt);
    FAIL("expected NonConvergenceError");
  } catch (const NonConvergenceError& e) {
    CHECK(std::isfinite(e.estimate_re()));
    CHECK(e.discrepancy() > 0.0);
  }
}

TEST_CASE("serial and parallel quadrature are bitwise identical") {
  QuadratureOptions serial;
  serial.exec = parallel::Exec::Serial;
  QuadratureOptions par;
  par.exec = parallel::Exec::Parallel;
  const SpatialMode a{2e-3, 0.3e-3, 0.0}, b{2.5e-3, -0.2e-3, 0.0};
  const Aperture ap = OffsetRect{0.0, 0.1e-3, 2e-3, 1e-3};
  const cplx s = overlap_quadrature_oracle(a, b, ap, serial);
  const cplx p = overlap_quadrature_oracle(a, b, ap, par);
  CHECK(s.real() == p.real());
  CHECK(s.imag() == p.imag());
}

TEST_CASE("harmonic set conventions") {
  const HarmonicSet h({cplx{1.0}, cplx{0.1, 0.05}, cplx{0.01}}, false);
  CHECK(h.at(-1) == std::conj(h.at(1)));
  CHECK(h.at(5) == cplx{0.0});
  CHECK(h.dc() == 1.0);
  const double phase = 0.7;
  const double expected = 1.0 + 2.0 * std::real(h.at(1) * std::polar(1.0, phase)) + 2.0 * std::real(h.at(2) * std::polar(1.0, 2 * phase));
  CHECK(h.evaluate(phase) == rel(expected).epsilon(1e-14));
  CHECK(h.min_over_period() <= h.evaluate(0.0));
}

TEST_CASE("drive envelope produces the expected AM on co-located modes") {
  // With coincident modes the intensity is P (1 + m cos)^2, so
  // c1 / c0 = m / (1 + m^2 / 2) and c2 / c0 = (m^2 / 4) / (1 + m^2 / 2).
  ModulationSpec mod;
  AomSpec aom;
  aom.lateral_shift_override = 1e-12;
  const double m = 0.03;
  const BeamState carrier = make_carrier(1.0, SpatialMode{4e-3, 0.0, 0.0}, 0.0, aom.wavelength);
  const BeamState beam =
      aom_modulate(carrier, mod, aom, RfChainResponse::from_polynomial({cplx{1.0}}, mod), {m, 0.0});
  const HarmonicSet h = photocurrent_harmonics(beam, DetectorSpec{}, 2);
  CHECK(std::abs(h.at(1)) / h.dc() == rel(m / (1.0 + m * m / 2.0)).epsilon(1e-9));
  CHECK(std::abs(h.at(2)) / h.dc() == rel(m * m / 4.0 / (1.0 + m * m / 2.0)).epsilon(1e-8));
  // m_q rotates the tone by -90 degrees: 1 + m sin = 1 + Re(-i m e^{i w t}).
  const BeamState q = aom_modulate(carrier, mod, aom, RfChainResponse::from_polynomial({cplx{1.0}}, mod), {0.0, m});
  const cplx c1q = photocurrent_harmonics(q, DetectorSpec{}, 1).at(1);
  CHECK(std::arg(c1q) == rel(-std::numbers::pi / 2).epsilon(1e-9));
}

TEST_CASE("pure FM on the full plane carries no AM") {
  const HarmonicSet h = photocurrent_harmonics(pure_fm_focal(4e-3, 0.336e-3), DetectorSpec{}, 4);
  CHECK(std::abs(h.at(1)) / h.dc() <= 1e-10);
}

TEST_CASE("harmonic order is clipped to what the comb can produce") {
  ModulationSpec mod;
  mod.beta = 0.01;
  mod.n_max = 2;
  AomSpec aom;
  const BeamState carrier = make_carrier(1.0, SpatialMode{1e-3, 0.0, 0.0}, 0.0, aom.wavelength);
  const BeamState beam = aom_modulate(carrier, mod, aom, RfChainResponse::from_polynomial({cplx{1.0}}, mod));
  const HarmonicSet h = photocurrent_harmonics(beam, DetectorSpec{}, 10);
  CHECK(h.clipped());
  CHECK(h.k_max() == 4);
}

TEST_CASE("occultation curve matches the time-synthesis oracle") {
  const double w0 = 4e-3, A = 0.336e-3;
  const BeamState beam = pure_fm_focal(w0, A);
  const std::vector<double> xs = {-1.5, -0.75, 0.0, 0.3, 1.5};
  const auto pts = fig2_scan(beam, 1.0, xs);
  for (const auto& p : pts) {
    const double ref = oracle::occultation_time_synthesis(1.0, w0, A, p.x_over_w0 * w0);
    INFO("X/w0 = " << p.x_over_w0);
    CHECK(std::abs(p.normalized_ifm - ref) <= 1e-6);
  }
  // Frozen from an independent 30-digit evaluation (beta = 1, w0 = 4 mm,
  // A = 0.336 mm, X = 0).
  CHECK(pts[2].normalized_ifm == rel(0.0664754653703).epsilon(1e-11));
  CHECK(pts[0].normalized_ifm == rel(pts[4].normalized_ifm).epsilon(1e-12));
}

TEST_CASE("fig2_scan preconditions") {
  const BeamState single = make_carrier(1.0, SpatialMode{1e-3, 0.0, 0.0}, 0.0, 532e-9);
  const std::vector<double> xs = {0.0};
  CHECK_THROWS_AS(fig2_scan(single, 1.0, xs), InvalidArgument);
  CHECK(linspace(-1.5, 1.5, 121).size() == 121);
  CHECK(linspace(-1.5, 1.5, 121)[60] == 0.0);
}
