#include "ramsim/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>

#include "ramsim/errors.hpp"

namespace ramsim {

namespace {

struct Axis {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Composite Gauss-Legendre nodes on [lo, hi]. boost stores only the
// non-negative half of the symmetric 20-point rule.
Axis make_axis(double lo, double hi, int panels) {
  using Rule = boost::math::quadrature::gauss<double, kGaussNodes>;
  const auto& half_x = Rule::abscissa();
  const auto& half_w = Rule::weights();

  std::vector<double> ref_x, ref_w;
  for (std::size_t i = half_x.size(); i-- > 0;) {
    if (half_x[i] == 0.0) continue;
    ref_x.push_back(-half_x[i]);
    ref_w.push_back(half_w[i]);
  }
  for (std::size_t i = 0; i < half_x.size(); ++i) {
    ref_x.push_back(half_x[i]);
    ref_w.push_back(half_w[i]);
  }

  Axis axis;
  const double h = (hi - lo) / panels;
  axis.nodes.reserve(static_cast<std::size_t>(panels) * ref_x.size());
  axis.weights.reserve(axis.nodes.capacity());
  for (int p = 0; p < panels; ++p) {
    const double mid = lo + (p + 0.5) * h;
    for (std::size_t i = 0; i < ref_x.size(); ++i) {
      axis.nodes.push_back(mid + 0.5 * h * ref_x[i]);
      axis.weights.push_back(0.5 * h * ref_w[i]);
    }
  }
  return axis;
}

template <class F>
cplx integrate_rows(const F& f, const Axis& xs, const Axis& ys, parallel::Exec exec) {
  const auto nx = static_cast<std::ptrdiff_t>(xs.nodes.size());
  std::vector<cplx> rows(xs.nodes.size());

  auto row = [&](std::ptrdiff_t i) {
    const double x = xs.nodes[static_cast<std::size_t>(i)];
    cplx acc{0.0};
    for (std::size_t j = 0; j < ys.nodes.size(); ++j) acc += ys.weights[j] * f(x, ys.nodes[j]);
    rows[static_cast<std::size_t>(i)] = acc;
  };

  if (exec == parallel::Exec::Parallel) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < nx; ++i) row(i);
  } else {
    for (std::ptrdiff_t i = 0; i < nx; ++i) row(i);
  }

  cplx total{0.0};
  for (std::size_t i = 0; i < rows.size(); ++i) total += xs.weights[i] * rows[i];
  return total;
}

struct Box {
  double x0, x1, y0, y1;
  bool empty() const { return !(x1 > x0) || !(y1 > y0); }
};

Box clip_to_aperture(Box support, const Aperture& aperture) {
  if (const auto* screen = std::get_if<HalfPlaneScreen>(&aperture)) {
    support.x0 = std::max(support.x0, screen->edge_x);
  } else if (const auto* rect = std::get_if<OffsetRect>(&aperture)) {
    support.x0 = std::max(support.x0, rect->center_x - rect->half_width);
    support.x1 = std::min(support.x1, rect->center_x + rect->half_width);
    support.y0 = std::max(support.y0, rect->center_y - rect->half_height);
    support.y1 = std::min(support.y1, rect->center_y + rect->half_height);
  }
  return support;
}

}  // namespace

cplx integrate_2d(const std::function<cplx(double, double)>& f, double x0, double x1, double y0, double y1,
                  int panels, parallel::Exec exec) {
  if (panels < 1) throw InvalidArgument("integrate_2d: panels must be >= 1");
  return integrate_rows(f, make_axis(x0, x1, panels), make_axis(y0, y1, panels), exec);
}

cplx overlap_quadrature_oracle(const SpatialMode& a, const SpatialMode& b, const Aperture& aperture,
                               const QuadratureOptions& options) {
  validate(aperture);
  for (double v : {a.w0, b.w0, a.center_x, b.center_x, a.tilt, b.tilt})
    if (!std::isfinite(v)) throw InvalidArgument("overlap_quadrature_oracle: non-finite mode parameter");
  if (!(a.w0 > 0.0) || !(b.w0 > 0.0)) throw InvalidArgument("overlap_quadrature_oracle: waists must be > 0");
  if (options.panels < 2) throw InvalidArgument("overlap_quadrature_oracle: panels must be >= 2");

  const bool tilted = a.tilt != 0.0 || b.tilt != 0.0;
  if (tilted && !(options.wavelength > 0.0))
    throw InvalidArgument("overlap_quadrature_oracle: tilted modes need a wavelength");

  const double reach = options.support_widths * std::max(a.w0, b.w0);
  const Box box = clip_to_aperture({std::min(a.center_x, b.center_x) - reach,
                                    std::max(a.center_x, b.center_x) + reach, -reach, reach},
                                   aperture);
  if (box.empty()) return cplx{0.0};

  const double norm = 2.0 / (std::numbers::pi * a.w0 * b.w0);
  const double ia2 = 1.0 / (a.w0 * a.w0);
  const double ib2 = 1.0 / (b.w0 * b.w0);
  const double k = tilted ? 2.0 * std::numbers::pi / options.wavelength : 0.0;

  auto integrand = [&](double x, double y) -> cplx {
    const double dxa = x - a.center_x;
    const double dxb = x - b.center_x;
    const double envelope = norm * std::exp(-(dxa * dxa + y * y) * ia2 - (dxb * dxb + y * y) * ib2);
    if (!tilted) return cplx{envelope};
    return std::polar(envelope, k * (a.tilt * dxa - b.tilt * dxb));
  };

  const cplx fine = integrate_rows(integrand, make_axis(box.x0, box.x1, options.panels),
                                   make_axis(box.y0, box.y1, options.panels), options.exec);
  const int coarse_panels = options.panels / 2;
  const cplx coarse = integrate_rows(integrand, make_axis(box.x0, box.x1, coarse_panels),
                                     make_axis(box.y0, box.y1, coarse_panels), options.exec);
  const double discrepancy = std::abs(fine - coarse);
  if (!(discrepancy <= options.rel_tol * std::abs(fine) + options.abs_tol))
    throw NonConvergenceError(fine.real(), fine.imag(), discrepancy);
  return fine;
}

}  // namespace ramsim
