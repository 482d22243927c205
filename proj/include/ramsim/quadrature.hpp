#pragma once

#include <functional>
#include <limits>

#include "ramsim/detection.hpp"
#include "ramsim/parallel.hpp"

namespace ramsim {

/// Tensor-product composite Gauss-Legendre rule. Each axis is covered by
/// `panels` equal sub-intervals with 20 nodes apiece; a second pass at
/// panels / 2 measures the discretisation error.
struct QuadratureOptions {
  int panels = 100;  ///< per axis; 100 x 20 = 2000 nodes per axis
  double rel_tol = 1e-9;
  double abs_tol = 1e-15;
  double support_widths = 8.0;  ///< integrate out to this many waists beyond the outermost centre
  double wavelength = std::numeric_limits<double>::quiet_NaN();
  parallel::Exec exec = parallel::Exec::Parallel;
};

inline constexpr int kGaussNodes = 20;

/// Integral of f(x, y) over [x0, x1] x [y0, y1] on the composite rule. Rows
/// (fixed x) are summed first, then combined in index order, so the result
/// does not depend on the execution mode or thread count.
cplx integrate_2d(const std::function<cplx(double, double)>& f, double x0, double x1, double y0, double y1,
                  int panels, parallel::Exec exec);

/// Brute-force  integral of g_a conj(g_b) over the aperture. Independent of the
/// closed forms; used to verify them. Throws NonConvergenceError carrying the
/// estimate when the two refinement levels disagree beyond tolerance.
cplx overlap_quadrature_oracle(const SpatialMode& a, const SpatialMode& b, const Aperture& aperture,
                               const QuadratureOptions& options = {});

}  // namespace ramsim
