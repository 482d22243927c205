#include "ramsim/errors.hpp"

#include <fmt/format.h>

#include "ramsim/bessel.hpp"

namespace ramsim {

InsufficientOrderError::InsufficientOrderError(int n_max, double beta, double missing_power)
    : Error(fmt::format("insufficient n_max: {} sidebands per side leave {:.3e} of the power outside the comb "
                        "for beta={} (need >= {})",
                        n_max, missing_power, beta, minimum_sideband_order(beta))),
      n_max_(n_max),
      missing_power_(missing_power) {}

NonConvergenceError::NonConvergenceError(double estimate_re, double estimate_im, double discrepancy)
    : Error(fmt::format("quadrature did not converge: estimate {:.12e}{:+.12e}i, refinement discrepancy {:.3e}",
                        estimate_re, estimate_im, discrepancy)),
      re_(estimate_re),
      im_(estimate_im),
      discrepancy_(discrepancy) {}

ConfigError::ConfigError(std::size_t line, const std::string& what)
    : Error(line > 0 ? fmt::format("line {}: {}", line, what) : what), line_(line) {}

}  // namespace ramsim
