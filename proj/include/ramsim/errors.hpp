#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ramsim {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument or derived quantity violates a type invariant.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// The requested sideband order leaves more than 1e-9 of the power outside the comb.
class InsufficientOrderError : public Error {
 public:
  InsufficientOrderError(int n_max, double beta, double missing_power);
  int n_max() const { return n_max_; }
  double missing_power() const { return missing_power_; }

 private:
  int n_max_;
  double missing_power_;
};

/// Drive envelope with |m| > 1.
class OvermodulationError : public Error {
 public:
  using Error::Error;
};

/// The 2D quadrature did not reach its tolerance; carries the best estimate.
class NonConvergenceError : public Error {
 public:
  NonConvergenceError(double estimate_re, double estimate_im, double discrepancy);
  double estimate_re() const { return re_; }
  double estimate_im() const { return im_; }
  double discrepancy() const { return discrepancy_; }

 private:
  double re_, im_, discrepancy_;
};

/// Scenario text problem, tagged with the 1-based line number (0 when not line-specific).
class ConfigError : public Error {
 public:
  ConfigError(std::size_t line, const std::string& what);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

}  // namespace ramsim
