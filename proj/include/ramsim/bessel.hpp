#pragma once

#include <vector>

namespace ramsim {

/// Largest tolerated power outside a truncated FM comb.
inline constexpr double kTruncationTolerance = 1e-9;

/// J_n(beta) for n in [-n_max, n_max], the pure-FM sideband amplitudes.
class BesselComb {
 public:
  BesselComb(int n_max, std::vector<double> values) : n_max_(n_max), values_(std::move(values)) {}

  int n_max() const { return n_max_; }
  /// J_n, n in [-n_max, n_max].
  double at(int n) const { return values_[static_cast<std::size_t>(n + n_max_)]; }
  /// Ordered from n = -n_max to n = n_max.
  const std::vector<double>& values() const { return values_; }
  /// Sum of J_n^2 over the retained orders.
  double power() const;

 private:
  int n_max_;
  std::vector<double> values_;
};

/// J_0(x)..J_{n_max}(x) by Miller's backward recurrence, normalised with
/// J_0 + 2 sum J_{2k} = 1. Accurate to a few ulp for 0 <= x <= ~100.
std::vector<double> bessel_j_orders(double x, int n_max);

/// Throws InvalidArgument for beta < 0 or n_max < 1 and InsufficientOrderError
/// when the comb misses more than kTruncationTolerance of the power.
BesselComb bessel_amplitudes(double beta, int n_max);

/// Smallest n_max >= 1 that satisfies the truncation rule for beta.
int minimum_sideband_order(double beta);

}  // namespace ramsim
