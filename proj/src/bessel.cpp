#include "ramsim/bessel.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "ramsim/errors.hpp"

namespace ramsim {

double BesselComb::power() const {
  double sum = 0.0;
  for (double v : values_) sum += v * v;
  return sum;
}

std::vector<double> bessel_j_orders(double x, int n_max) {
  if (n_max < 0) throw InvalidArgument("bessel_j_orders: n_max must be >= 0");
  if (!(x >= 0.0) || !std::isfinite(x)) throw InvalidArgument("bessel_j_orders: x must be finite and >= 0");

  std::vector<double> out(static_cast<std::size_t>(n_max) + 1, 0.0);
  if (x == 0.0) {
    out[0] = 1.0;
    return out;
  }

  // Start well above both n_max and x so the minimal solution dominates.
  const int top = std::max(n_max, static_cast<int>(x));
  int start = top + 20 + static_cast<int>(std::sqrt(60.0 * (top + 1)));
  start += start % 2;

  constexpr double kBig = 1e250;
  double next = 0.0;  // J_{k+1}
  double curr = 1e-300;  // J_k
  double norm = 0.0;
  for (int k = start; k > 0; --k) {
    const double prev = 2.0 * k / x * curr - next;  // J_{k-1}
    next = curr;
    curr = prev;
    if (k - 1 <= n_max) out[static_cast<std::size_t>(k - 1)] = curr;
    if ((k - 1) % 2 == 0 && k - 1 > 0) norm += 2.0 * curr;
    if (std::abs(curr) > kBig) {
      next /= kBig;
      curr /= kBig;
      norm /= kBig;
      for (int j = k - 1; j <= n_max; ++j) out[static_cast<std::size_t>(j)] /= kBig;
    }
  }
  norm += curr;  // J_0 term
  for (double& v : out) v /= norm;
  return out;
}

BesselComb bessel_amplitudes(double beta, int n_max) {
  if (!(beta >= 0.0) || !std::isfinite(beta)) throw InvalidArgument("bessel_amplitudes: beta must be >= 0");
  if (n_max < 1) throw InvalidArgument("bessel_amplitudes: n_max must be >= 1");

  const std::vector<double> positive = bessel_j_orders(beta, n_max);
  std::vector<double> values(2 * static_cast<std::size_t>(n_max) + 1);
  for (int n = 0; n <= n_max; ++n) {
    const double j = positive[static_cast<std::size_t>(n)];
    values[static_cast<std::size_t>(n_max + n)] = j;
    values[static_cast<std::size_t>(n_max - n)] = (n % 2 == 0) ? j : -j;
  }
  BesselComb comb(n_max, std::move(values));
  const double missing = 1.0 - comb.power();
  if (missing > kTruncationTolerance) throw InsufficientOrderError(n_max, beta, missing);
  return comb;
}

int minimum_sideband_order(double beta) {
  if (!(beta >= 0.0) || !std::isfinite(beta)) throw InvalidArgument("minimum_sideband_order: beta must be >= 0");
  const int limit = static_cast<int>(beta) + 200;
  const std::vector<double> j = bessel_j_orders(beta, limit);
  double power = j[0] * j[0];
  for (int n = 1; n <= limit; ++n) {
    power += 2.0 * j[static_cast<std::size_t>(n)] * j[static_cast<std::size_t>(n)];
    if (1.0 - power <= kTruncationTolerance) return n;
  }
  throw InvalidArgument(fmt::format("minimum_sideband_order: no order up to {} suffices for beta={}", limit, beta));
}

}  // namespace ramsim
