#pragma once

// Reference computations that share no code with the library. Each one is
// slow and direct; the tests compare the production paths against them.

#include <cmath>
#include <complex>
#include <vector>

namespace oracle {

/// J_n(x) by its power series, summed in long double with `terms` terms.
inline double bessel_series(int n, double x, int terms = 30) {
  const bool negate = n < 0 && (n % 2 != 0);
  n = std::abs(n);
  long double sum = 0.0L;
  long double term = 1.0L;
  for (int i = 1; i <= n; ++i) term *= static_cast<long double>(x) / 2.0L / i;
  const long double q = static_cast<long double>(x) * x / 4.0L;
  for (int k = 0; k < terms; ++k) {
    sum += term;
    term *= -q / ((k + 1.0L) * (k + 1.0L + n));
  }
  return negate ? -static_cast<double>(sum) : static_cast<double>(sum);
}

/// Normalised photocurrent 2|c_1| / (rho P0) behind a half-plane screen at X,
/// for a pure-FM comb whose order-n mode is centred at n A. The intensity is
/// synthesised at `phases` instants of one modulation period, integrated over
/// x >= X with composite Simpson (the y integral of a Gaussian is exact), and
/// projected on exp(-i w_m t).
inline double occultation_time_synthesis(double beta, double w, double A, double X, int n_max = 10,
                                         int phases = 64, int x_intervals = 8000) {
  const double pi = std::acos(-1.0);
  const int count = 2 * n_max + 1;
  std::vector<double> a(count);
  for (int n = -n_max; n <= n_max; ++n) a[n + n_max] = bessel_series(n, beta);
  std::vector<std::complex<double>> rot(static_cast<std::size_t>(phases * count));
  for (int p = 0; p < phases; ++p)
    for (int n = -n_max; n <= n_max; ++n) rot[p * count + n + n_max] = std::polar(1.0, 2.0 * pi * p * n / phases);

  const double y_integral = w * std::sqrt(pi / 2.0);  // of exp(-2 y^2 / w^2)
  const double norm = 2.0 / (pi * w * w);
  const double h = 20.0 * w / x_intervals;

  std::vector<double> power(phases, 0.0);
  std::vector<double> g(count);
  for (int j = 0; j <= x_intervals; ++j) {
    const double x = X + h * j;
    for (int n = -n_max; n <= n_max; ++n) {
      const double d = x - n * A;
      g[n + n_max] = a[n + n_max] * std::exp(-d * d / (w * w));
    }
    const double weight = (j == 0 || j == x_intervals) ? 1.0 : (j % 2 ? 4.0 : 2.0);
    for (int p = 0; p < phases; ++p) {
      std::complex<double> field{0.0};
      for (int k = 0; k < count; ++k) field += g[k] * rot[p * count + k];
      power[p] += weight * std::norm(field);
    }
  }
  std::complex<double> c1{0.0};
  for (int p = 0; p < phases; ++p) c1 += power[p] * h / 3.0 * norm * y_integral * std::polar(1.0, -2.0 * pi * p / phases);
  c1 /= static_cast<double>(phases);
  return 2.0 * std::abs(c1);
}

}  // namespace oracle
