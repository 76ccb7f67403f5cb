#pragma once

// Test-only oracles, independent of the library's computation paths:
// Lanczos Gamma, accelerated character L-series, alternating-series zeta,
// trial-division von Mangoldt, continued fractions.

#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

namespace oracles {

// Lanczos g=7 (independent copy; the library's lfunctions backend is
// Hurwitz-zeta based, the weights path is quadrature)
inline std::complex<double> gamma_lanczos(std::complex<double> z) {
  static const double c[9] = {
      0.99999999999980993,      676.5203681218851,     -1259.1392167224028,
      771.32342877765313,       -176.61502916214059,   12.507343278686905,
      -0.13857109526572012,     9.9843695780195716e-6, 1.5056327351493116e-7};
  const double pi = 3.14159265358979323846;
  if (z.real() < 0.5)
    return pi / (std::sin(pi * z) * gamma_lanczos(1.0 - z));
  z -= 1.0;
  std::complex<double> x = c[0];
  for (int i = 1; i < 9; ++i) x += c[i] / (z + static_cast<double>(i));
  std::complex<double> t = z + 7.5;
  return std::sqrt(2.0 * pi) * std::pow(t, z + 0.5) * std::exp(-t) * x;
}

// L(s, chi) for a real periodic pattern chi(n) = pattern[n mod m] with
// sum over a period equal to 0; direct summation with two levels of
// Euler-style averaging, good to ~1e-9 for Re s >= 1/2.
inline std::complex<double> l_series_periodic(
    const std::vector<double>& pattern, std::complex<double> s,
    int terms = 200000) {
  std::size_t m = pattern.size();
  std::complex<double> acc{0.0, 0.0};
  // block sums over full periods decay like |s| m / n^{Re s + 1}
  std::vector<std::complex<double>> partial;
  std::complex<double> run{0.0, 0.0};
  for (int n = 1; n <= terms; ++n) {
    double ch = pattern[n % m];
    if (ch != 0.0) run += ch * std::exp(-s * std::log(static_cast<double>(n)));
    if (n % static_cast<int>(m) == 0 && n > terms - 8 * static_cast<int>(m))
      partial.push_back(run);
  }
  // average the last few period-aligned partial sums (oscillation kill)
  while (partial.size() > 1) {
    for (std::size_t i = 0; i + 1 < partial.size(); ++i)
      partial[i] = 0.5 * (partial[i] + partial[i + 1]);
    partial.pop_back();
  }
  acc = partial.empty() ? run : partial[0];
  return acc;
}

// Dirichlet eta-based zeta for Re s > 0:
// zeta(s) = eta(s) / (1 - 2^{1-s}), eta via alternating series with
// binomial (Euler) acceleration.
inline std::complex<double> zeta_alternating(std::complex<double> s) {
  const int n = 48;
  // d_k coefficients from Borwein's algorithm
  std::vector<double> d(n + 1);
  double t = 1.0;
  d[0] = t;
  for (int i = 1; i <= n; ++i) {
    t *= 2.0 * (n + i - 1) * (n - i + 1) / ((2.0 * i - 1) * i);
    d[i] = d[i - 1] + t;
  }
  std::complex<double> sum{0.0, 0.0};
  for (int k = 0; k < n; ++k) {
    double sign = k % 2 == 0 ? 1.0 : -1.0;
    sum += sign * (d[k] - d[n]) *
           std::exp(-s * std::log(static_cast<double>(k + 1)));
  }
  std::complex<double> eta = -sum / d[n];
  return eta / (1.0 - std::exp((1.0 - s) * std::log(2.0)));
}

inline double lambda_trial_division(std::uint64_t n) {
  if (n < 2) return 0.0;
  for (std::uint64_t p = 2; p * p <= n; ++p) {
    if (n % p == 0) {
      std::uint64_t m = n;
      while (m % p == 0) m /= p;
      return m == 1 ? std::log(static_cast<double>(p)) : 0.0;
    }
  }
  return std::log(static_cast<double>(n));
}

// continued-fraction convergent denominators of x
inline std::vector<std::uint64_t> cf_denominators(double x, int count) {
  std::vector<std::uint64_t> qs;
  std::uint64_t q0 = 1, q1 = 0;
  for (int i = 0; i < count; ++i) {
    double a = std::floor(x);
    std::uint64_t q2 = static_cast<std::uint64_t>(a) * q0 + q1;
    qs.push_back(q2);
    q1 = q0;
    q0 = q2;
    double f = x - a;
    if (f < 1e-15) break;
    x = 1.0 / f;
  }
  return qs;
}

}  // namespace oracles
