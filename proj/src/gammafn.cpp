#include "primevar/gammafn.hpp"

#include <cmath>

namespace primevar {

namespace {
constexpr double kG = 7.0;
constexpr double kCoef[9] = {
    0.99999999999980993,      676.5203681218851,     -1259.1392167224028,
    771.32342877765313,       -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,     9.9843695780195716e-6, 1.5056327351493116e-7};
constexpr double kLogSqrt2Pi = 0.91893853320467274178;
constexpr double kPi = 3.14159265358979323846;
}  // namespace

std::complex<double> log_gamma(std::complex<double> z) {
  if (z.real() < 0.5) {
    // reflection: log Gamma(z) = log(pi / sin(pi z)) - log Gamma(1 - z)
    return std::log(kPi) - std::log(std::sin(kPi * z)) - log_gamma(1.0 - z);
  }
  z -= 1.0;
  std::complex<double> x = kCoef[0];
  for (int i = 1; i < 9; ++i) x += kCoef[i] / (z + static_cast<double>(i));
  std::complex<double> t = z + kG + 0.5;
  return kLogSqrt2Pi + (z + 0.5) * std::log(t) - t + std::log(x);
}

std::complex<double> gamma_fn(std::complex<double> z) {
  return std::exp(log_gamma(z));
}

}  // namespace primevar
