#include <cmath>
#include <complex>

#include "doctest.h"
#include "primevar/quadrature.hpp"

using primevar::quadrature::adaptive_gk;

TEST_CASE("polynomial and trig integrals") {
  auto r = adaptive_gk([](double t) { return std::complex<double>(t * t, 0.0); },
                       0.0, 3.0);
  CHECK(r.converged);
  CHECK(r.value.real() == doctest::Approx(9.0).epsilon(1e-12));

  r = adaptive_gk([](double t) { return std::complex<double>(std::sin(t), 0.0); },
                  0.0, 3.14159265358979323846);
  CHECK(r.value.real() == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("oscillatory complex integrand") {
  // int_0^1 e^{i w t} dt = (e^{iw} - 1)/(iw)
  double w = 200.0;
  auto r = adaptive_gk(
      [&](double t) { return std::exp(std::complex<double>(0.0, w * t)); },
      0.0, 1.0, 1e-12);
  std::complex<double> expect =
      (std::exp(std::complex<double>(0.0, w)) - 1.0) /
      std::complex<double>(0.0, w);
  CHECK(std::abs(r.value - expect) <= 1e-11);
}

TEST_CASE("endpoint kink with breakpoint hint") {
  auto f = [](double t) {
    return std::complex<double>(std::fabs(t - 0.3), 0.0);
  };
  auto r = adaptive_gk(f, 0.0, 1.0, 1e-12, 0.0, 20000, {0.3});
  // int |t-0.3| dt on [0,1] = 0.3^2/2 + 0.7^2/2
  CHECK(r.value.real() == doctest::Approx(0.045 + 0.245).epsilon(1e-13));
}

TEST_CASE("budget exhaustion reported") {
  // nowhere-smooth-enough integrand with absurd budget
  auto r = adaptive_gk(
      [](double t) {
        return std::complex<double>(std::sin(1.0 / (t + 1e-9)), 0.0);
      },
      0.0, 1.0, 1e-14, 0.0, 8);
  CHECK_FALSE(r.converged);
}
