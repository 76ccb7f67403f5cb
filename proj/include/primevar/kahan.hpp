#pragma once

#include <complex>

namespace primevar {

// Compensated accumulator for long, cancellation-prone sums.
struct KahanSum {
  double sum = 0.0;
  double c = 0.0;

  void add(double v) {
    double y = v - c;
    double t = sum + y;
    c = (t - sum) - y;
    sum = t;
  }
  double value() const { return sum; }
};

struct KahanComplex {
  KahanSum re, im;

  void add(std::complex<double> z) {
    re.add(z.real());
    im.add(z.imag());
  }
  void add(double r, double i) {
    re.add(r);
    im.add(i);
  }
  std::complex<double> value() const { return {re.value(), im.value()}; }
};

}  // namespace primevar
