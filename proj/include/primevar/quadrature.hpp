#pragma once

#include <complex>
#include <functional>
#include <vector>

namespace primevar::quadrature {

struct Result {
  std::complex<double> value{0.0, 0.0};
  double error = 0.0;       // estimated absolute error
  bool converged = false;
  int intervals = 0;        // panels in the final partition
};

// Adaptive Gauss-Kronrod (G7,K15) on [a,b] for a complex-valued integrand.
// Stops when err <= max(abs_tol, rel_tol*|value|) or the panel budget runs out.
Result adaptive_gk(const std::function<std::complex<double>(double)>& f,
                   double a, double b,
                   double rel_tol = 1e-10, double abs_tol = 0.0,
                   int max_panels = 20000,
                   const std::vector<double>& breakpoints = {});

}  // namespace primevar::quadrature
