#pragma once

#include <complex>

namespace primevar {

// log Gamma and Gamma for complex arguments (Lanczos, g=7), used by the
// completed L-function rotation.  Relative accuracy ~1e-13 on Re z > 0.
std::complex<double> log_gamma(std::complex<double> z);
std::complex<double> gamma_fn(std::complex<double> z);

}  // namespace primevar
