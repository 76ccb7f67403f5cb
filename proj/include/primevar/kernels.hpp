#pragma once

// Data-parallel inner loops used by the hot paths: batch weight evaluation
// over n/x grids, phase sums over zero ordinates, and distance-to-integer
// scans for the Diophantine search.  Scalar reference implementations plus
// AVX2 variants selected at runtime; both are exposed so tests can check
// equivalence directly.

#include <cstddef>
#include <cstdint>

namespace primevar::kernels {

enum class WeightKind { exp_linear, gauss_quadratic, bump, generic };

struct Funcs {
  // out[i] = eta(ts[i]) for the given preset kind (generic not supported here)
  void (*eta_batch)(WeightKind kind, const double* ts, double* out,
                    std::size_t n);
  // compensated sum of (cre[i] + i*cim[i]) * exp(i*theta[i]); |theta| <= ~1e8
  void (*phase_sum)(const double* theta, const double* cre, const double* cim,
                    std::size_t n, double* out_re, double* out_im);
  // smallest n in [n0, n1) with max_j ||n*lam[j]|| <= tol, or 0 if none.
  // Requires n1 <= 2^52.
  std::uint64_t (*defect_first_hit)(const double* lam, std::size_t k,
                                    std::uint64_t n0, std::uint64_t n1,
                                    double tol);
  const char* name;
};

const Funcs& scalar();
const Funcs* avx2();     // nullptr when unavailable (build or cpu)
const Funcs& active();   // runtime-dispatched best
bool avx2_available();

}  // namespace primevar::kernels
