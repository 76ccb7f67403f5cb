// Scalar reference kernels.  These define the semantics the SIMD variants
// must reproduce.

#include <cmath>

#include "primevar/kahan.hpp"
#include "primevar/kernels.hpp"

namespace primevar::kernels {

namespace {

inline double bump_eval(double t) {
  // C^2 bump on [1/2, 2] built from the quintic smoothstep
  // s(u) = u^3 (10 - 15 u + 6 u^2); eta(1) = 1.
  if (t <= 0.5 || t >= 2.0) return 0.0;
  double u = t < 1.0 ? 2.0 * t - 1.0 : 2.0 - t;
  return u * u * u * (10.0 + u * (-15.0 + 6.0 * u));
}

void eta_batch_scalar(WeightKind kind, const double* ts, double* out,
                      std::size_t n) {
  switch (kind) {
    case WeightKind::exp_linear:
      for (std::size_t i = 0; i < n; ++i) out[i] = ts[i] * std::exp(-ts[i]);
      break;
    case WeightKind::gauss_quadratic:
      for (std::size_t i = 0; i < n; ++i) {
        double t2 = ts[i] * ts[i];
        out[i] = t2 * std::exp(-t2);
      }
      break;
    case WeightKind::bump:
      for (std::size_t i = 0; i < n; ++i) out[i] = bump_eval(ts[i]);
      break;
    case WeightKind::generic:
      for (std::size_t i = 0; i < n; ++i) out[i] = 0.0;
      break;
  }
}

void phase_sum_scalar(const double* theta, const double* cre,
                      const double* cim, std::size_t n, double* out_re,
                      double* out_im) {
  KahanSum re, im;
  for (std::size_t i = 0; i < n; ++i) {
    double c = std::cos(theta[i]);
    double s = std::sin(theta[i]);
    re.add(cre[i] * c - cim[i] * s);
    im.add(cre[i] * s + cim[i] * c);
  }
  *out_re = re.value();
  *out_im = im.value();
}

std::uint64_t defect_first_hit_scalar(const double* lam, std::size_t k,
                                      std::uint64_t n0, std::uint64_t n1,
                                      double tol) {
  for (std::uint64_t n = n0; n < n1; ++n) {
    double nd = static_cast<double>(n);
    bool ok = true;
    for (std::size_t j = 0; j < k; ++j) {
      double x = nd * lam[j];
      double d = std::fabs(x - std::nearbyint(x));
      if (d > tol) {
        ok = false;
        break;
      }
    }
    if (ok) return n;
  }
  return 0;
}

}  // namespace

const Funcs& scalar() {
  static const Funcs f{eta_batch_scalar, phase_sum_scalar,
                       defect_first_hit_scalar, "scalar"};
  return f;
}

}  // namespace primevar::kernels
