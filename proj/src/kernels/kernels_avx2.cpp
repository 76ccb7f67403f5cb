// AVX2 kernels.  Vector exp/sincos follow the Cephes double-precision
// algorithms (Cody-Waite reduction + rational/polynomial approximation),
// which keeps them within a couple of ulp of libm on the ranges used here.

#include "primevar/kernels.hpp"

#if defined(__x86_64__) || defined(__i386__)

#include <immintrin.h>

#include <cmath>

namespace primevar::kernels {

namespace {

const __m256d kOne = _mm256_set1_pd(1.0);
const __m256d kHalf = _mm256_set1_pd(0.5);

inline __m256d vabs(__m256d x) {
  return _mm256_andnot_pd(_mm256_set1_pd(-0.0), x);
}

// --- exp ---------------------------------------------------------------

inline __m256d exp4(__m256d x) {
  const __m256d log2e = _mm256_set1_pd(1.4426950408889634073599);
  const __m256d c1 = _mm256_set1_pd(6.93145751953125e-1);
  const __m256d c2 = _mm256_set1_pd(1.42860682030941723212e-6);
  const __m256d p0 = _mm256_set1_pd(1.26177193074810590878e-4);
  const __m256d p1 = _mm256_set1_pd(3.02994407707441961300e-2);
  const __m256d p2 = _mm256_set1_pd(9.99999999999999999910e-1);
  const __m256d q0 = _mm256_set1_pd(3.00198505138664455042e-6);
  const __m256d q1 = _mm256_set1_pd(2.52448340349684104192e-3);
  const __m256d q2 = _mm256_set1_pd(2.27265548208155028766e-1);
  const __m256d q3 = _mm256_set1_pd(2.00000000000000000005e0);

  __m256d xin = x;
  x = _mm256_max_pd(_mm256_set1_pd(-708.0), _mm256_min_pd(_mm256_set1_pd(708.0), x));

  __m256d n = _mm256_round_pd(_mm256_mul_pd(x, log2e),
                              _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  __m256d r = _mm256_fnmadd_pd(n, c1, x);
  r = _mm256_fnmadd_pd(n, c2, r);

  __m256d rr = _mm256_mul_pd(r, r);
  __m256d px = _mm256_fmadd_pd(p0, rr, p1);
  px = _mm256_fmadd_pd(px, rr, p2);
  px = _mm256_mul_pd(px, r);
  __m256d qx = _mm256_fmadd_pd(q0, rr, q1);
  qx = _mm256_fmadd_pd(qx, rr, q2);
  qx = _mm256_fmadd_pd(qx, rr, q3);
  __m256d e = _mm256_div_pd(px, _mm256_sub_pd(qx, px));
  e = _mm256_fmadd_pd(_mm256_set1_pd(2.0), e, kOne);

  // scale by 2^n
  __m128i n32 = _mm256_cvtpd_epi32(n);
  __m256i n64 = _mm256_cvtepi32_epi64(n32);
  __m256i bits = _mm256_slli_epi64(
      _mm256_add_epi64(n64, _mm256_set1_epi64x(1023)), 52);
  e = _mm256_mul_pd(e, _mm256_castsi256_pd(bits));

  // flush to zero below the libm underflow threshold
  __m256d tiny = _mm256_cmp_pd(xin, _mm256_set1_pd(-708.0), _CMP_LT_OQ);
  return _mm256_andnot_pd(tiny, e);
}

// --- sincos ------------------------------------------------------------

inline void sincos4(__m256d x, __m256d* s_out, __m256d* c_out) {
  const __m256d two_over_pi = _mm256_set1_pd(0.63661977236758134308);
  const __m256d pio2_1 = _mm256_set1_pd(7.85398125648498535156e-1);
  const __m256d pio2_2 = _mm256_set1_pd(3.77489470793079817668e-8);
  const __m256d pio2_3 = _mm256_set1_pd(2.69515142907905952645e-15);

  __m256d j = _mm256_round_pd(_mm256_mul_pd(x, two_over_pi),
                              _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  __m256d y = _mm256_fnmadd_pd(j, pio2_1, x);
  y = _mm256_fnmadd_pd(j, pio2_2, y);
  y = _mm256_fnmadd_pd(j, pio2_3, y);

  __m256d z = _mm256_mul_pd(y, y);

  // sin polynomial on |y| <= pi/4
  __m256d sp = _mm256_set1_pd(1.58962301576546568060e-10);
  sp = _mm256_fmadd_pd(sp, z, _mm256_set1_pd(-2.50507477628578072866e-8));
  sp = _mm256_fmadd_pd(sp, z, _mm256_set1_pd(2.75573136213857245213e-6));
  sp = _mm256_fmadd_pd(sp, z, _mm256_set1_pd(-1.98412698295895385996e-4));
  sp = _mm256_fmadd_pd(sp, z, _mm256_set1_pd(8.33333333332211858878e-3));
  sp = _mm256_fmadd_pd(sp, z, _mm256_set1_pd(-1.66666666666666307295e-1));
  __m256d sin_y = _mm256_fmadd_pd(_mm256_mul_pd(sp, z), y, y);

  // cos polynomial
  __m256d cp = _mm256_set1_pd(-1.13585365213876817300e-11);
  cp = _mm256_fmadd_pd(cp, z, _mm256_set1_pd(2.08757008419747316778e-9));
  cp = _mm256_fmadd_pd(cp, z, _mm256_set1_pd(-2.75573141792967388112e-7));
  cp = _mm256_fmadd_pd(cp, z, _mm256_set1_pd(2.48015872888517179954e-5));
  cp = _mm256_fmadd_pd(cp, z, _mm256_set1_pd(-1.38888888888730564116e-3));
  cp = _mm256_fmadd_pd(cp, z, _mm256_set1_pd(4.16666666666665929218e-2));
  __m256d cos_y = _mm256_fmadd_pd(_mm256_mul_pd(cp, z), z,
                                  _mm256_fnmadd_pd(z, kHalf, kOne));

  // quadrant fixups from j mod 4
  __m128i j32 = _mm256_cvtpd_epi32(j);
  __m256i j64 = _mm256_cvtepi32_epi64(j32);
  __m256i bit0 = _mm256_and_si256(j64, _mm256_set1_epi64x(1));
  __m256i bit1 = _mm256_and_si256(j64, _mm256_set1_epi64x(2));
  __m256i bit1p = _mm256_and_si256(_mm256_add_epi64(j64, _mm256_set1_epi64x(1)),
                                   _mm256_set1_epi64x(2));

  __m256d swap = _mm256_castsi256_pd(
      _mm256_cmpeq_epi64(bit0, _mm256_set1_epi64x(1)));
  __m256d s = _mm256_blendv_pd(sin_y, cos_y, swap);
  __m256d c = _mm256_blendv_pd(cos_y, sin_y, swap);

  __m256d sgn_s = _mm256_castsi256_pd(
      _mm256_cmpeq_epi64(bit1, _mm256_set1_epi64x(2)));
  __m256d sgn_c = _mm256_castsi256_pd(
      _mm256_cmpeq_epi64(bit1p, _mm256_set1_epi64x(2)));
  s = _mm256_xor_pd(s, _mm256_and_pd(sgn_s, _mm256_set1_pd(-0.0)));
  c = _mm256_xor_pd(c, _mm256_and_pd(sgn_c, _mm256_set1_pd(-0.0)));

  *s_out = s;
  *c_out = c;
}

// --- kernels -----------------------------------------------------------

inline double bump_scalar(double t) {
  if (t <= 0.5 || t >= 2.0) return 0.0;
  double u = t < 1.0 ? 2.0 * t - 1.0 : 2.0 - t;
  return u * u * u * (10.0 + u * (-15.0 + 6.0 * u));
}

void eta_batch_avx2(WeightKind kind, const double* ts, double* out,
                    std::size_t n) {
  std::size_t i = 0;
  switch (kind) {
    case WeightKind::exp_linear:
      for (; i + 4 <= n; i += 4) {
        __m256d t = _mm256_loadu_pd(ts + i);
        __m256d e = exp4(_mm256_sub_pd(_mm256_setzero_pd(), t));
        _mm256_storeu_pd(out + i, _mm256_mul_pd(t, e));
      }
      for (; i < n; ++i) out[i] = ts[i] * std::exp(-ts[i]);
      break;
    case WeightKind::gauss_quadratic:
      for (; i + 4 <= n; i += 4) {
        __m256d t = _mm256_loadu_pd(ts + i);
        __m256d t2 = _mm256_mul_pd(t, t);
        __m256d e = exp4(_mm256_sub_pd(_mm256_setzero_pd(), t2));
        _mm256_storeu_pd(out + i, _mm256_mul_pd(t2, e));
      }
      for (; i < n; ++i) {
        double t2 = ts[i] * ts[i];
        out[i] = t2 * std::exp(-t2);
      }
      break;
    case WeightKind::bump:
      for (; i + 4 <= n; i += 4) {
        __m256d t = _mm256_loadu_pd(ts + i);
        __m256d lo = _mm256_cmp_pd(t, _mm256_set1_pd(0.5), _CMP_GT_OQ);
        __m256d hi = _mm256_cmp_pd(t, _mm256_set1_pd(2.0), _CMP_LT_OQ);
        __m256d in = _mm256_and_pd(lo, hi);
        __m256d rising = _mm256_cmp_pd(t, kOne, _CMP_LT_OQ);
        __m256d u = _mm256_blendv_pd(
            _mm256_sub_pd(_mm256_set1_pd(2.0), t),
            _mm256_fmsub_pd(_mm256_set1_pd(2.0), t, kOne), rising);
        __m256d p = _mm256_fmadd_pd(_mm256_set1_pd(6.0), u,
                                    _mm256_set1_pd(-15.0));
        p = _mm256_fmadd_pd(p, u, _mm256_set1_pd(10.0));
        __m256d u3 = _mm256_mul_pd(_mm256_mul_pd(u, u), u);
        _mm256_storeu_pd(out + i, _mm256_and_pd(in, _mm256_mul_pd(u3, p)));
      }
      for (; i < n; ++i) out[i] = bump_scalar(ts[i]);
      break;
    case WeightKind::generic:
      for (; i < n; ++i) out[i] = 0.0;
      break;
  }
}

void phase_sum_avx2(const double* theta, const double* cre, const double* cim,
                    std::size_t n, double* out_re, double* out_im) {
  __m256d sum_re = _mm256_setzero_pd(), comp_re = _mm256_setzero_pd();
  __m256d sum_im = _mm256_setzero_pd(), comp_im = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d th = _mm256_loadu_pd(theta + i);
    __m256d s, c;
    sincos4(th, &s, &c);
    __m256d ar = _mm256_loadu_pd(cre + i);
    __m256d ai = _mm256_loadu_pd(cim + i);
    __m256d vr = _mm256_fnmadd_pd(ai, s, _mm256_mul_pd(ar, c));
    __m256d vi = _mm256_fmadd_pd(ar, s, _mm256_mul_pd(ai, c));
    // per-lane Kahan step
    __m256d y = _mm256_sub_pd(vr, comp_re);
    __m256d t = _mm256_add_pd(sum_re, y);
    comp_re = _mm256_sub_pd(_mm256_sub_pd(t, sum_re), y);
    sum_re = t;
    y = _mm256_sub_pd(vi, comp_im);
    t = _mm256_add_pd(sum_im, y);
    comp_im = _mm256_sub_pd(_mm256_sub_pd(t, sum_im), y);
    sum_im = t;
  }
  alignas(32) double lr[4], li[4];
  _mm256_store_pd(lr, sum_re);
  _mm256_store_pd(li, sum_im);
  KahanSum re, im;
  for (int l = 0; l < 4; ++l) {
    re.add(lr[l]);
    im.add(li[l]);
  }
  for (; i < n; ++i) {
    double c = std::cos(theta[i]);
    double s = std::sin(theta[i]);
    re.add(cre[i] * c - cim[i] * s);
    im.add(cre[i] * s + cim[i] * c);
  }
  *out_re = re.value();
  *out_im = im.value();
}

std::uint64_t defect_first_hit_avx2(const double* lam, std::size_t k,
                                    std::uint64_t n0, std::uint64_t n1,
                                    double tol) {
  const __m256d vtol = _mm256_set1_pd(tol);
  std::uint64_t n = n0;
  for (; n + 4 <= n1; n += 4) {
    __m256d nd = _mm256_set_pd(static_cast<double>(n + 3),
                               static_cast<double>(n + 2),
                               static_cast<double>(n + 1),
                               static_cast<double>(n));
    __m256d dmax = _mm256_setzero_pd();
    for (std::size_t j = 0; j < k; ++j) {
      __m256d x = _mm256_mul_pd(nd, _mm256_set1_pd(lam[j]));
      __m256d r = _mm256_round_pd(
          x, _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
      dmax = _mm256_max_pd(dmax, vabs(_mm256_sub_pd(x, r)));
    }
    int hits = _mm256_movemask_pd(_mm256_cmp_pd(dmax, vtol, _CMP_LE_OQ));
    if (hits) {
      for (int l = 0; l < 4; ++l)
        if (hits & (1 << l)) return n + static_cast<std::uint64_t>(l);
    }
  }
  for (; n < n1; ++n) {
    double nd = static_cast<double>(n);
    bool ok = true;
    for (std::size_t j = 0; j < k; ++j) {
      double x = nd * lam[j];
      if (std::fabs(x - std::nearbyint(x)) > tol) {
        ok = false;
        break;
      }
    }
    if (ok) return n;
  }
  return 0;
}

}  // namespace

const Funcs* avx2_impl() {
  static const Funcs f{eta_batch_avx2, phase_sum_avx2, defect_first_hit_avx2,
                       "avx2"};
  return &f;
}

}  // namespace primevar::kernels

#else  // non-x86 build

namespace primevar::kernels {
const Funcs* avx2_impl() { return nullptr; }
}  // namespace primevar::kernels

#endif
