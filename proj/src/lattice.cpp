// Lattice-based Diophantine search.
//
// The target t can need hundreds of bits (log log x is the headline
// quantity), so no single reduction at full precision is attempted.
// Instead t is assembled in stages t += m * D_i with stage stride
// D_{i+1} = 2^44 D_i.  Each stage solves an approximate CVP on the
// (k+1)-dimensional simultaneous-approximation lattice built from the
// current exact residuals: LLL (long-double GSO over exact int64 basis)
// followed by Babai nearest-plane with randomized roundings; every
// candidate m is scored by the true new defect, computed exactly in
// 128-bit fixed point.  The final defect is re-verified from t itself.

#include <algorithm>
#include <cmath>
#include <random>

#include "primevar/sync.hpp"

namespace primevar::sync {

namespace {

using u128 = unsigned __int128;
using i128 = __int128;

constexpr int kStageBits = 44;
const double kScale = std::ldexp(1.0, kStageBits);  // S = 2^44

double u128_to_unit(u128 v) {
  return std::ldexp(static_cast<double>(static_cast<std::uint64_t>(v >> 64)),
                    -64);
}

// signed fractional value in [-1/2, 1/2)
double fold_signed(u128 v) {
  double x = u128_to_unit(v);
  return (v >> 127) ? x - 1.0 : x;
}

double dist_from_fixed(u128 v) {
  u128 d = (v >> 127) ? (~v) + 1 : v;
  return u128_to_unit(d);
}

// (m * u) mod 2^128 for signed m
u128 mul_mod128(std::int64_t m, u128 u) {
  bool neg = m < 0;
  auto am = static_cast<std::uint64_t>(neg ? -m : m);
  std::uint64_t lo = static_cast<std::uint64_t>(u);
  std::uint64_t hi = static_cast<std::uint64_t>(u >> 64);
  u128 r = static_cast<u128>(am) * lo;
  r += static_cast<u128>(am * hi) << 64;
  return neg ? static_cast<u128>(0) - r : r;
}

// --- integer LLL with long-double GSO -----------------------------------

struct Lattice {
  int d = 0;
  std::vector<std::vector<std::int64_t>> b;  // rows
  std::vector<std::vector<long double>> mu;
  std::vector<long double> Bstar;

  long double dot(int i, int j) const {
    i128 s = 0;
    for (int c = 0; c < d; ++c)
      s += static_cast<i128>(b[i][c]) * b[j][c];
    return static_cast<long double>(s);
  }

  void gso() {
    mu.assign(d, std::vector<long double>(d, 0.0L));
    Bstar.assign(d, 0.0L);
    for (int i = 0; i < d; ++i) {
      Bstar[i] = dot(i, i);
      for (int j = 0; j < i; ++j) {
        long double m = dot(i, j);
        for (int l = 0; l < j; ++l) m -= mu[i][l] * mu[j][l] * Bstar[l];
        mu[i][j] = Bstar[j] > 0.0L ? m / Bstar[j] : 0.0L;
        Bstar[i] -= mu[i][j] * mu[i][j] * Bstar[j];
      }
      if (Bstar[i] < 1e-30L) Bstar[i] = 1e-30L;
    }
  }

  void size_reduce(int i, int j) {
    long double r = std::llroundl(mu[i][j]);
    if (r == 0.0L) return;
    auto ri = static_cast<std::int64_t>(r);
    for (int c = 0; c < d; ++c) b[i][c] -= ri * b[j][c];
    for (int l = 0; l < j; ++l) mu[i][l] -= r * mu[j][l];
    mu[i][j] -= r;
  }

  void reduce(long double delta = 0.99L) {
    gso();
    int k = 1;
    int guard = 0;
    while (k < d) {
      if (++guard > 200000) break;  // safety; quality is verified downstream
      for (int j = k - 1; j >= 0; --j) size_reduce(k, j);
      if (Bstar[k] >= (delta - mu[k][k - 1] * mu[k][k - 1]) * Bstar[k - 1]) {
        ++k;
      } else {
        std::swap(b[k], b[k - 1]);
        gso();  // small dimensions; full recompute is affordable
        k = std::max(k - 1, 1);
      }
    }
    gso();
  }
};

// Babai nearest-plane in GSO-coefficient space: y = sum gamma_i b_i*;
// descending rounds c_i = round(gamma_i), pushing the tail mu-corrections
// down.  Optional randomized rounding for near-half coordinates.
std::vector<std::int64_t> babai(const Lattice& L,
                                const std::vector<long double>& y,
                                std::mt19937_64* rng) {
  int d = L.d;
  std::vector<long double> gamma(d, 0.0L);
  for (int i = 0; i < d; ++i) {
    long double dotbi = 0.0L;
    for (int c = 0; c < d; ++c)
      dotbi += y[c] * static_cast<long double>(L.b[i][c]);
    long double num = dotbi;
    for (int j = 0; j < i; ++j) num -= L.mu[i][j] * gamma[j] * L.Bstar[j];
    gamma[i] = num / L.Bstar[i];
  }
  std::vector<std::int64_t> coef(d, 0);
  for (int i = d - 1; i >= 0; --i) {
    long double ci = gamma[i];
    long double r = std::llroundl(ci);
    if (rng) {
      long double frac = ci - std::floorl(ci);
      std::uniform_real_distribution<double> u(0.0, 1.0);
      if (std::fabsl(frac - 0.5L) < 0.35L)
        r = std::floorl(ci) +
            (u(*rng) < static_cast<double>(frac) ? 1.0L : 0.0L);
    }
    coef[i] = static_cast<std::int64_t>(r);
    for (int j = 0; j < i; ++j) gamma[j] -= r * L.mu[i][j];
  }
  return coef;
}

// continued-fraction denominator search for k = 1
BigUInt cf_denominator(double lambda, double tol, double* defect_out) {
  lambda = lambda - std::floor(lambda);
  BigUInt best(1);
  double best_d = std::fabs(lambda - std::nearbyint(lambda));
  if (lambda == 0.0) {
    *defect_out = 0.0;
    return BigUInt(1);
  }
  double x = lambda;
  std::uint64_t p0 = 0, p1 = 1, q0 = 1, q1 = 0;
  for (int it = 0; it < 64; ++it) {
    double a = std::floor(x);
    auto ai = static_cast<std::uint64_t>(a);
    std::uint64_t p2 = ai * p1 + p0, q2 = ai * q1 + q0;
    if (q2 == 0 || q2 > (1ull << 62)) break;
    double d = std::fabs(q2 * lambda - std::nearbyint(q2 * lambda));
    if (d < best_d || it == 0) {
      best = BigUInt(q2);
      best_d = d;
    }
    if (best_d <= tol) break;
    p0 = p1;
    p1 = p2;
    q0 = q1;
    q1 = q2;
    double fx = x - a;
    if (fx < 1e-18) break;
    x = 1.0 / fx;
  }
  *defect_out = best_d;
  return best;
}

}  // namespace

SyncResult dio_search_lattice(const SyncProblem& p, std::uint64_t seed,
                              int max_stages) {
  if (p.lambdas.size() > 200)
    throw std::invalid_argument("dio_search_lattice: k <= 200");
  double tol = 1.0 / static_cast<double>(p.M);

  // fold out zero/integer frequencies: they are aligned for every t
  std::vector<double> lam;
  for (double l : p.lambdas) {
    double f = l - std::floor(l);
    if (f != 0.0) lam.push_back(f);
  }
  SyncResult res;
  res.method = SearchMethod::lattice;
  if (lam.empty()) {
    res.t = BigUInt(1);
    res.defect = 0.0;
    return res;
  }
  std::size_t k = lam.size();

  if (k == 1) {
    double d = 0.0;
    res.t = cf_denominator(lam[0], tol, &d);
    res.defect = res.t.dist_to_integer(lam[0]);
    if (res.defect > tol)
      throw QualityMiss("dio_search_lattice: continued fraction missed 1/M",
                        res.defect);
    return res;
  }

  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ull);

  // exact signed accumulation of t = sum m_i D_i
  BigUInt t_pos(0), t_neg(0);
  BigUInt D(1);
  std::vector<u128> resid(k, 0);  // frac(t * lam_j) in 2^-128 units
  bool randomized_won = false;

  auto true_defect = [&]() {
    double d = 0.0;
    for (std::size_t j = 0; j < k; ++j)
      d = std::max(d, dist_from_fixed(resid[j]));
    return d;
  };

  int stage = 0;
  double best = true_defect();
  for (; stage < max_stages && best > tol; ++stage) {
    // stage frequencies: frac(D * lam_j), exact
    std::vector<u128> U(k);
    for (std::size_t j = 0; j < k; ++j) U[j] = D.frac_fixed128(lam[j]);

    int d = static_cast<int>(k) + 1;
    Lattice L;
    L.d = d;
    L.b.assign(d, std::vector<std::int64_t>(d, 0));
    L.b[0][0] = 4;  // weight on m keeps the model error ~ defect/8
    for (std::size_t j = 0; j < k; ++j) {
      double f = fold_signed(U[j]);
      L.b[0][static_cast<int>(j) + 1] =
          static_cast<std::int64_t>(std::llround(f * kScale));
    }
    for (std::size_t j = 0; j < k; ++j)
      L.b[static_cast<int>(j) + 1][static_cast<int>(j) + 1] =
          static_cast<std::int64_t>(kScale);
    L.reduce();

    std::vector<long double> y(d, 0.0L);
    for (std::size_t j = 0; j < k; ++j)
      y[static_cast<int>(j) + 1] =
          -static_cast<long double>(fold_signed(resid[j])) * kScale;

    // candidate m values: plain Babai, randomized roundings, small shifts
    auto eval_m = [&](std::int64_t m) {
      double dmax = 0.0;
      for (std::size_t j = 0; j < k; ++j) {
        u128 nr = resid[j] + mul_mod128(m, U[j]);
        dmax = std::max(dmax, dist_from_fixed(nr));
      }
      return dmax;
    };

    std::int64_t best_m = 0;
    double best_after = best;
    bool best_was_random = false;
    auto consider = [&](std::int64_t m, bool random) {
      if (m == 0) return;
      double v = eval_m(m);
      if (v < best_after) {
        best_after = v;
        best_m = m;
        best_was_random = random;
      }
    };

    auto coef = babai(L, y, nullptr);
    consider(coef[0], false);
    for (int r = 0; r < 64; ++r) {
      auto c = babai(L, y, &rng);
      consider(c[0], true);
    }
    // basis vectors themselves and combinations with the plain solution
    for (int i = 0; i < d; ++i) {
      std::int64_t m = L.b[i][0] / 4;
      consider(m, false);
      consider(coef[0] + m, false);
      consider(coef[0] - m, false);
    }

    if (best_m != 0) {
      for (std::size_t j = 0; j < k; ++j)
        resid[j] += mul_mod128(best_m, U[j]);
      BigUInt step = D;
      step.mul_u64(static_cast<std::uint64_t>(
          best_m < 0 ? -best_m : best_m));
      if (best_m > 0)
        t_pos.add(step);
      else
        t_neg.add(step);
      best = best_after;
      if (best_was_random) randomized_won = true;
    }
    D.shl_bits(kStageBits);
  }

  // assemble |t|
  BigUInt t;
  if (BigUInt::cmp(t_pos, t_neg) >= 0) {
    t = t_pos;
    t.sub(t_neg);
  } else {
    t = t_neg;
    t.sub(t_pos);
  }
  if (t.is_zero()) t = BigUInt(1);

  // independent re-verification from t itself
  double verified = 0.0;
  for (std::size_t j = 0; j < k; ++j)
    verified = std::max(verified, t.dist_to_integer(lam[j]));

  res.t = std::move(t);
  res.defect = verified;
  res.stages = stage;
  res.method = randomized_won ? SearchMethod::randomized : SearchMethod::lattice;
  if (verified > tol)
    throw QualityMiss("dio_search_lattice: best defect " +
                          std::to_string(verified) + " misses 1/M = " +
                          std::to_string(tol),
                      verified);
  return res;
}

}  // namespace primevar::sync
