// Residue side and character side of V_eta and G_eta.  The two sides are an
// exact finite identity (Parseval over the character group), so they are
// accumulated through different arithmetic paths and compared at 1e-8
// relative in the tests.

#include "primevar/variance.hpp"

#include <cmath>
#include <complex>
#include <numeric>
#include <vector>

#include "primevar/characters.hpp"
#include "primevar/kahan.hpp"
#include "primevar/kernels.hpp"
#include "primevar/primesums.hpp"
#include "primevar/quadrature.hpp"

namespace primevar::variance {

namespace {

// per-residue-class weighted sums: S_a = sum_{n = a (q)} Lambda(n) eta(n/x)
// (psi kind) and T_a over primes only (theta kind)
struct ClassSums {
  std::vector<double> psi, theta;
};

ClassSums class_sums(const weights::SmoothWeight& w, double x,
                     std::uint64_t q, int threads, double tol_rel) {
  auto [limit, cert] = primesums::truncation_limit(w, x, tol_rel);
  (void)cert;
  constexpr std::uint64_t kSeg = 1ull << 22;
  std::uint64_t nseg_hint = limit >= 2 ? (limit - 1) / kSeg + 2 : 1;
  std::vector<std::vector<double>> ppsi(nseg_hint), pth(nseg_hint);
  const auto& kern = kernels::active();

  primesums::lambda_stream(
      limit, false,
      [&](std::uint64_t seg, const std::uint64_t* ns, const double* logs,
          std::size_t cnt) {
        thread_local std::vector<double> ts, etas;
        ts.resize(cnt);
        etas.resize(cnt);
        for (std::size_t i = 0; i < cnt; ++i)
          ts[i] = static_cast<double>(ns[i]) / x;
        if (w.kind != kernels::WeightKind::generic)
          kern.eta_batch(w.kind, ts.data(), etas.data(), cnt);
        else
          for (std::size_t i = 0; i < cnt; ++i) etas[i] = w.eval(ts[i]);
        auto& vp = ppsi[seg];
        auto& vt = pth[seg];
        vp.assign(q, 0.0);
        vt.assign(q, 0.0);
        for (std::size_t i = 0; i < cnt; ++i) {
          double v = logs[i] * etas[i];
          std::uint64_t a = ns[i] % q;
          vp[a] += v;
          double ln = std::log(static_cast<double>(ns[i]));
          if (std::fabs(ln - logs[i]) < 1e-12 * ln) vt[a] += v;
        }
      },
      threads);

  std::vector<KahanSum> accp(q), acct(q);
  for (std::uint64_t s = 0; s < nseg_hint; ++s) {
    if (ppsi[s].empty()) continue;
    for (std::uint64_t a = 0; a < q; ++a) {
      accp[a].add(ppsi[s][a]);
      acct[a].add(pth[s][a]);
    }
  }
  ClassSums cs;
  cs.psi.resize(q);
  cs.theta.resize(q);
  for (std::uint64_t a = 0; a < q; ++a) {
    cs.psi[a] = accp[a].value();
    cs.theta[a] = acct[a].value();
  }
  return cs;
}

// character-side sums psi_eta(x, chi) / theta_eta(x, chi) for every
// character mod q in label order, in one streaming pass
struct CharSums {
  std::vector<std::complex<double>> psi, theta;
};

CharSums char_sums(const weights::SmoothWeight& w, double x, std::uint64_t q,
                   int threads, double tol_rel) {
  auto chars = characters::character_group(q);
  std::size_t nchi = chars.size();
  std::vector<std::vector<std::complex<double>>> tables(nchi);
  for (std::size_t c = 0; c < nchi; ++c) tables[c] = chars[c].value_table();

  auto [limit, cert] = primesums::truncation_limit(w, x, tol_rel);
  (void)cert;
  constexpr std::uint64_t kSeg = 1ull << 22;
  std::uint64_t nseg_hint = limit >= 2 ? (limit - 1) / kSeg + 2 : 1;
  std::vector<std::vector<KahanComplex>> ppsi(nseg_hint), pth(nseg_hint);
  const auto& kern = kernels::active();

  primesums::lambda_stream(
      limit, false,
      [&](std::uint64_t seg, const std::uint64_t* ns, const double* logs,
          std::size_t cnt) {
        thread_local std::vector<double> ts, etas;
        ts.resize(cnt);
        etas.resize(cnt);
        for (std::size_t i = 0; i < cnt; ++i)
          ts[i] = static_cast<double>(ns[i]) / x;
        if (w.kind != kernels::WeightKind::generic)
          kern.eta_batch(w.kind, ts.data(), etas.data(), cnt);
        else
          for (std::size_t i = 0; i < cnt; ++i) etas[i] = w.eval(ts[i]);
        auto& vp = ppsi[seg];
        auto& vt = pth[seg];
        vp.assign(nchi, {});
        vt.assign(nchi, {});
        for (std::size_t i = 0; i < cnt; ++i) {
          double v = logs[i] * etas[i];
          std::uint64_t a = ns[i] % q;
          double ln = std::log(static_cast<double>(ns[i]));
          bool is_prime = std::fabs(ln - logs[i]) < 1e-12 * ln;
          for (std::size_t c = 0; c < nchi; ++c) {
            const std::complex<double>& ch = tables[c][a];
            if (ch.real() == 0.0 && ch.imag() == 0.0) continue;
            vp[c].add(v * ch.real(), v * ch.imag());
            if (is_prime) vt[c].add(v * ch.real(), v * ch.imag());
          }
        }
      },
      threads);

  std::vector<KahanComplex> accp(nchi), acct(nchi);
  for (std::uint64_t s = 0; s < nseg_hint; ++s) {
    if (ppsi[s].empty()) continue;
    for (std::size_t c = 0; c < nchi; ++c) {
      accp[c].add(ppsi[s][c].value());
      acct[c].add(pth[s][c].value());
    }
  }
  CharSums out;
  out.psi.resize(nchi);
  out.theta.resize(nchi);
  for (std::size_t c = 0; c < nchi; ++c) {
    out.psi[c] = accp[c].value();
    out.theta[c] = acct[c].value();
  }
  return out;
}

double mellin_at_one(const weights::SmoothWeight& w) {
  return weights::mellin(w, {1.0, 0.0}).real();
}

}  // namespace

double v_eta_residue_side(const weights::SmoothWeight& w, double x,
                          std::uint64_t q, int threads, double tol_rel) {
  auto cs = class_sums(w, x, q, threads, tol_rel);
  KahanSum mean;
  std::uint64_t phi = 0;
  for (std::uint64_t a = 0; a < q; ++a)
    if (std::gcd(a, q) == 1) {
      mean.add(cs.psi[a]);
      ++phi;
    }
  double mu = mean.value() / static_cast<double>(phi);
  KahanSum v;
  for (std::uint64_t a = 0; a < q; ++a)
    if (std::gcd(a, q) == 1) {
      double d = cs.psi[a] - mu;
      v.add(d * d);
    }
  return v.value();
}

double v_eta_parseval_side(const weights::SmoothWeight& w, double x,
                           std::uint64_t q, int threads, double tol_rel) {
  auto cs = char_sums(w, x, q, threads, tol_rel);
  auto chars = characters::character_group(q);
  KahanSum v;
  for (std::size_t c = 0; c < chars.size(); ++c) {
    if (chars[c].is_principal()) continue;
    v.add(std::norm(cs.psi[c]));
  }
  return v.value() / static_cast<double>(chars.size());
}

std::pair<double, double> g_eta_both_sides(const weights::SmoothWeight& w,
                                           double x, std::uint64_t q,
                                           int threads, double tol_rel) {
  double K = mellin_at_one(w) * x;
  double phi = static_cast<double>(characters::CharacterGroup::get(q)->phi());

  auto cs = class_sums(w, x, q, threads, tol_rel);
  KahanSum res;
  for (std::uint64_t a = 0; a < q; ++a)
    if (std::gcd(a, q) == 1) {
      double d = cs.theta[a] - K / phi;
      res.add(d * d);
    }

  auto ch = char_sums(w, x, q, threads, tol_rel);
  auto chars = characters::character_group(q);
  KahanSum par;
  for (std::size_t c = 0; c < chars.size(); ++c) {
    std::complex<double> t = ch.theta[c];
    if (chars[c].is_principal()) t -= K;
    par.add(std::norm(t));
  }
  return {res.value(), par.value() / phi};
}

std::pair<double, double> classical_variances(double x, std::uint64_t q,
                                              int threads) {
  auto cs = primesums::classical_sums(x, q, threads);
  double phi = 0.0;
  KahanSum coprime_psi;
  for (std::uint64_t a = 0; a < q; ++a)
    if (std::gcd(a, q) == 1) {
      phi += 1.0;
      coprime_psi.add(cs.psi_class[a]);
    }
  double mu = coprime_psi.value() / phi;
  KahanSum vl, g;
  for (std::uint64_t a = 0; a < q; ++a)
    if (std::gcd(a, q) == 1) {
      double dv = cs.psi_class[a] - mu;
      vl.add(dv * dv);
      double dg = cs.theta_class[a] - x / phi;
      g.add(dg * dg);
    }
  return {vl.value(), g.value()};
}

VarianceReport compute(const weights::SmoothWeight& w, double x,
                       std::uint64_t q, bool with_classical, int threads,
                       double tol_rel) {
  VarianceReport r;
  r.x = x;
  r.q = q;
  r.weight = w.name;
  r.mellin_at_1 = mellin_at_one(w);
  double K = r.mellin_at_1 * x;
  double phi = static_cast<double>(characters::CharacterGroup::get(q)->phi());

  auto cs = class_sums(w, x, q, threads, tol_rel);
  {
    KahanSum mean;
    for (std::uint64_t a = 0; a < q; ++a)
      if (std::gcd(a, q) == 1) mean.add(cs.psi[a]);
    double mu = mean.value() / phi;
    KahanSum v, g;
    for (std::uint64_t a = 0; a < q; ++a)
      if (std::gcd(a, q) == 1) {
        double d = cs.psi[a] - mu;
        v.add(d * d);
        double dg = cs.theta[a] - K / phi;
        g.add(dg * dg);
      }
    r.v_eta_residue = v.value();
    r.g_eta_residue = g.value();
  }

  auto ch = char_sums(w, x, q, threads, tol_rel);
  {
    auto chars = characters::character_group(q);
    KahanSum v, g;
    for (std::size_t c = 0; c < chars.size(); ++c) {
      std::complex<double> t = ch.theta[c];
      if (chars[c].is_principal())
        t -= K;
      else
        v.add(std::norm(ch.psi[c]));
      g.add(std::norm(t));
    }
    r.v_eta_parseval = v.value() / phi;
    r.g_eta_parseval = g.value() / phi;
  }

  if (with_classical) {
    auto [vl, g] = classical_variances(x, q, threads);
    r.v_classical = vl;
    r.g_classical = g;
  }

  double lq = std::log(static_cast<double>(q));
  r.hooley_ratio = r.v_eta_residue / (x * lq);
  r.grh_ratio = r.v_eta_residue / (x * lq * lq);
  return r;
}

}  // namespace primevar::variance
