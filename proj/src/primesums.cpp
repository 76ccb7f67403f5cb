// Segmented sieve (2^22 segments, odd bitmap) feeding the weighted character
// sums.  Accumulation is compensated throughout; per-segment partials are
// reduced in segment order, so results do not depend on the thread count.

#include "primevar/primesums.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <thread>

#include "primevar/kahan.hpp"
#include "primevar/kernels.hpp"
#include "primevar/parallel.hpp"

namespace primevar::primesums {

namespace {

constexpr std::uint64_t kSegmentSize = 1ull << 22;

const std::vector<std::uint32_t>& base_primes(std::uint64_t up_to) {
  static std::mutex mu;
  static std::vector<std::uint32_t> primes;
  static std::uint64_t have = 0;
  std::lock_guard<std::mutex> lk(mu);
  if (up_to <= have) return primes;
  std::uint64_t n = std::max<std::uint64_t>(up_to, 1 << 16);
  std::vector<bool> comp(n + 1, false);
  primes.clear();
  for (std::uint64_t i = 2; i <= n; ++i) {
    if (!comp[i]) {
      primes.push_back(static_cast<std::uint32_t>(i));
      for (std::uint64_t j = i * i; j <= n; j += i) comp[j] = true;
    }
  }
  have = n;
  return primes;
}

// Sieve [lo, hi) (odd bitmap) and append primes to out.
void sieve_segment(std::uint64_t lo, std::uint64_t hi,
                   const std::vector<std::uint32_t>& primes,
                   std::vector<std::uint8_t>& composite,
                   std::vector<std::uint64_t>& out) {
  std::uint64_t count = (hi - lo + 1) / 2;
  composite.assign(count, 0);
  for (std::uint32_t p : primes) {
    if (p == 2) continue;
    if (static_cast<std::uint64_t>(p) * p >= hi) break;
    std::uint64_t start = std::max<std::uint64_t>(
        static_cast<std::uint64_t>(p) * p, (lo + p - 1) / p * p);
    if (start % 2 == 0) start += p;
    for (std::uint64_t m = start; m < hi; m += 2ull * p)
      composite[(m - lo) / 2] = 1;
  }
  std::uint64_t first = lo % 2 == 0 ? lo + 1 : lo;
  for (std::uint64_t n = first; n < hi; n += 2)
    if (n > 1 && !composite[(n - lo) / 2]) out.push_back(n);
}

}  // namespace

std::uint64_t lambda_stream(std::uint64_t limit, bool primes_only,
                            const SegmentFn& fn, int threads) {
  if (limit < 2) return 0;
  std::uint64_t root =
      static_cast<std::uint64_t>(std::sqrt(static_cast<double>(limit))) + 2;
  const auto& primes = base_primes(root);

  std::uint64_t nseg = (limit - 1) / kSegmentSize + 1;
  if (threads <= 0) threads = default_threads();
  threads = static_cast<int>(
      std::min<std::uint64_t>(static_cast<std::uint64_t>(threads), nseg));

  std::atomic<std::uint64_t> next_seg{0};
  auto worker = [&]() {
    std::vector<std::uint8_t> composite;
    std::vector<std::uint64_t> ns;
    std::vector<double> logs;
    for (;;) {
      std::uint64_t seg = next_seg.fetch_add(1);
      if (seg >= nseg) return;
      std::uint64_t lo = 2 + seg * kSegmentSize;
      std::uint64_t hi = std::min(limit + 1, lo + kSegmentSize);
      std::vector<std::uint64_t> found;
      if (lo <= 2 && hi > 2) found.push_back(2);
      sieve_segment(lo, hi, primes, composite, found);
      ns.clear();
      logs.clear();
      for (std::uint64_t p : found) {
        ns.push_back(p);
        logs.push_back(std::log(static_cast<double>(p)));
      }
      if (!primes_only) {
        for (std::uint32_t p : primes) {
          std::uint64_t pk = static_cast<std::uint64_t>(p) * p;
          if (pk >= hi) break;
          double lp = std::log(static_cast<double>(p));
          while (pk < hi) {
            if (pk >= lo) {
              ns.push_back(pk);
              logs.push_back(lp);
            }
            if (pk > hi / p) break;
            pk *= p;
          }
        }
      }
      if (!ns.empty()) fn(seg, ns.data(), logs.data(), ns.size());
    }
  };

  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  return nseg;
}

std::pair<std::uint64_t, double> truncation_limit(
    const weights::SmoothWeight& w, double x, double tol_rel) {
  if (w.support.compact) {
    auto y = static_cast<std::uint64_t>(std::ceil(x * w.support.t_max));
    return {y, 0.0};
  }
  // tail_{n > ux} Lambda(n) eta(n/x) <= 1.04 * (8/7) * u eta(u) * x for
  // u >= 10, from psi(y) <= 1.04 y and the decreasing t^8 majorant.
  double u = 10.0;
  for (;;) {
    double cert = 1.04 * (8.0 / 7.0) * u * w.eval(u) * x;
    if (cert < tol_rel * x || u > 1e6) {
      auto y = static_cast<std::uint64_t>(std::ceil(x * u));
      return {y, cert};
    }
    u *= 2.0;
  }
}

namespace {

WeightedPrimeSum weighted_sum(const weights::SmoothWeight& w, double x,
                              const characters::DirichletCharacter& chi,
                              SumKind kind, int threads, double tol_rel) {
  if (x < 1.0) throw std::invalid_argument("weighted sum: x >= 1 required");
  if (x > 1e9)
    throw ScaleTooLarge(
        "direct sums support x <= 1e9; use the explicit-formula evaluator");
  auto [limit, cert] = truncation_limit(w, x, tol_rel);

  WeightedPrimeSum out;
  out.x = x;
  out.kind = kind;
  out.truncation_bound = cert;
  out.q = chi.q();
  out.label = chi.label();

  auto table = chi.value_table();
  std::uint64_t q = chi.q();
  const auto& kern = kernels::active();

  std::uint64_t nseg_hint = (limit - 1) / kSegmentSize + 2;
  std::vector<KahanComplex> partial(nseg_hint);

  lambda_stream(
      limit, kind == SumKind::theta_eta,
      [&](std::uint64_t seg, const std::uint64_t* ns, const double* logs,
          std::size_t cnt) {
        thread_local std::vector<double> ts, etas;
        ts.resize(cnt);
        etas.resize(cnt);
        for (std::size_t i = 0; i < cnt; ++i)
          ts[i] = static_cast<double>(ns[i]) / x;
        if (w.kind != kernels::WeightKind::generic) {
          kern.eta_batch(w.kind, ts.data(), etas.data(), cnt);
        } else {
          for (std::size_t i = 0; i < cnt; ++i) etas[i] = w.eval(ts[i]);
        }
        KahanComplex& acc = partial[seg];
        for (std::size_t i = 0; i < cnt; ++i) {
          const std::complex<double>& c = table[ns[i] % q];
          if (c.real() == 0.0 && c.imag() == 0.0) continue;
          double v = logs[i] * etas[i];
          acc.add(v * c.real(), v * c.imag());
        }
      },
      threads);

  // reduce in segment order
  KahanSum re, im;
  for (auto& p : partial) {
    re.add(p.re.value());
    im.add(p.im.value());
  }
  out.value = {re.value(), im.value()};
  return out;
}

}  // namespace

WeightedPrimeSum psi_eta_direct(const weights::SmoothWeight& w, double x,
                                const characters::DirichletCharacter& chi,
                                int threads, double tol_rel) {
  return weighted_sum(w, x, chi, SumKind::psi_eta, threads, tol_rel);
}

WeightedPrimeSum theta_eta_direct(const weights::SmoothWeight& w, double x,
                                  const characters::DirichletCharacter& chi,
                                  int threads, double tol_rel) {
  return weighted_sum(w, x, chi, SumKind::theta_eta, threads, tol_rel);
}

ClassicalSums classical_sums(double x, std::uint64_t q, int threads) {
  if (x > 1e9) throw ScaleTooLarge("classical_sums: x <= 1e9");
  if (q > 10000) throw ScaleTooLarge("classical_sums: q <= 1e4");
  ClassicalSums cs;
  cs.q = q;
  cs.x = x;
  auto limit = static_cast<std::uint64_t>(std::floor(x));
  std::uint64_t nseg_hint = limit >= 2 ? (limit - 1) / kSegmentSize + 2 : 1;
  std::vector<std::vector<double>> pth(nseg_hint), pps(nseg_hint);

  lambda_stream(
      limit, false,
      [&](std::uint64_t seg, const std::uint64_t* ns, const double* logs,
          std::size_t cnt) {
        auto& th = pth[seg];
        auto& ps = pps[seg];
        th.assign(q, 0.0);
        ps.assign(q, 0.0);
        for (std::size_t i = 0; i < cnt; ++i) {
          std::uint64_t a = ns[i] % q;
          ps[a] += logs[i];
          double ln = std::log(static_cast<double>(ns[i]));
          if (std::fabs(ln - logs[i]) < 1e-12 * ln) th[a] += logs[i];
        }
      },
      threads);

  std::vector<KahanSum> th(q), ps(q);
  for (std::uint64_t s = 0; s < nseg_hint; ++s) {
    if (pth[s].empty()) continue;
    for (std::uint64_t a = 0; a < q; ++a) {
      th[a].add(pth[s][a]);
      ps[a].add(pps[s][a]);
    }
  }
  cs.theta_class.resize(q);
  cs.psi_class.resize(q);
  for (std::uint64_t a = 0; a < q; ++a) {
    cs.theta_class[a] = th[a].value();
    cs.psi_class[a] = ps[a].value();
  }
  return cs;
}

double lambda_naive(std::uint64_t n) {
  if (n < 2) return 0.0;
  for (std::uint64_t p = 2; p * p <= n; ++p) {
    if (n % p == 0) {
      std::uint64_t m = n;
      while (m % p == 0) m /= p;
      return m == 1 ? std::log(static_cast<double>(p)) : 0.0;
    }
  }
  return std::log(static_cast<double>(n));
}

}  // namespace primevar::primesums
