#pragma once

// Segmented sieving and the weighted sums psi_eta(x, chi), theta_eta(x, chi)
// with certified truncation of the infinite n-sum.

#include <complex>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include "primevar/characters.hpp"
#include "primevar/weights.hpp"

namespace primevar::primesums {

struct ScaleTooLarge : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class SumKind { psi_eta, theta_eta };

struct WeightedPrimeSum {
  std::complex<double> value{0.0, 0.0};
  double x = 0.0;
  SumKind kind = SumKind::psi_eta;
  double truncation_bound = 0.0;
  std::uint64_t q = 1;
  std::uint64_t label = 0;
};

// Streams (n, log p) pairs over [2, limit]: primes always (in ascending
// order), prime powers appended per segment unless primes_only.  fn may be
// called concurrently from worker threads, once per non-empty segment, with
// the segment index; callers reduce per-segment partials in index order.
// Returns the segment count.
using SegmentFn = std::function<void(std::uint64_t seg, const std::uint64_t*,
                                     const double*, std::size_t)>;
std::uint64_t lambda_stream(std::uint64_t limit, bool primes_only,
                            const SegmentFn& fn, int threads = 0);

// Truncation: smallest Y = u*x from the doubling schedule with certified
// tail < 1e-9 x (Chebyshev psi(y) <= 1.04 y plus the t^8 decay majorant);
// exact support end for compact weights.  Returns {Y, certified_tail}.
std::pair<std::uint64_t, double> truncation_limit(
    const weights::SmoothWeight& w, double x, double tol_rel = 1e-9);

WeightedPrimeSum psi_eta_direct(const weights::SmoothWeight& w, double x,
                                const characters::DirichletCharacter& chi,
                                int threads = 0, double tol_rel = 1e-9);
WeightedPrimeSum theta_eta_direct(const weights::SmoothWeight& w, double x,
                                  const characters::DirichletCharacter& chi,
                                  int threads = 0, double tol_rel = 1e-9);

struct ClassicalSums {
  std::uint64_t q = 0;
  double x = 0.0;
  std::vector<double> theta_class;   // sum_{p<=x, p=a(q)} log p
  std::vector<double> psi_class;     // sum_{n<=x, n=a(q)} Lambda(n)
};

ClassicalSums classical_sums(double x, std::uint64_t q, int threads = 0);

// trial-division von Mangoldt, used as a test oracle and for tiny ranges
double lambda_naive(std::uint64_t n);

}  // namespace primevar::primesums
