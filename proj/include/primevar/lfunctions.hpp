#pragma once

// Dirichlet L-functions on the critical strip via Hurwitz zeta
// (Euler-Maclaurin), zero location on the critical line through the
// phase-rotated completed function, Riemann-von Mangoldt count certificates,
// and 1/|rho|^2 tail sums.

#include <complex>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "primevar/characters.hpp"

namespace primevar::lfunctions {

struct PoleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct PrecisionLoss : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct CountMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct SymmetryViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct IncompleteTable : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Hurwitz zeta zeta(s, a), 0 < a <= 1, by Euler-Maclaurin with
// N = ceil(10 + |Im s|) shifted terms and 12 Bernoulli corrections.
std::complex<double> hurwitz_zeta(std::complex<double> s, double a);

// L(s, chi) = q^{-s} sum_a chi(a) zeta(s, a/q); chi primitive, q <= 200,
// 0 < Re s < 3, |Im s| <= 500.
std::complex<double> l_value(const characters::DirichletCharacter& chi,
                             std::complex<double> s);

enum class ZeroSource { computed, ingested, synthetic };

struct LZero {
  std::uint32_t q = 0;
  std::uint32_t label = 0;
  double beta = 0.5;
  double gamma = 0.0;
  ZeroSource source = ZeroSource::computed;
};

using CharKey = std::pair<std::uint32_t, std::uint32_t>;  // (q, label)

class ZeroTable {
 public:
  struct PerChar {
    std::vector<LZero> zeros;      // gamma ascending, gamma > 0 only
    double height_complete = 0.0;  // certified complete up to this height
  };

  void add_block(CharKey key, PerChar block);  // throws on inconsistent dup
  bool has(CharKey key) const { return chars_.count(key) > 0; }
  const PerChar& at(CharKey key) const;
  const std::map<CharKey, PerChar>& blocks() const { return chars_; }
  bool has_offline() const { return has_offline_; }
  void merge(const ZeroTable& other);

 private:
  std::map<CharKey, PerChar> chars_;
  bool has_offline_ = false;
};

// All zeros 0 < gamma <= T, beta = 1/2, of L(s, chi*) for primitive chi,
// located by sign changes of the rotated completed function and refined by
// bisection to 1e-9; completeness certified against the Riemann-von Mangoldt
// count (one-sided), slack 2 + log(q(T+2)).
std::vector<LZero> find_zeros(const characters::DirichletCharacter& chi,
                              double T);

// rotated completed L, real-valued on the critical line
double hardy_z(const characters::DirichletCharacter& chi, double t);

// one-sided count of stored zeros with gamma <= T
int count_zeros(const ZeroTable& table,
                const characters::DirichletCharacter& chi, double T);
// one-sided Riemann-von Mangoldt main term (T/2pi) log(q_chi T / (2 pi e))
double rvm_predict(const characters::DirichletCharacter& chi, double T);

// sum over stored zeros with gamma > t_min of 1/|rho|^2, plus a density-based
// estimate of the tail beyond the certified height; one-sided (stored-zero)
// convention
std::pair<double, double> inverse_square_sum(
    const ZeroTable& table, const characters::DirichletCharacter& chi,
    double t_min);

ZeroTable ingest_zeros(const std::string& path);
void write_zeros(const ZeroTable& table, const std::string& path);

// re-evaluate |L(rho)| for stored zeros (q <= 200), check ordering and RVM
// counts; returns a human-readable list of failures (empty = pass)
std::vector<std::string> verify_table(const ZeroTable& table,
                                      double linf_tol = 1e-6);

// empirical constant: sup over characters/T of
//   [both-signs sum_{|gamma|>T} 1/|rho|^2 + tail] * T / log(qT)
double calibrate_c_abs(const ZeroTable& table);

// builds the standard bundled dataset: all primitive characters, heights
// 200 for q <= 10 and 100 for 11 <= q <= q_max
ZeroTable compute_bundle(std::uint32_t q_max = 20, int threads = 0);

}  // namespace primevar::lfunctions
