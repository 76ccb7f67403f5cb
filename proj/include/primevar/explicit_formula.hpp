#pragma once

// psi_eta(x, chi) from zeros: absolute form for moderate x, sqrt(x)-
// normalized form for x given only through t = log x (which is all the
// synchronization experiment ever needs).  Includes the Weil sum check and
// the generic zero-tail certificate.

#include <complex>
#include <map>
#include <mutex>
#include <span>
#include <stdexcept>

#include "primevar/bigint.hpp"
#include "primevar/lfunctions.hpp"
#include "primevar/weights.hpp"

namespace primevar::explicit_formula {

struct ModeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Mode { strict, exploratory };

struct ExplicitEvaluation {
  double x_log = 0.0;                          // t = log x
  std::complex<double> normalized{0.0, 0.0};   // psi_eta(x, chi) / sqrt(x)
  bool main_term_included = false;
  double truncation_height = 0.0;
  double tail_certificate = 0.0;  // B_eta c_abs log(qT)/T
  std::complex<double> offline_contribution{0.0, 0.0};
};

// Shared cache of M eta at zeros, keyed by (weight, beta, gamma).
class MellinCache {
 public:
  std::complex<double> at(const weights::SmoothWeight& w, double beta,
                          double gamma);
  static MellinCache& global();

 private:
  std::mutex mu_;
  std::map<std::tuple<std::string, double, double>, std::complex<double>> map_;
};

// Both-sign zero list of chi with |gamma| <= T, assembled from the stored
// positive ordinates of chi and of conj(chi).
std::vector<lfunctions::LZero> zeros_both_signs(
    const lfunctions::ZeroTable& table,
    const characters::DirichletCharacter& chi, double T, Mode mode);

// t = log x as a double; phases e^{i gamma t} are computed directly.
// Non-primitive characters are reduced to their primitive inducer (the
// correction is O(log q) in absolute terms and is folded into the
// certificate by the caller).
ExplicitEvaluation psi_eta_explicit(const weights::SmoothWeight& w,
                                    const weights::WeightConstants& wc,
                                    double t_logx,
                                    const characters::DirichletCharacter& chi,
                                    const lfunctions::ZeroTable& table,
                                    double T, Mode mode = Mode::strict,
                                    MellinCache* cache = nullptr);

// Huge-x form: t is an exact integer; phases are e^{2 pi i frac(t gamma/2pi)}
// with the fractional parts computed exactly.
ExplicitEvaluation psi_eta_explicit_big(
    const weights::SmoothWeight& w, const weights::WeightConstants& wc,
    const BigUInt& t, const characters::DirichletCharacter& chi,
    const lfunctions::ZeroTable& table, double T, Mode mode = Mode::strict,
    MellinCache* cache = nullptr);

// sum_{|gamma|<=T} M eta(rho_chi); deviation from eta(1) log q_chi is the
// Weil-sum diagnostic.
std::complex<double> weil_sum(const weights::SmoothWeight& w,
                              const characters::DirichletCharacter& chi,
                              const lfunctions::ZeroTable& table, double T,
                              MellinCache* cache = nullptr);

// max over the grid of |normalized psi_eta| / log q (strict mode)
double grh_bound_scan(const weights::SmoothWeight& w,
                      const weights::WeightConstants& wc,
                      const characters::DirichletCharacter& chi,
                      const lfunctions::ZeroTable& table,
                      std::span<const double> t_grid, double T,
                      MellinCache* cache = nullptr);

// Certified bound on sum_{|gamma|>T} |M eta(rho)| for a character of
// conductor q_chi: the weight-specific critical-line bound summed against
// RVM-certified unit-interval counts when available, else the generic
// B_eta c_abs log(qT)/T.
double zero_tail_bound(const weights::SmoothWeight& w,
                       const weights::WeightConstants& wc, double q_chi,
                       double T);

}  // namespace primevar::explicit_formula
