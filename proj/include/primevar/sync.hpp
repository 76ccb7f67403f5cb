#pragma once

// Simultaneous Diophantine approximation and the synchronization experiment:
// find an integer t making every zero phase gamma*t/(2pi) nearly integral,
// then certify a lower bound on the normalized variance at x = e^t.

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "primevar/bigint.hpp"
#include "primevar/characters.hpp"
#include "primevar/lfunctions.hpp"
#include "primevar/weights.hpp"

namespace primevar::sync {

struct NotFound : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct QualityMiss : std::runtime_error {
  QualityMiss(std::string msg, double best) : std::runtime_error(std::move(msg)), best_defect(best) {}
  double best_defect;
};
struct SyncFailed : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct TailDominates : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SyncProblem {
  std::vector<double> lambdas;  // frequencies (gamma / 2pi)
  int M = 2;                    // quality: ||t lambda|| <= 1/M
  std::uint64_t N = 0;          // brute-force budget (N >= M^{3k} guarantees)
};

enum class SearchMethod { brute, lattice, randomized };

struct SyncResult {
  BigUInt t;
  double defect = 0.0;  // max_j ||t lambda_j||, re-verified exactly
  std::complex<double> phase_sum{0.0, 0.0};  // filled by the experiment
  double lower_bound = 0.0;                  // filled by the experiment
  SearchMethod method = SearchMethod::brute;
  int stages = 0;
};

// Smallest n in (N^{1/3}, N] with all ||n lambda|| <= 1/M; pigeonhole
// guarantees existence for N >= M^{3k}.  k <= 6, M <= 20 regime.
SyncResult dio_search_brute(const SyncProblem& p, int threads = 0);

// Progressive lattice stages (LLL + randomized Babai roundings on the
// simultaneous-approximation lattice), exact 128-bit fixed-point phase
// bookkeeping, a-posteriori defect verification.  k <= 200.
SyncResult dio_search_lattice(const SyncProblem& p, std::uint64_t seed = 1,
                              int max_stages = 400);

enum class ExperimentMode { single, averaged };

struct ViolationOptions {
  ExperimentMode mode = ExperimentMode::single;
  double target_M = 0.0;        // report compares the bound against this
  double d_eta_override = 0.0;  // 0 = derive from constants / table height
  double g_target = 0.0;        // 0 = log q (family = F_q)
  double c_abs = 1.0;
  double c_err = 10.0;
  std::string search = "auto";  // auto | brute | lattice
  std::uint64_t seed = 1;
  int threads = 0;
  std::size_t max_aligned = 96;  // cap on the aligned frequency set
};

struct CharacterTrace {
  std::uint64_t q = 0, label = 0;
  double psi_hat_abs = 0.0;  // |psi_eta / sqrt(x)| over the tabled zeros
  std::complex<double> phase_sum{0.0, 0.0};  // aligned-window zero sum at t
};

struct ViolationReport {
  // configuration
  std::uint64_t Q = 0;
  ExperimentMode mode = ExperimentMode::single;
  std::string weight;
  double d_eta = 0.0;
  double c_abs = 1.0, c_err = 10.0;
  double target_M = 0.0;
  std::uint64_t seed = 1;
  // family
  std::vector<std::uint64_t> moduli;
  std::size_t phi_total = 0;   // sum over q of Phi_q
  double sum_phi_log_q = 0.0;  // sum over q of Phi_q log q
  // alignment
  std::size_t n_frequencies = 0;  // aligned set size k
  std::size_t n_zero_terms = 0;   // (chi, zero) pairs with |gamma| <= d_eta
  double defect = 0.0;
  double defect_target = 0.0;
  SearchMethod method = SearchMethod::lattice;
  std::string t_decimal;
  double log_t = 0.0;      // log log x
  double log_x_log = 0.0;  // log x = t, as double (may be inf-scale)
  // certificate chain
  double weil_target = 0.0;       // |sum M eta(rho)| over |gamma| <= d_eta
  double achieved_fraction = 0.0; // weil_target / (eta(1) sum Phi_q log q)
  double sum_sig_abs = 0.0;       // aligned sum of |M eta|
  double sum_insig_abs = 0.0;     // unaligned |gamma| <= d_eta mass
  double loss_misalign = 0.0;     // 4 pi^2 defect * sum_sig_abs
  double loss_insig = 0.0;        // 2 * sum_insig_abs
  double loss_tabled = 0.0;       // sum |M eta| over d_eta < gamma <= table
  double loss_analytic = 0.0;     // certified tail beyond the table
  double loss_explicit = 0.0;     // e^{-t/2} c_err log(q+1) terms
  double loss_paper_form = 0.0;   // 4 pi^2 defect H_eta sum Phi_q log q
  double s_cert = 0.0;            // certified |sum_chi psi_hat|
  double lower_bound = 0.0;       // certified bound on the normalized variance
  double direct_ratio = 0.0;      // family-restricted direct evaluation
  bool exceeds_target = false;
  std::complex<double> phase_sum_at_t{0.0, 0.0};
  std::vector<CharacterTrace> trace;
};

ViolationReport violation_experiment(const weights::SmoothWeight& w,
                                     std::uint64_t Q,
                                     const lfunctions::ZeroTable& table,
                                     const ViolationOptions& opts);

}  // namespace primevar::sync
