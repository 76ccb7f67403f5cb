#pragma once

// Weighted variances V_eta, G_eta computed two ways (residue classes vs
// characters) with the Parseval identity as the cross-check, plus the
// classical unweighted V_Lambda and G.

#include <cstdint>
#include <string>
#include <utility>

#include "primevar/weights.hpp"

namespace primevar::variance {

struct VarianceReport {
  double x = 0.0;
  std::uint64_t q = 0;
  std::string weight;
  double v_eta_residue = 0.0;
  double v_eta_parseval = 0.0;
  double g_eta_residue = 0.0;
  double g_eta_parseval = 0.0;
  double v_classical = 0.0;
  double g_classical = 0.0;
  double mellin_at_1 = 0.0;
  double hooley_ratio = 0.0;  // v_eta / (x log q)
  double grh_ratio = 0.0;     // v_eta / (x (log q)^2)
};

double v_eta_residue_side(const weights::SmoothWeight& w, double x,
                          std::uint64_t q, int threads = 0,
                          double tol_rel = 1e-9);
double v_eta_parseval_side(const weights::SmoothWeight& w, double x,
                           std::uint64_t q, int threads = 0,
                           double tol_rel = 1e-9);
std::pair<double, double> g_eta_both_sides(const weights::SmoothWeight& w,
                                           double x, std::uint64_t q,
                                           int threads = 0,
                                           double tol_rel = 1e-9);
std::pair<double, double> classical_variances(double x, std::uint64_t q,
                                              int threads = 0);

// Everything in one pass per side, including the classical variances when
// with_classical is set.
VarianceReport compute(const weights::SmoothWeight& w, double x,
                       std::uint64_t q, bool with_classical = false,
                       int threads = 0, double tol_rel = 1e-9);

}  // namespace primevar::variance
