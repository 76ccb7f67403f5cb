#pragma once

// Smooth weight class: weights eta with eta(1) > 0, rapid decay at infinity
// and eta(t) << t near zero, together with their Mellin transforms and the
// derived constants that drive every truncation certificate downstream.

#include <complex>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "primevar/kernels.hpp"

namespace primevar::weights {

struct DomainError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct NonConvergent : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SupportHint {
  double t_min = 0.0;   // |eta| < 1e-18 relative below this
  double t_max = 0.0;   // ... and above this
  bool compact = false; // eta vanishes identically outside [t_min, t_max]
};

struct SmoothWeight {
  std::string name;
  kernels::WeightKind kind = kernels::WeightKind::generic;
  std::function<double(double)> eval;
  std::function<double(double)> eval_d1;
  std::function<double(double)> eval_d2;
  SupportHint support;
  std::vector<double> knots;  // breakpoints / sign changes of eta''

  // Analytic continuation for entire weights; enables the rotated-ray
  // quadrature that keeps Mellin values with exponentially small modulus
  // accurate in relative terms.  Null for non-analytic weights.
  std::function<std::complex<double>(std::complex<double>)> eval_c;
  std::function<std::complex<double>(std::complex<double>)> eval_d2_c;
  double max_ray_angle = 0.0;  // decay holds along t = r e^{i theta}, |theta| < this

  // Certified pointwise upper bound on |M eta(1/2 + i g)|, valid for all
  // |g| >= line_bound_from; absent when only the generic 1/|s|^2 bound holds.
  std::function<double(double)> critical_line_bound;
  double line_bound_from = 0.0;

  double small_t_K = 0.0;  // fitted K: |eta(t)| <= K t and |eta'(t)| <= K, t <= 0.1
};

struct WeightConstants {
  double b_eta = 0.0;   // max_{-1/2<=sigma<=2} int |eta''(t)| t^{sigma+1} dt
  double h_eta = 0.0;   // c_abs * b_eta
  double c_eta = 0.0;   // log([16 pi^2 h_eta / eta(1)] + 1)
  double d_eta = 0.0;   // doubling height making the zero tail small
  double c_abs = 1.0;
  double sigma_at_max = 0.0;
};

// M eta(s) = int_0^inf eta(t) t^{s-1} dt, Re s > -1, by adaptive quadrature
// (relative target 1e-10).  Throws DomainError / NonConvergent.
std::complex<double> mellin(const SmoothWeight& w, std::complex<double> s);

// (1/(s(s+1))) int_0^inf eta''(t) t^{s+1} dt; s not in {0,-1}.
std::complex<double> mellin_by_parts(const SmoothWeight& w,
                                     std::complex<double> s);

WeightConstants constants(const SmoothWeight& w, double c_abs,
                          double q_ref = 3.0);

// exp_linear: t e^{-t};  gauss_quadratic: t^2 e^{-t^2};
// bump: C^2 quintic-smoothstep bump on [1/2, 2] with eta(1) = 1.
std::vector<SmoothWeight> preset_weights();
const SmoothWeight& preset(const std::string& name);

// Checks the class-S invariants on sample grids; fills small_t_K.
bool validate(SmoothWeight& w, std::string* why = nullptr);

}  // namespace primevar::weights
