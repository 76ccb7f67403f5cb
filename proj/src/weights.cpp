// Weight class and Mellin machinery.
//
// All transforms are computed as integrals in u = log t, which handles both
// the t -> 0 endpoint (integrand decays like e^{u(sigma+1)}) and the rapid
// decay at infinity with one substitution.  For entire weights and large
// |Im s| the contour is rotated to t = r e^{i theta}: on the real axis the
// integrand is O(1) while the transform is exponentially small, so no
// double-precision quadrature could reach relative accuracy there.

#include "primevar/weights.hpp"

#include <algorithm>
#include <cmath>

#include "primevar/quadrature.hpp"

namespace primevar::weights {

namespace {

constexpr double kPi = 3.14159265358979323846;

double log_cosh(double x) {
  x = std::fabs(x);
  return x + std::log1p(std::exp(-2.0 * x)) - 0.6931471805599453;
}

// lower integration limit in u = log t such that the omitted small-t mass is
// below `tiny`, given integrand bound K e^{u*rate}
double u_lower(double K, double rate, double tiny) {
  if (K <= 0.0) K = 1.0;
  double u = std::log(tiny * rate / K) / rate;
  return std::min(u, std::log(0.1));
}

std::vector<double> log_knots(const SmoothWeight& w, double ulo, double uhi) {
  std::vector<double> ks;
  for (double t : w.knots) {
    if (t <= 0.0) continue;
    double u = std::log(t);
    if (u > ulo && u < uhi) ks.push_back(u);
  }
  if (ulo < 0.0 && uhi > 0.0) ks.push_back(0.0);
  return ks;
}

struct Integrand {
  // returns integral of f over the u-line with given limits
  static std::complex<double> run(
      const std::function<std::complex<double>(double)>& f, double ulo,
      double uhi, const std::vector<double>& brk, const char* what) {
    auto r = quadrature::adaptive_gk(f, ulo, uhi, 1e-11, 1e-300, 60000, brk);
    if (!r.converged && r.error > 1e-9 * std::max(1e-290, std::abs(r.value)))
      throw NonConvergent(std::string(what) + ": subdivision budget exceeded");
    return r.value;
  }
};

// real-axis path: int eta(e^u) e^{us} du
std::complex<double> mellin_real_axis(const SmoothWeight& w,
                                      std::complex<double> s) {
  double sigma = s.real();
  double ulo, uhi;
  if (w.support.compact) {
    ulo = std::log(w.support.t_min);
    uhi = std::log(w.support.t_max);
  } else {
    ulo = u_lower(w.small_t_K, sigma + 1.0, 1e-26);
    uhi = std::log(w.support.t_max);
  }
  auto f = [&](double u) -> std::complex<double> {
    double t = std::exp(u);
    return w.eval(t) * std::exp(s * u);
  };
  return Integrand::run(f, ulo, uhi, log_knots(w, ulo, uhi), "mellin");
}

// rotated-ray path: t = e^{u + i theta}
std::complex<double> mellin_ray(const SmoothWeight& w,
                                std::complex<double> s) {
  double g = s.imag();
  double theta_max = w.max_ray_angle;
  double theta = std::min(theta_max - 1.0 / std::fabs(g), theta_max - 0.02);
  theta = std::max(theta, 0.5 * theta_max);
  if (g > 0) theta = -theta;

  double sigma = s.real();
  double ulo = u_lower(w.small_t_K, sigma + 1.0, 1e-26);
  // decay along the ray sets in at radius ~ |g|; generous cutoff
  double uhi = std::log(80.0 * std::fabs(g) + 60.0);
  std::complex<double> rot(0.0, theta);
  auto f = [&](double u) -> std::complex<double> {
    std::complex<double> lt = u + rot;  // log t
    return w.eval_c(std::exp(lt)) * std::exp(s * lt);
  };
  return Integrand::run(f, ulo, uhi, {0.0}, "mellin(ray)");
}

std::complex<double> by_parts_real_axis(const SmoothWeight& w,
                                        std::complex<double> s) {
  double sigma = s.real();
  double ulo, uhi;
  if (w.support.compact) {
    ulo = std::log(w.support.t_min);
    uhi = std::log(w.support.t_max);
  } else {
    // |eta''| is bounded near 0 for these weights; integrand ~ e^{u(sigma+2)}
    double c2 = 0.0;
    for (double t = 1e-4; t <= 0.1; t *= 2.0)
      c2 = std::max(c2, std::fabs(w.eval_d2(t)));
    ulo = u_lower(std::max(c2, 1.0), sigma + 2.0, 1e-26);
    uhi = std::log(w.support.t_max) + 0.7;  // eta'' decays like eta with margin
  }
  auto f = [&](double u) -> std::complex<double> {
    double t = std::exp(u);
    return w.eval_d2(t) * std::exp((s + 2.0) * u);
  };
  return Integrand::run(f, ulo, uhi, log_knots(w, ulo, uhi),
                        "mellin_by_parts");
}

std::complex<double> by_parts_ray(const SmoothWeight& w,
                                  std::complex<double> s) {
  double g = s.imag();
  double theta_max = w.max_ray_angle;
  double theta = std::min(theta_max - 1.0 / std::fabs(g), theta_max - 0.02);
  theta = std::max(theta, 0.5 * theta_max);
  if (g > 0) theta = -theta;
  double sigma = s.real();
  double ulo = u_lower(1.0, sigma + 2.0, 1e-26);
  double uhi = std::log(80.0 * std::fabs(g) + 60.0);
  std::complex<double> rot(0.0, theta);
  auto f = [&](double u) -> std::complex<double> {
    std::complex<double> lt = u + rot;
    return w.eval_d2_c(std::exp(lt)) * std::exp((s + 2.0) * lt);
  };
  return Integrand::run(f, ulo, uhi, {0.0}, "mellin_by_parts(ray)");
}

constexpr double kRayThreshold = 6.0;

}  // namespace

std::complex<double> mellin(const SmoothWeight& w, std::complex<double> s) {
  if (s.real() <= -1.0)
    throw DomainError("mellin: requires Re(s) > -1");
  if (std::fabs(s.imag()) >= kRayThreshold && w.eval_c && w.max_ray_angle > 0.0)
    return mellin_ray(w, s);
  return mellin_real_axis(w, s);
}

std::complex<double> mellin_by_parts(const SmoothWeight& w,
                                     std::complex<double> s) {
  if (s.real() <= -1.0)
    throw DomainError("mellin_by_parts: requires Re(s) > -1");
  if (std::abs(s) == 0.0 || std::abs(s + 1.0) == 0.0)
    throw DomainError("mellin_by_parts: s in {0,-1}");
  std::complex<double> integral;
  if (std::fabs(s.imag()) >= kRayThreshold && w.eval_d2_c &&
      w.max_ray_angle > 0.0)
    integral = by_parts_ray(w, s);
  else
    integral = by_parts_real_axis(w, s);
  return integral / (s * (s + 1.0));
}

WeightConstants constants(const SmoothWeight& w, double c_abs, double q_ref) {
  if (c_abs <= 0.0) throw DomainError("constants: c_abs must be positive");
  WeightConstants wc;
  wc.c_abs = c_abs;

  double best = -1.0, best_sigma = 0.0;
  for (int k = 0; k <= 50; ++k) {
    double sigma = -0.5 + 0.05 * k;
    double ulo, uhi;
    if (w.support.compact) {
      ulo = std::log(w.support.t_min);
      uhi = std::log(w.support.t_max);
    } else {
      double c2 = 0.0;
      for (double t = 1e-4; t <= 0.1; t *= 2.0)
        c2 = std::max(c2, std::fabs(w.eval_d2(t)));
      ulo = u_lower(std::max(c2, 1.0), sigma + 2.0, 1e-26);
      uhi = std::log(w.support.t_max) + 0.7;
    }
    auto f = [&](double u) -> std::complex<double> {
      double t = std::exp(u);
      return std::fabs(w.eval_d2(t)) * std::exp((sigma + 2.0) * u);
    };
    double v = Integrand::run(f, ulo, uhi, log_knots(w, ulo, uhi),
                              "constants(B)").real();
    if (v > best) {
      best = v;
      best_sigma = sigma;
    }
  }
  wc.b_eta = best;
  wc.sigma_at_max = best_sigma;
  wc.h_eta = c_abs * best;

  double eta1 = w.eval(1.0);
  wc.c_eta = std::log(std::floor(16.0 * kPi * kPi * wc.h_eta / eta1) + 1.0);

  double target = eta1 / 16.0 * std::log(q_ref);
  double d = 10.0;
  while (wc.b_eta * c_abs * std::log(q_ref * d) / d >= target) {
    d *= 2.0;
    if (d > 1e12) throw NonConvergent("constants: D_eta did not stabilise");
  }
  wc.d_eta = d;
  return wc;
}

bool validate(SmoothWeight& w, std::string* why) {
  auto fail = [&](const std::string& msg) {
    if (why) *why = w.name + ": " + msg;
    return false;
  };
  if (!(w.eval(1.0) > 0.0)) return fail("eta(1) <= 0");

  double lo = std::max(w.support.compact ? w.support.t_min : 1e-4, 1e-6);
  double hi = std::max(w.support.t_max, 1.0);
  for (int i = 0; i <= 400; ++i) {
    double t = lo * std::pow(hi / lo, i / 400.0);
    if (w.eval(t) < -1e-12) return fail("eta negative at t=" + std::to_string(t));
  }

  if (!w.support.compact && w.support.t_max > 10.0) {
    double prev = w.eval(10.0) * std::pow(10.0, 8.0);
    double first = prev;
    double last = prev;
    for (double t = 10.5; t <= w.support.t_max; t += 0.5) {
      double g = w.eval(t) * std::pow(t, 8.0);
      if (g > prev * (1.0 + 1e-9) + 1e-300)
        return fail("eta(t) t^8 not decreasing at t=" + std::to_string(t));
      prev = g;
      last = g;
    }
    if (first > 0.0 && last > 1e-3 * first)
      return fail("eta(t) t^8 does not decay toward 0");
  }

  double K = 0.0;
  for (double t = 1e-6; t <= 0.1; t *= 1.25) {
    K = std::max(K, std::fabs(w.eval(t)) / t);
    K = std::max(K, std::fabs(w.eval_d1(t)));
  }
  if (!(K < 1e6)) return fail("small-t growth constant not finite");
  w.small_t_K = std::max(K, 1e-30);
  return true;
}

namespace {

double smoothstep5(double u) { return u * u * u * (10.0 + u * (-15.0 + 6.0 * u)); }
double smoothstep5_d1(double u) { return 30.0 * u * u * (1.0 - u) * (1.0 - u); }
double smoothstep5_d2(double u) { return 60.0 * u * (1.0 - u) * (1.0 - 2.0 * u); }

SmoothWeight make_exp_linear() {
  SmoothWeight w;
  w.name = "exp_linear";
  w.kind = kernels::WeightKind::exp_linear;
  w.eval = [](double t) { return t * std::exp(-t); };
  w.eval_d1 = [](double t) { return (1.0 - t) * std::exp(-t); };
  w.eval_d2 = [](double t) { return (t - 2.0) * std::exp(-t); };
  w.support = {3.7e-19, 47.0, false};
  w.knots = {2.0};
  w.eval_c = [](std::complex<double> z) { return z * std::exp(-z); };
  w.eval_d2_c = [](std::complex<double> z) { return (z - 2.0) * std::exp(-z); };
  w.max_ray_angle = kPi / 2.0;
  // M eta = Gamma(s+1); |Gamma(3/2+ig)|^2 = pi (1/4+g^2) / cosh(pi g), exactly
  w.critical_line_bound = [](double g) {
    return std::exp(0.5 * (std::log(kPi) + std::log(0.25 + g * g)) -
                    0.5 * log_cosh(kPi * g));
  };
  w.line_bound_from = 0.0;
  return w;
}

SmoothWeight make_gauss_quadratic() {
  SmoothWeight w;
  w.name = "gauss_quadratic";
  w.kind = kernels::WeightKind::gauss_quadratic;
  w.eval = [](double t) { return t * t * std::exp(-t * t); };
  w.eval_d1 = [](double t) { return 2.0 * t * (1.0 - t * t) * std::exp(-t * t); };
  w.eval_d2 = [](double t) {
    double t2 = t * t;
    return (2.0 - 10.0 * t2 + 4.0 * t2 * t2) * std::exp(-t2);
  };
  w.support = {6.1e-10, 7.0, false};
  double r1 = std::sqrt((5.0 - std::sqrt(17.0)) / 4.0);
  double r2 = std::sqrt((5.0 + std::sqrt(17.0)) / 4.0);
  w.knots = {r1, r2};
  w.eval_c = [](std::complex<double> z) { return z * z * std::exp(-z * z); };
  w.eval_d2_c = [](std::complex<double> z) {
    std::complex<double> z2 = z * z;
    return (2.0 - 10.0 * z2 + 4.0 * z2 * z2) * std::exp(-z2);
  };
  w.max_ray_angle = kPi / 4.0;
  return w;
}

SmoothWeight make_bump() {
  SmoothWeight w;
  w.name = "bump";
  w.kind = kernels::WeightKind::bump;
  w.eval = [](double t) {
    if (t <= 0.5 || t >= 2.0) return 0.0;
    return t < 1.0 ? smoothstep5(2.0 * t - 1.0) : smoothstep5(2.0 - t);
  };
  w.eval_d1 = [](double t) {
    if (t <= 0.5 || t >= 2.0) return 0.0;
    return t < 1.0 ? 2.0 * smoothstep5_d1(2.0 * t - 1.0)
                   : -smoothstep5_d1(2.0 - t);
  };
  w.eval_d2 = [](double t) {
    if (t <= 0.5 || t >= 2.0) return 0.0;
    return t < 1.0 ? 4.0 * smoothstep5_d2(2.0 * t - 1.0)
                   : smoothstep5_d2(2.0 - t);
  };
  w.support = {0.5, 2.0, true};
  w.knots = {0.5, 0.75, 1.0, 1.5, 2.0};
  return w;
}

}  // namespace

std::vector<SmoothWeight> preset_weights() {
  std::vector<SmoothWeight> out;
  out.push_back(make_exp_linear());
  out.push_back(make_gauss_quadratic());
  out.push_back(make_bump());
  for (auto& w : out) {
    std::string why;
    if (!validate(w, &why)) throw NonConvergent("preset failed validation: " + why);
  }
  return out;
}

const SmoothWeight& preset(const std::string& name) {
  static const std::vector<SmoothWeight> all = preset_weights();
  for (const auto& w : all)
    if (w.name == name) return w;
  throw DomainError("unknown weight preset: " + name);
}

}  // namespace primevar::weights
