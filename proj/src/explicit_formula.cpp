#include "primevar/explicit_formula.hpp"

#include <algorithm>
#include <cmath>

#include "primevar/kahan.hpp"
#include "primevar/kernels.hpp"

namespace primevar::explicit_formula {

using characters::DirichletCharacter;
using lfunctions::LZero;
using lfunctions::ZeroTable;

namespace {
constexpr double kTwoPi = 6.28318530717958647692;
}

MellinCache& MellinCache::global() {
  static MellinCache c;
  return c;
}

std::complex<double> MellinCache::at(const weights::SmoothWeight& w,
                                     double beta, double gamma) {
  auto key = std::make_tuple(w.name, beta, gamma);
  {
    std::lock_guard<std::mutex> lk(mu_);
    auto it = map_.find(key);
    if (it != map_.end()) return it->second;
  }
  std::complex<double> v = weights::mellin(w, {beta, gamma});
  std::lock_guard<std::mutex> lk(mu_);
  return map_.emplace(key, v).first->second;  // first insert wins
}

std::vector<LZero> zeros_both_signs(const ZeroTable& table,
                                    const DirichletCharacter& chi, double T,
                                    Mode mode) {
  auto key = lfunctions::CharKey{static_cast<std::uint32_t>(chi.q()),
                                 static_cast<std::uint32_t>(chi.label())};
  const auto& pc = table.at(key);
  auto conj = chi.conjugate();
  auto ckey = lfunctions::CharKey{static_cast<std::uint32_t>(conj.q()),
                                  static_cast<std::uint32_t>(conj.label())};
  const auto& pcc = table.at(ckey);
  if (T > pc.height_complete + 1e-12 || T > pcc.height_complete + 1e-12)
    throw lfunctions::IncompleteTable(
        "zeros_both_signs: T beyond certified height for q=" +
        std::to_string(chi.q()));

  std::vector<LZero> out;
  for (const auto& z : pc.zeros) {
    if (z.gamma > T) break;
    if (mode == Mode::strict && z.source == lfunctions::ZeroSource::synthetic)
      throw ModeError("synthetic zero in strict mode (q=" +
                      std::to_string(z.q) + ")");
    out.push_back(z);
  }
  // negative ordinates of chi = -(positive ordinates of conj chi), at the
  // conjugate beta for off-line zeros
  for (const auto& z : pcc.zeros) {
    if (z.gamma > T) break;
    if (mode == Mode::strict && z.source == lfunctions::ZeroSource::synthetic)
      throw ModeError("synthetic zero in strict mode (q=" +
                      std::to_string(z.q) + ")");
    LZero m = z;
    m.gamma = -z.gamma;
    out.push_back(m);
  }
  return out;
}

double zero_tail_bound(const weights::SmoothWeight& w,
                       const weights::WeightConstants& wc, double q_chi,
                       double T) {
  double generic = wc.b_eta * wc.c_abs * std::log(q_chi * T) / T;
  if (!w.critical_line_bound || T < w.line_bound_from) return generic;
  // sum the pointwise bound against RVM-certified unit-interval counts:
  // N(j+1) - N(j) <= one-sided main-term increment + 2*slack, both signs
  double sum = 0.0;
  for (double j = T; j < T + 400.0; j += 1.0) {
    double density = std::log(q_chi * (j + 1.0) / kTwoPi) / kTwoPi;
    double slack = 2.0 * (2.0 + std::log(q_chi * (j + 3.0)));
    double cnt = 2.0 * (density + slack);  // both signs, per unit interval
    double bound = w.critical_line_bound(j);
    sum += cnt * bound;
    if (cnt * bound < 1e-300) break;
  }
  return std::min(sum, generic);
}

namespace {

struct ZeroTerms {
  std::vector<double> gammas;
  std::vector<double> m_re, m_im;  // M eta(rho)
  std::vector<double> exb;         // e^{(beta-1/2) t} handled by caller
  std::vector<double> betas;
};

ZeroTerms collect_terms(const weights::SmoothWeight& w,
                        const std::vector<LZero>& zeros, MellinCache* cache) {
  ZeroTerms zt;
  zt.gammas.reserve(zeros.size());
  for (const auto& z : zeros) {
    std::complex<double> m =
        cache ? cache->at(w, z.beta, z.gamma)
              : weights::mellin(w, {z.beta, z.gamma});
    zt.gammas.push_back(z.gamma);
    zt.m_re.push_back(m.real());
    zt.m_im.push_back(m.imag());
    zt.betas.push_back(z.beta);
  }
  return zt;
}

}  // namespace

ExplicitEvaluation psi_eta_explicit(const weights::SmoothWeight& w,
                                    const weights::WeightConstants& wc,
                                    double t_logx,
                                    const DirichletCharacter& chi,
                                    const ZeroTable& table, double T,
                                    Mode mode, MellinCache* cache) {
  const DirichletCharacter reduced =
      (chi.q() > 1 && chi.conductor() != chi.q())
          ? characters::primitive_inducer(chi)
          : chi;
  auto zeros = zeros_both_signs(table, reduced, T, mode);
  auto zt = collect_terms(w, zeros, cache);

  ExplicitEvaluation ev;
  ev.x_log = t_logx;
  ev.truncation_height = T;
  ev.tail_certificate =
      wc.b_eta * wc.c_abs *
      std::log(static_cast<double>(chi.q() ? chi.q() : 1) * T) / T;

  // on-line part via the phase kernel
  std::vector<double> theta(zt.gammas.size());
  std::vector<double> cre(zt.gammas.size()), cim(zt.gammas.size());
  KahanComplex offline;
  std::size_t n = 0;
  for (std::size_t i = 0; i < zt.gammas.size(); ++i) {
    if (zt.betas[i] == 0.5) {
      theta[n] = zt.gammas[i] * t_logx;
      cre[n] = zt.m_re[i];
      cim[n] = zt.m_im[i];
      ++n;
    } else {
      // exploratory off-line zeros: e^{(beta-1/2) t} scaling
      double scale = std::exp((zt.betas[i] - 0.5) * t_logx);
      std::complex<double> m(zt.m_re[i], zt.m_im[i]);
      std::complex<double> ph =
          std::polar(scale, zt.gammas[i] * t_logx);
      offline.add(m * ph);
    }
  }
  double sre = 0.0, sim = 0.0;
  kernels::active().phase_sum(theta.data(), cre.data(), cim.data(), n, &sre,
                              &sim);
  ev.normalized = -std::complex<double>(sre, sim);
  ev.offline_contribution = -offline.value();
  ev.normalized += ev.offline_contribution;

  if (chi.is_principal()) {
    ev.main_term_included = true;
    double m1 = cache ? cache->at(w, 1.0, 0.0).real()
                      : weights::mellin(w, {1.0, 0.0}).real();
    ev.normalized += m1 * std::exp(0.5 * t_logx);
  }
  return ev;
}

ExplicitEvaluation psi_eta_explicit_big(const weights::SmoothWeight& w,
                                        const weights::WeightConstants& wc,
                                        const BigUInt& t,
                                        const DirichletCharacter& chi,
                                        const ZeroTable& table, double T,
                                        Mode mode, MellinCache* cache) {
  const DirichletCharacter reduced =
      (chi.q() > 1 && chi.conductor() != chi.q())
          ? characters::primitive_inducer(chi)
          : chi;
  auto zeros = zeros_both_signs(table, reduced, T, mode);
  if (table.has_offline() && mode == Mode::strict)
    for (const auto& z : zeros)
      if (z.beta != 0.5) throw ModeError("off-line zero in strict mode");

  auto zt = collect_terms(w, zeros, cache);
  std::vector<double> theta(zt.gammas.size());
  std::vector<double> cre(zt.gammas.size()), cim(zt.gammas.size());
  for (std::size_t i = 0; i < zt.gammas.size(); ++i) {
    double lam = zt.gammas[i] / kTwoPi;
    double frac = lam >= 0.0 ? t.signed_frac(lam) : -t.signed_frac(-lam);
    theta[i] = kTwoPi * frac;
    cre[i] = zt.m_re[i];
    cim[i] = zt.m_im[i];
  }
  double sre = 0.0, sim = 0.0;
  kernels::active().phase_sum(theta.data(), cre.data(), cim.data(),
                              theta.size(), &sre, &sim);

  ExplicitEvaluation ev;
  ev.x_log = t.to_double();
  ev.truncation_height = T;
  ev.tail_certificate =
      wc.b_eta * wc.c_abs *
      std::log(static_cast<double>(chi.q() ? chi.q() : 1) * T) / T;
  ev.normalized = -std::complex<double>(sre, sim);
  return ev;
}

std::complex<double> weil_sum(const weights::SmoothWeight& w,
                              const DirichletCharacter& chi,
                              const ZeroTable& table, double T,
                              MellinCache* cache) {
  if (T <= 0.0) return {0.0, 0.0};
  auto zeros = zeros_both_signs(table, chi, T, Mode::exploratory);
  KahanComplex sum;
  for (const auto& z : zeros) {
    std::complex<double> m = cache ? cache->at(w, z.beta, z.gamma)
                                   : weights::mellin(w, {z.beta, z.gamma});
    sum.add(m);
  }
  return sum.value();
}

double grh_bound_scan(const weights::SmoothWeight& w,
                      const weights::WeightConstants& wc,
                      const DirichletCharacter& chi, const ZeroTable& table,
                      std::span<const double> t_grid, double T,
                      MellinCache* cache) {
  double best = 0.0;
  double lq = std::log(static_cast<double>(chi.q()));
  for (double t : t_grid) {
    auto ev = psi_eta_explicit(w, wc, t, chi, table, T, Mode::strict, cache);
    best = std::max(best, std::abs(ev.normalized) / lq);
  }
  return best;
}

}  // namespace primevar::explicit_formula
