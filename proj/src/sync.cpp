// Brute-force Diophantine search and the synchronization experiment.

#include "primevar/sync.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "primevar/explicit_formula.hpp"
#include "primevar/kahan.hpp"
#include "primevar/kernels.hpp"

namespace primevar::sync {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 6.28318530717958647692;

std::uint64_t integer_cbrt(std::uint64_t n) {
  auto c = static_cast<std::uint64_t>(std::cbrt(static_cast<double>(n)));
  while (c > 0 && c * c * c > n) --c;
  while ((c + 1) * (c + 1) * (c + 1) <= n) ++c;
  return c;
}

}  // namespace

SyncResult dio_search_brute(const SyncProblem& p, int threads) {
  (void)threads;
  if (p.lambdas.empty()) throw std::invalid_argument("dio_search_brute: k >= 1");
  if (p.N > (1ull << 52))
    throw std::invalid_argument("dio_search_brute: N <= 2^52");
  double tol = 1.0 / static_cast<double>(p.M);

  std::uint64_t start = integer_cbrt(p.N) + 1;  // smallest n with n^3 > N
  std::uint64_t hit = kernels::active().defect_first_hit(
      p.lambdas.data(), p.lambdas.size(), start, p.N + 1, tol);
  if (hit == 0) {
    double need = std::pow(static_cast<double>(p.M),
                           3.0 * static_cast<double>(p.lambdas.size()));
    throw NotFound(
        "dio_search_brute: no n in (N^{1/3}, N]" +
        std::string(static_cast<double>(p.N) < need
                        ? " (budget N < M^{3k}; pigeonhole not applicable)"
                        : " (unexpected: N >= M^{3k})"));
  }
  SyncResult res;
  res.t = BigUInt(hit);
  res.method = SearchMethod::brute;
  // independent re-verification of the postcondition
  double d = 0.0;
  for (double lam : p.lambdas)
    d = std::max(d, res.t.dist_to_integer(lam));
  res.defect = d;
  if (d > tol + 1e-12)
    throw NotFound("dio_search_brute: verification failed");
  return res;
}

namespace {

struct ZeroTerm {
  std::uint64_t q;          // family modulus
  double gamma;             // signed ordinate
  std::complex<double> m;   // M eta(rho)
};

}  // namespace

ViolationReport violation_experiment(const weights::SmoothWeight& w,
                                     std::uint64_t Q,
                                     const lfunctions::ZeroTable& table,
                                     const ViolationOptions& opts) {
  using explicit_formula::MellinCache;
  namespace ef = explicit_formula;

  ViolationReport rep;
  rep.Q = Q;
  rep.mode = opts.mode;
  rep.weight = w.name;
  rep.c_abs = opts.c_abs;
  rep.c_err = opts.c_err;
  rep.target_M = opts.target_M;
  rep.seed = opts.seed;

  std::vector<std::uint64_t> moduli;
  if (opts.mode == ExperimentMode::single) {
    moduli.push_back(Q);
  } else {
    for (std::uint64_t q = Q + 1; q <= 2 * Q; ++q) moduli.push_back(q);
  }
  double g_target =
      opts.g_target > 0.0 ? opts.g_target : std::log(static_cast<double>(Q));
  auto family = characters::select_family(Q, g_target, moduli);
  rep.moduli = family.moduli;

  auto wc = weights::constants(w, opts.c_abs, static_cast<double>(Q));

  // usable table height per member (both chi* and its conjugate)
  struct Member {
    characters::DirichletCharacter chi;       // family member (mod q)
    characters::DirichletCharacter inducer;   // primitive chi*
    std::uint64_t q;
    double t_table;
  };
  std::vector<Member> members;
  double min_height = 1e300;
  for (auto& [q, chis] : family.members) {
    for (auto& chi : chis) {
      Member m;
      m.chi = chi;
      m.inducer = chi.conductor() == chi.q() && chi.q() > 1
                      ? chi
                      : characters::primitive_inducer(chi);
      m.q = q;
      auto key = lfunctions::CharKey{
          static_cast<std::uint32_t>(m.inducer.q()),
          static_cast<std::uint32_t>(m.inducer.label())};
      auto ckey = lfunctions::CharKey{
          static_cast<std::uint32_t>(m.inducer.q()),
          static_cast<std::uint32_t>(m.inducer.conjugate().label())};
      m.t_table = std::min(table.at(key).height_complete,
                           table.at(ckey).height_complete);
      min_height = std::min(min_height, m.t_table);
      members.push_back(std::move(m));
      rep.phi_total += 1;
      rep.sum_phi_log_q += std::log(static_cast<double>(q));
    }
  }
  if (members.empty())
    throw SyncFailed("violation_experiment: empty family (raise g_target)");

  double d_eta = opts.d_eta_override > 0.0 ? opts.d_eta_override
                                           : std::min(wc.d_eta, min_height);
  if (d_eta > min_height + 1e-9)
    throw lfunctions::IncompleteTable(
        "violation_experiment: zeros certified only to " +
        std::to_string(min_height) + " < D_eta = " + std::to_string(d_eta));
  rep.d_eta = d_eta;

  // collect zero terms
  MellinCache& cache = MellinCache::global();
  std::vector<ZeroTerm> aligned_window;   // |gamma| <= d_eta
  double loss_tabled = 0.0;
  KahanComplex weil_vec;
  for (auto& m : members) {
    auto zeros = ef::zeros_both_signs(table, m.inducer, m.t_table,
                                      ef::Mode::strict);
    for (auto& z : zeros) {
      std::complex<double> mv = cache.at(w, z.beta, z.gamma);
      if (std::fabs(z.gamma) <= d_eta) {
        aligned_window.push_back(ZeroTerm{m.q, z.gamma, mv});
        weil_vec.add(mv);
      } else {
        loss_tabled += std::abs(mv);
      }
    }
  }
  rep.n_zero_terms = aligned_window.size();
  rep.weil_target = std::abs(weil_vec.value());
  rep.loss_tabled = loss_tabled;

  double eta1 = w.eval(1.0);
  rep.achieved_fraction =
      rep.weil_target / (eta1 * std::max(rep.sum_phi_log_q, 1e-300));

  // analytic tail beyond each member's table
  double loss_analytic = 0.0;
  for (auto& m : members)
    loss_analytic += ef::zero_tail_bound(
        w, wc, static_cast<double>(m.inducer.q()), m.t_table);
  rep.loss_analytic = loss_analytic;

  if (rep.weil_target <= loss_tabled + loss_analytic)
    throw TailDominates(
        "violation_experiment: zero tail (" +
        std::to_string(loss_tabled + loss_analytic) +
        ") dominates the aligned target (" + std::to_string(rep.weil_target) +
        "); increase D_eta or the table height");

  // split |gamma| <= d_eta terms into aligned frequencies and a small
  // unaligned remainder bounded by |1 - e^{i theta}| <= 2
  std::map<double, double> freq_mass;  // |gamma| -> sum |M eta|
  for (auto& zt : aligned_window)
    freq_mass[std::fabs(zt.gamma)] += std::abs(zt.m);
  std::vector<std::pair<double, double>> by_mass(freq_mass.begin(),
                                                 freq_mass.end());
  std::sort(by_mass.begin(), by_mass.end(),
            [](auto& a, auto& b) { return a.second > b.second; });
  double ins_budget = rep.weil_target / 16.0;
  std::vector<double> sig_freqs;
  double mass_rest = 0.0;
  for (auto& [f, mv] : by_mass) mass_rest += mv;
  for (auto& [f, mv] : by_mass) {
    if (2.0 * mass_rest <= ins_budget || sig_freqs.size() >= opts.max_aligned)
      break;
    sig_freqs.push_back(f);
    mass_rest -= mv;
  }
  double sum_sig = 0.0;
  for (auto& [f, mv] : by_mass)
    if (std::find(sig_freqs.begin(), sig_freqs.end(), f) != sig_freqs.end())
      sum_sig += mv;
  rep.sum_sig_abs = sum_sig;
  rep.sum_insig_abs = mass_rest;
  rep.n_frequencies = sig_freqs.size();

  // Diophantine search on the significant frequencies
  SyncProblem prob;
  for (double f : sig_freqs) prob.lambdas.push_back(f / kTwoPi);
  prob.M = static_cast<int>(std::ceil(std::exp(wc.c_eta)));
  rep.defect_target = 1.0 / static_cast<double>(prob.M);

  SyncResult found;
  bool brute_ok = opts.search != "lattice" && prob.lambdas.size() <= 6 &&
                  prob.M <= 20;
  if (brute_ok) {
    double need = std::pow(static_cast<double>(prob.M),
                           3.0 * static_cast<double>(prob.lambdas.size()));
    brute_ok = need <= static_cast<double>(1ull << 46);
    if (brute_ok) prob.N = static_cast<std::uint64_t>(need);
  }
  if (opts.search == "brute" && !brute_ok)
    throw std::invalid_argument(
        "violation_experiment: brute search infeasible for this instance");
  if (brute_ok) {
    found = dio_search_brute(prob, opts.threads);
  } else {
    try {
      found = dio_search_lattice(prob, opts.seed);
    } catch (const QualityMiss& qm) {
      throw SyncFailed(std::string("violation_experiment: ") + qm.what());
    }
  }
  rep.defect = found.defect;
  rep.method = found.method;
  rep.t_decimal = found.t.to_decimal();
  rep.log_t = found.t.log_natural();
  rep.log_x_log = found.t.to_double();

  // aligned-window phase sum at t (diagnostic + certificate cross-check)
  {
    std::vector<double> theta(aligned_window.size());
    std::vector<double> cre(aligned_window.size()), cim(aligned_window.size());
    for (std::size_t i = 0; i < aligned_window.size(); ++i) {
      double lam = std::fabs(aligned_window[i].gamma) / kTwoPi;
      double fr = found.t.signed_frac(lam);
      theta[i] = kTwoPi * (aligned_window[i].gamma >= 0 ? fr : -fr);
      cre[i] = aligned_window[i].m.real();
      cim[i] = aligned_window[i].m.imag();
    }
    double sre = 0.0, sim = 0.0;
    kernels::active().phase_sum(theta.data(), cre.data(), cim.data(),
                                theta.size(), &sre, &sim);
    rep.phase_sum_at_t = {sre, sim};
  }

  // certificate chain
  rep.loss_misalign = 4.0 * kPi * kPi * rep.defect * rep.sum_sig_abs;
  rep.loss_insig = 2.0 * rep.sum_insig_abs;
  rep.loss_paper_form =
      4.0 * kPi * kPi * rep.defect * wc.h_eta * rep.sum_phi_log_q;
  double exp_half_t =
      rep.log_t > 710.0 ? 0.0 : std::exp(-0.5 * rep.log_x_log);
  double loss_expl = 0.0;
  for (auto& m : members)
    loss_expl +=
        opts.c_err * std::log(static_cast<double>(m.q) + 1.0) * exp_half_t;
  rep.loss_explicit = loss_expl;

  rep.s_cert = rep.weil_target - rep.loss_misalign - rep.loss_insig -
               rep.loss_tabled - rep.loss_analytic - rep.loss_explicit;
  if (rep.s_cert <= 0.0)
    throw SyncFailed(
        "violation_experiment: certificate collapsed (s_cert = " +
        std::to_string(rep.s_cert) + "); defect " + std::to_string(rep.defect));

  // per-character normalized psi over the full tabled window
  double phi_q_total = 0.0;
  std::map<std::uint64_t, double> per_q_sumsq;
  for (auto& m : members) {
    auto ev = ef::psi_eta_explicit_big(w, wc, found.t, m.inducer, table,
                                       m.t_table, ef::Mode::strict, &cache);
    CharacterTrace tr;
    tr.q = m.q;
    tr.label = m.chi.label();
    tr.psi_hat_abs = std::abs(ev.normalized);
    tr.phase_sum = ev.normalized;
    rep.trace.push_back(tr);
    per_q_sumsq[m.q] += tr.psi_hat_abs * tr.psi_hat_abs;
  }
  (void)phi_q_total;

  double lq = std::log(static_cast<double>(Q));
  if (opts.mode == ExperimentMode::single) {
    double phi_q =
        static_cast<double>(characters::CharacterGroup::get(Q)->phi());
    double phi_members = static_cast<double>(rep.phi_total);
    rep.lower_bound =
        rep.s_cert * rep.s_cert / (phi_q * phi_members * lq);
    rep.direct_ratio = per_q_sumsq[Q] / (phi_q * lq);
  } else {
    double phi_members = static_cast<double>(rep.phi_total);
    rep.lower_bound = rep.s_cert * rep.s_cert /
                      (2.0 * static_cast<double>(Q) * static_cast<double>(Q) *
                       phi_members * lq);
    KahanSum direct;
    for (auto& [q, ss] : per_q_sumsq)
      direct.add(ss /
                 static_cast<double>(characters::CharacterGroup::get(q)->phi()));
    rep.direct_ratio = direct.value() / (static_cast<double>(Q) * lq);
  }
  rep.exceeds_target = rep.lower_bound > opts.target_M;
  return rep;
}

}  // namespace primevar::sync
