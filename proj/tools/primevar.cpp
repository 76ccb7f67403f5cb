// primevar: weighted prime-variance laboratory CLI.
//
// Subcommands: zeros (compute|bundle|verify), characters dump, psum,
// variance, explicit, weil, violate, calibrate, report.
// Exit codes: 0 success, 2 validation/usage error, 3 certificate failure.

#include <complex>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "primevar/characters.hpp"
#include "primevar/explicit_formula.hpp"
#include "primevar/lfunctions.hpp"
#include "primevar/primesums.hpp"
#include "primevar/report.hpp"
#include "primevar/sync.hpp"
#include "primevar/variance.hpp"
#include "primevar/weights.hpp"

namespace pv = primevar;
using nlohmann::json;

namespace {

struct CertificateFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void emit(const std::string& out_path, const std::string& content) {
  if (out_path.empty())
    std::cout << content;
  else
    pv::report::write_file(out_path, content);
}

std::string default_zeros_path() {
  if (const char* env = std::getenv("PRIMEVAR_ZEROS")) return env;
  return "data/zeros_bundled.zt";
}

json weight_constants_json(const pv::weights::WeightConstants& wc) {
  return json{{"b_eta", wc.b_eta},       {"h_eta", wc.h_eta},
              {"c_eta", wc.c_eta},       {"d_eta", wc.d_eta},
              {"c_abs", wc.c_abs},       {"sigma_at_max", wc.sigma_at_max}};
}

int run(int argc, char** argv) {
  CLI::App app{"primevar: weighted variances of primes in progressions"};
  app.require_subcommand(1);
  app.set_config("--config");
  app.allow_config_extras(true);

  int threads = 0;
  std::uint64_t seed = 1;
  std::string zeros_path = default_zeros_path();
  app.add_option("--threads", threads, "worker threads (0 = hardware)");
  app.add_option("--seed", seed, "random seed for randomized searches");
  app.add_option("--zeros", zeros_path, "zero-table file");

  // ---- zeros ----
  auto* zeros = app.add_subcommand("zeros", "zero tables");
  zeros->require_subcommand(1);
  auto* zc = zeros->add_subcommand("compute", "compute zeros for one modulus");
  std::uint64_t zc_q = 0;
  double zc_height = 100.0;
  std::string zc_out;
  zc->add_option("--q", zc_q, "modulus")->required();
  zc->add_option("--height", zc_height, "height T");
  zc->add_option("--out", zc_out, "output file")->required();

  auto* zb = zeros->add_subcommand("bundle", "standard bundled dataset");
  std::uint64_t zb_upto = 20;
  std::string zb_out;
  zb->add_option("--upto", zb_upto, "largest modulus");
  zb->add_option("--out", zb_out, "output file")->required();

  auto* zv = zeros->add_subcommand("verify", "validate a zero table");
  std::string zv_file;
  zv->add_option("file", zv_file, "table to verify")->required();

  // ---- characters dump ----
  auto* chars = app.add_subcommand("characters", "character tables");
  chars->require_subcommand(1);
  auto* cd = chars->add_subcommand("dump", "emit value tables as CSV");
  std::uint64_t cd_q = 0;
  std::string cd_out;
  cd->add_option("--q", cd_q, "modulus")->required();
  cd->add_option("--out", cd_out, "output file");

  // ---- psum ----
  auto* psum = app.add_subcommand("psum", "weighted prime sum");
  double ps_x = 0.0;
  std::uint64_t ps_q = 0, ps_label = 0;
  std::string ps_weight = "exp_linear", ps_kind = "psi", ps_out;
  psum->add_option("--x", ps_x, "scale x")->required();
  psum->add_option("--q", ps_q, "modulus")->required();
  psum->add_option("--label", ps_label, "character label");
  psum->add_option("--weight", ps_weight, "weight preset");
  psum->add_option("--kind", ps_kind, "psi|theta");
  psum->add_option("--out", ps_out, "output file");

  // ---- variance ----
  auto* var = app.add_subcommand("variance", "V_eta and G_eta both ways");
  double v_x = 0.0;
  std::uint64_t v_q = 0;
  std::string v_weight = "exp_linear", v_out;
  bool v_classical = false;
  var->add_option("--x", v_x, "scale x")->required();
  var->add_option("--q", v_q, "modulus")->required();
  var->add_option("--weight", v_weight, "weight preset");
  var->add_flag("--classical", v_classical, "include V_Lambda and G");
  var->add_option("--out", v_out, "output file");

  // ---- explicit ----
  auto* exf = app.add_subcommand("explicit", "psi_eta from zeros");
  std::uint64_t e_q = 0, e_label = 0;
  double e_logx = 0.0, e_height = 100.0;
  std::string e_weight = "exp_linear", e_mode = "strict", e_out;
  exf->add_option("--q", e_q, "modulus")->required();
  exf->add_option("--label", e_label, "character label")->required();
  exf->add_option("--logx", e_logx, "t = log x")->required();
  exf->add_option("--height", e_height, "truncation height");
  exf->add_option("--weight", e_weight, "weight preset");
  exf->add_option("--mode", e_mode, "strict|exploratory");
  exf->add_option("--out", e_out, "output file");

  // ---- weil ----
  auto* weil = app.add_subcommand("weil", "Weil sums over zeros");
  std::uint64_t w_q = 0;
  double w_height = 100.0;
  std::string w_weight = "exp_linear", w_out;
  weil->add_option("--q", w_q, "modulus")->required();
  weil->add_option("--height", w_height, "truncation height");
  weil->add_option("--weight", w_weight, "weight preset");
  weil->add_option("--out", w_out, "output file");

  // ---- violate ----
  auto* vio = app.add_subcommand("violate", "synchronization experiment");
  std::uint64_t vi_Q = 0;
  double vi_target = 0.0, vi_deta = 0.0;
  std::string vi_weight = "exp_linear", vi_mode = "single",
              vi_search = "auto", vi_out;
  vio->add_option("--Q", vi_Q, "modulus (single) or range base (averaged)")
      ->required();
  vio->add_option("--weight", vi_weight, "weight preset");
  vio->add_option("--target", vi_target, "target lower bound M");
  vio->add_option("--mode", vi_mode, "single|averaged");
  vio->add_option("--d-eta", vi_deta, "zero window height D_eta");
  vio->add_option("--search", vi_search, "auto|brute|lattice");
  vio->add_option("--out", vi_out, "output JSON file");

  // ---- calibrate ----
  auto* cal = app.add_subcommand("calibrate", "measure c_abs and c_err");
  double cal_cabs = 1.0;
  std::string cal_weight = "exp_linear", cal_out;
  cal->add_option("--c-abs", cal_cabs, "configured c_abs to test");
  cal->add_option("--weight", cal_weight, "weight preset");
  cal->add_option("--out", cal_out, "output JSON file");

  // ---- report ----
  auto* rep = app.add_subcommand("report", "merge CSV reports");
  std::vector<std::string> rep_in;
  std::string rep_out;
  rep->add_option("--in", rep_in, "input CSV files")->required();
  rep->add_option("--out", rep_out, "output file")->required();

  CLI11_PARSE(app, argc, argv);

  auto load_table = [&]() {
    return pv::lfunctions::ingest_zeros(zeros_path);
  };

  if (zc->parsed()) {
    pv::lfunctions::ZeroTable table;
    for (auto& chi : pv::characters::character_group(zc_q)) {
      if (zc_q > 1 && (chi.is_principal() || chi.conductor() != zc_q))
        continue;
      auto zs = pv::lfunctions::find_zeros(chi, zc_height);
      table.add_block({static_cast<std::uint32_t>(zc_q),
                       static_cast<std::uint32_t>(chi.label())},
                      {std::move(zs), zc_height});
    }
    pv::lfunctions::write_zeros(table, zc_out);
    std::cout << "wrote " << zc_out << "\n";
    return 0;
  }
  if (zb->parsed()) {
    auto table = pv::lfunctions::compute_bundle(
        static_cast<std::uint32_t>(zb_upto), threads);
    pv::lfunctions::write_zeros(table, zb_out);
    std::cout << "wrote " << zb_out << "\n";
    return 0;
  }
  if (zv->parsed()) {
    auto table = pv::lfunctions::ingest_zeros(zv_file);
    auto failures = pv::lfunctions::verify_table(table);
    if (failures.empty()) {
      std::cout << "ok: " << table.blocks().size() << " character blocks\n";
      return 0;
    }
    for (auto& f : failures) std::cerr << "FAIL " << f << "\n";
    throw CertificateFailure("zero table verification failed");
  }

  if (cd->parsed()) {
    std::string csv = pv::report::csv_row({"q", "label", "n", "re", "im",
                                           "angle_num", "angle_den",
                                           "conductor", "parity",
                                           "is_principal"});
    for (auto& chi : pv::characters::character_group(cd_q)) {
      for (std::uint64_t n = 0; n < std::max<std::uint64_t>(cd_q, 1); ++n) {
        auto a = chi.angle(n);
        auto v = chi(n);
        csv += pv::report::csv_row(
            {std::to_string(cd_q), std::to_string(chi.label()),
             std::to_string(n), pv::report::fmt_double(v.real()),
             pv::report::fmt_double(v.imag()),
             a ? std::to_string(a->first) : "",
             a ? std::to_string(a->second) : "",
             std::to_string(chi.conductor()), std::to_string(chi.parity()),
             chi.is_principal() ? "1" : "0"});
      }
    }
    emit(cd_out, csv);
    return 0;
  }

  if (psum->parsed()) {
    const auto& w = pv::weights::preset(ps_weight);
    auto chi = pv::characters::character_by_label(ps_q, ps_label);
    auto s = ps_kind == "theta"
                 ? pv::primesums::theta_eta_direct(w, ps_x, chi, threads)
                 : pv::primesums::psi_eta_direct(w, ps_x, chi, threads);
    std::string csv =
        pv::report::csv_row({"x", "q", "label", "re", "im", "trunc_bound"});
    csv += pv::report::csv_row(
        {pv::report::fmt_double(ps_x), std::to_string(ps_q),
         std::to_string(ps_label), pv::report::fmt_double(s.value.real()),
         pv::report::fmt_double(s.value.imag()),
         pv::report::fmt_double(s.truncation_bound)});
    emit(ps_out, csv);
    return 0;
  }

  if (var->parsed()) {
    const auto& w = pv::weights::preset(v_weight);
    auto r = pv::variance::compute(w, v_x, v_q, v_classical, threads);
    std::string csv = pv::report::csv_row(
        {"x", "q", "weight", "v_eta_residue", "v_eta_parseval",
         "g_eta_residue", "g_eta_parseval", "v_classical", "g_classical",
         "hooley_ratio", "grh_ratio"});
    csv += pv::report::csv_row(
        {pv::report::fmt_double(r.x), std::to_string(r.q), r.weight,
         pv::report::fmt_double(r.v_eta_residue),
         pv::report::fmt_double(r.v_eta_parseval),
         pv::report::fmt_double(r.g_eta_residue),
         pv::report::fmt_double(r.g_eta_parseval),
         pv::report::fmt_double(r.v_classical),
         pv::report::fmt_double(r.g_classical),
         pv::report::fmt_double(r.hooley_ratio),
         pv::report::fmt_double(r.grh_ratio)});
    emit(v_out, csv);
    return 0;
  }

  if (exf->parsed()) {
    const auto& w = pv::weights::preset(e_weight);
    auto wc = pv::weights::constants(w, 1.0,
                                     static_cast<double>(std::max<std::uint64_t>(e_q, 3)));
    auto chi = pv::characters::character_by_label(e_q, e_label);
    auto table = load_table();
    auto mode = e_mode == "exploratory"
                    ? pv::explicit_formula::Mode::exploratory
                    : pv::explicit_formula::Mode::strict;
    auto ev = pv::explicit_formula::psi_eta_explicit(w, wc, e_logx, chi, table,
                                                     e_height, mode);
    std::string csv = pv::report::csv_row({"q", "label", "logx", "height",
                                           "norm_re", "norm_im", "abs",
                                           "tail_certificate", "main_term"});
    csv += pv::report::csv_row(
        {std::to_string(e_q), std::to_string(e_label),
         pv::report::fmt_double(e_logx), pv::report::fmt_double(e_height),
         pv::report::fmt_double(ev.normalized.real()),
         pv::report::fmt_double(ev.normalized.imag()),
         pv::report::fmt_double(std::abs(ev.normalized)),
         pv::report::fmt_double(ev.tail_certificate),
         ev.main_term_included ? "1" : "0"});
    emit(e_out, csv);
    return 0;
  }

  if (weil->parsed()) {
    const auto& w = pv::weights::preset(w_weight);
    auto table = load_table();
    double eta1 = w.eval(1.0);
    std::string csv = pv::report::csv_row(
        {"q", "label", "re", "im", "eta1_log_qchi", "deviation"});
    for (auto& chi : pv::characters::character_group(w_q)) {
      if (chi.is_principal() || chi.conductor() != w_q) continue;
      auto s = pv::explicit_formula::weil_sum(w, chi, table, w_height);
      double target = eta1 * std::log(static_cast<double>(chi.conductor()));
      csv += pv::report::csv_row(
          {std::to_string(w_q), std::to_string(chi.label()),
           pv::report::fmt_double(s.real()), pv::report::fmt_double(s.imag()),
           pv::report::fmt_double(target),
           pv::report::fmt_double(std::abs(s - target))});
    }
    emit(w_out, csv);
    return 0;
  }

  if (vio->parsed()) {
    const auto& w = pv::weights::preset(vi_weight);
    auto table = load_table();
    pv::sync::ViolationOptions opts;
    opts.mode = vi_mode == "averaged" ? pv::sync::ExperimentMode::averaged
                                      : pv::sync::ExperimentMode::single;
    opts.target_M = vi_target;
    opts.d_eta_override = vi_deta;
    opts.search = vi_search;
    opts.seed = seed;
    opts.threads = threads;
    auto r = pv::sync::violation_experiment(w, vi_Q, table, opts);
    auto wc = pv::weights::constants(w, opts.c_abs, static_cast<double>(vi_Q));

    json j;
    j["config"] = {{"Q", vi_Q},
                   {"weight", vi_weight},
                   {"mode", vi_mode},
                   {"target", vi_target},
                   {"d_eta", r.d_eta},
                   {"search", vi_search},
                   {"seed", seed},
                   {"zeros", zeros_path}};
    j["dataset_fnv1a"] = pv::report::fnv1a_file(zeros_path);
    j["weight_constants"] = weight_constants_json(wc);
    j["family"] = {{"moduli", r.moduli},
                   {"phi_total", r.phi_total},
                   {"sum_phi_log_q", r.sum_phi_log_q}};
    j["alignment"] = {{"n_frequencies", r.n_frequencies},
                      {"n_zero_terms", r.n_zero_terms},
                      {"defect", r.defect},
                      {"defect_target", r.defect_target},
                      {"method", r.method == pv::sync::SearchMethod::brute
                                     ? "brute"
                                     : r.method ==
                                           pv::sync::SearchMethod::randomized
                                         ? "randomized"
                                         : "lattice"},
                      {"t", r.t_decimal},
                      {"log_t", r.log_t}};
    j["certificate"] = {{"weil_target", r.weil_target},
                        {"achieved_fraction", r.achieved_fraction},
                        {"sum_sig_abs", r.sum_sig_abs},
                        {"sum_insig_abs", r.sum_insig_abs},
                        {"loss_misalign", r.loss_misalign},
                        {"loss_insig", r.loss_insig},
                        {"loss_tabled", r.loss_tabled},
                        {"loss_analytic", r.loss_analytic},
                        {"loss_explicit", r.loss_explicit},
                        {"loss_paper_form", r.loss_paper_form},
                        {"s_cert", r.s_cert}};
    j["lower_bound"] = r.lower_bound;
    j["direct_ratio"] = r.direct_ratio;
    j["exceeds_target"] = r.exceeds_target;
    json trace = json::array();
    for (auto& tr : r.trace)
      trace.push_back({{"q", tr.q},
                       {"label", tr.label},
                       {"psi_hat_abs", tr.psi_hat_abs},
                       {"re", tr.phase_sum.real()},
                       {"im", tr.phase_sum.imag()}});
    j["trace"] = trace;
    emit(vi_out, j.dump(2) + "\n");
    return 0;
  }

  if (cal->parsed()) {
    auto table = load_table();
    const auto& w = pv::weights::preset(cal_weight);
    double c_emp = pv::lfunctions::calibrate_c_abs(table);
    // c_err: direct vs explicit over a small grid
    double c_err_emp = 0.0;
    auto wc = pv::weights::constants(w, cal_cabs, 3.0);
    for (std::uint64_t q : {3ull, 4ull, 5ull}) {
      for (auto& chi : pv::characters::character_group(q)) {
        if (chi.is_principal() || chi.conductor() != q) continue;
        for (double x : {1e3, 1e4}) {
          auto direct = pv::primesums::psi_eta_direct(w, x, chi, threads);
          auto ev = pv::explicit_formula::psi_eta_explicit(
              w, wc, std::log(x), chi, table, 100.0);
          double err = std::abs(direct.value -
                                ev.normalized * std::sqrt(x)) -
                       ev.tail_certificate * std::sqrt(x);
          double denom = std::log(static_cast<double>(q) + 1.0);
          c_err_emp = std::max(c_err_emp, err / denom);
        }
      }
    }
    json j;
    j["c_abs_configured"] = cal_cabs;
    j["c_abs_empirical"] = c_emp;
    j["c_abs_admissible"] = c_emp <= cal_cabs;
    j["c_err_empirical"] = c_err_emp;
    j["dataset_fnv1a"] = pv::report::fnv1a_file(zeros_path);
    j["weight"] = cal_weight;
    emit(cal_out, j.dump(2) + "\n");
    return 0;
  }

  if (rep->parsed()) {
    std::string merged;
    std::string header;
    for (auto& f : rep_in) {
      std::string content = pv::report::read_file(f);
      auto eol = content.find('\n');
      if (eol == std::string::npos)
        throw std::invalid_argument("report: empty CSV " + f);
      std::string h = content.substr(0, eol + 1);
      if (header.empty()) {
        header = h;
        merged = content;
      } else {
        if (h != header)
          throw std::invalid_argument("report: header mismatch in " + f);
        merged += content.substr(eol + 1);
      }
    }
    pv::report::write_file(rep_out, merged);
    return 0;
  }

  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const CertificateFailure& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const pv::lfunctions::CountMismatch& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const pv::lfunctions::SymmetryViolation& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const pv::sync::SyncFailed& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const pv::sync::TailDominates& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const pv::sync::QualityMiss& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const pv::sync::NotFound& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const pv::characters::FamilyTooSmall& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
