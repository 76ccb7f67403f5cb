#include "primevar/lfunctions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "primevar/gammafn.hpp"
#include "primevar/parallel.hpp"

namespace primevar::lfunctions {

using characters::DirichletCharacter;

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 6.28318530717958647692;

// B_2 .. B_24
constexpr double kBernoulli[12] = {
    1.0 / 6,       -1.0 / 30,       1.0 / 42,       -1.0 / 30,
    5.0 / 66,      -691.0 / 2730,   7.0 / 6,        -3617.0 / 510,
    43867.0 / 798, -174611.0 / 330, 854513.0 / 138, -236364091.0 / 2730};

// Shared Euler-Maclaurin evaluation.  When minus_pole is set, the
// (N+a)^{1-s}/(s-1) term is replaced by its pole-free part at s=1
// (-log(N+a)), which is what survives in sum_a chi(a) zeta(s, a/q) for
// non-principal chi.
std::complex<double> hurwitz_em(std::complex<double> s, double a,
                                bool minus_pole) {
  int N = static_cast<int>(std::ceil(10.0 + std::abs(s.imag())));
  std::complex<double> sum{0.0, 0.0};
  for (int n = 0; n < N; ++n) sum += std::exp(-s * std::log(n + a));

  double Na = N + a;
  double lNa = std::log(Na);
  std::complex<double> Na_ms = std::exp(-s * lNa);  // (N+a)^{-s}
  if (minus_pole)
    sum -= lNa;  // limit of (N+a)^{1-s}/(s-1) - 1/(s-1) at s=1
  else
    sum += Na_ms * Na / (s - 1.0);
  sum += 0.5 * Na_ms;

  // B_{2k}/(2k)! * (s)_{2k-1} * (N+a)^{-s-2k+1}
  std::complex<double> poch = s;            // rising factorial (s)_{2k-1}
  std::complex<double> power = Na_ms / Na;  // (N+a)^{-s-2k+1} at k=1
  double fact = 2.0;                        // (2k)!
  double prev_mag = std::numeric_limits<double>::infinity();
  for (int k = 1; k <= 12; ++k) {
    std::complex<double> term = kBernoulli[k - 1] / fact * poch * power;
    sum += term;
    double mag = std::abs(term);
    if (k >= 10 && mag > prev_mag && mag > 1e-10 * std::abs(sum))
      throw PrecisionLoss("hurwitz_zeta: Euler-Maclaurin tail not decreasing");
    prev_mag = mag;
    poch *= (s + static_cast<double>(2 * k - 1)) *
            (s + static_cast<double>(2 * k));
    fact *= (2 * k + 1) * (2 * k + 2);
    power /= Na * Na;
  }
  return sum;
}

}  // namespace

std::complex<double> hurwitz_zeta(std::complex<double> s, double a) {
  if (a <= 0.0 || a > 1.0)
    throw std::invalid_argument("hurwitz_zeta: need 0 < a <= 1");
  if (s == std::complex<double>(1.0, 0.0))
    throw PoleError("hurwitz_zeta: pole at s=1");
  return hurwitz_em(s, a, false);
}

std::complex<double> l_value(const DirichletCharacter& chi,
                             std::complex<double> s) {
  std::uint64_t q = chi.q();
  if (q > 200) throw std::invalid_argument("l_value: q <= 200 required");
  if (std::abs(s.imag()) > 500.0)
    throw std::invalid_argument("l_value: |Im s| <= 500 required");
  bool at_one = (s == std::complex<double>(1.0, 0.0));
  if (chi.is_principal() && at_one)
    throw PoleError("l_value: pole at s=1 for the principal character");
  if (q == 1) return hurwitz_zeta(s, 1.0);

  // For non-principal chi at s=1 the Hurwitz poles cancel (sum chi(a) = 0);
  // use the pole-free parts.
  std::complex<double> sum{0.0, 0.0};
  for (std::uint64_t a = 1; a <= q; ++a) {
    std::complex<double> c = chi(a);
    if (c == std::complex<double>(0.0, 0.0)) continue;
    sum += c * hurwitz_em(s, static_cast<double>(a) / q, at_one);
  }
  return std::exp(-s * std::log(static_cast<double>(q))) * sum;
}

namespace {

// Rotated completed L-function of a primitive character: real on the
// critical line, vanishing exactly at the on-line zeros.
struct HardyContext {
  const DirichletCharacter* chi;
  double q;
  int kappa;
  double half_arg_eps;

  explicit HardyContext(const DirichletCharacter& c) : chi(&c) {
    q = static_cast<double>(c.q());
    kappa = c.parity();
    if (c.q() == 1) {
      half_arg_eps = 0.0;
      return;
    }
    std::complex<double> tau{0.0, 0.0};
    for (std::uint64_t a = 1; a <= c.q(); ++a)
      tau += (*chi)(a) * std::polar(1.0, kTwoPi * static_cast<double>(a) / q);
    std::complex<double> eps =
        tau / (std::pow(std::complex<double>(0.0, 1.0),
                        static_cast<double>(kappa)) *
               std::sqrt(q));
    half_arg_eps = 0.5 * std::arg(eps);
  }

  double z(double t) const {
    std::complex<double> s(0.5, t);
    std::complex<double> lfac =
        (s + static_cast<double>(kappa)) / 2.0 * std::log(q / kPi) +
        log_gamma((s + static_cast<double>(kappa)) / 2.0);
    std::complex<double> L = l_value(*chi, s);
    std::complex<double> w =
        std::exp(std::complex<double>(0.0, -half_arg_eps) + lfac) * L;
    return w.real();
  }
};

}  // namespace

double hardy_z(const DirichletCharacter& chi, double t) {
  HardyContext ctx(chi);
  return ctx.z(t);
}

std::vector<LZero> find_zeros(const DirichletCharacter& chi, double T) {
  if (chi.q() > 200) throw std::invalid_argument("find_zeros: q <= 200");
  if (T > 200.0) throw std::invalid_argument("find_zeros: T <= 200");
  if (chi.q() > 1 && chi.conductor() != chi.q())
    throw std::invalid_argument("find_zeros: character must be primitive");

  HardyContext ctx(chi);
  double slack = 2.0 + std::log(static_cast<double>(chi.q()) * (T + 2.0));
  double predicted = rvm_predict(chi, T);

  double h = std::min(0.2, 1.0 / std::log(static_cast<double>(chi.q()) *
                                          (T + 2.0)));
  for (int attempt = 0;; ++attempt) {
    std::vector<double> zeros;
    double t_prev = 1e-4;
    double z_prev = ctx.z(t_prev);
    for (double t = h; t_prev < T; t += h) {
      double tc = std::min(t, T);
      double zc = ctx.z(tc);
      if (z_prev * zc < 0.0) {
        double lo = t_prev, hi = tc, zlo = z_prev;
        while (hi - lo > 1e-10) {
          double mid = 0.5 * (lo + hi);
          double zm = ctx.z(mid);
          if (zm == 0.0) {
            lo = hi = mid;
            break;
          }
          if (zlo * zm < 0.0)
            hi = mid;
          else {
            lo = mid;
            zlo = zm;
          }
        }
        zeros.push_back(0.5 * (lo + hi));
      }
      t_prev = tc;
      z_prev = zc;
      if (tc >= T) break;
    }
    if (std::fabs(static_cast<double>(zeros.size()) - predicted) <= slack) {
      std::vector<LZero> out;
      out.reserve(zeros.size());
      for (double g : zeros)
        out.push_back(LZero{static_cast<std::uint32_t>(chi.q()),
                            static_cast<std::uint32_t>(chi.label()), 0.5, g,
                            ZeroSource::computed});
      return out;
    }
    if (attempt >= 6)
      throw CountMismatch(
          "find_zeros: q=" + std::to_string(chi.q()) +
          " label=" + std::to_string(chi.label()) + " found " +
          std::to_string(zeros.size()) + " vs RVM " +
          std::to_string(predicted) + " (slack " + std::to_string(slack) +
          ")");
    h *= 0.5;
  }
}

double rvm_predict(const DirichletCharacter& chi, double T) {
  if (T <= 0.0) return 0.0;
  double qc = static_cast<double>(chi.conductor());
  return T / kTwoPi * std::log(qc * T / (kTwoPi * std::exp(1.0)));
}

void ZeroTable::add_block(CharKey key, PerChar block) {
  for (size_t i = 0; i < block.zeros.size(); ++i) {
    const auto& z = block.zeros[i];
    if (z.gamma <= 0.0)
      throw SymmetryViolation("zero table stores gamma > 0 only (q=" +
                              std::to_string(key.first) + ")");
    if (i > 0 && z.gamma <= block.zeros[i - 1].gamma)
      throw SymmetryViolation(
          "non-increasing gamma for q=" + std::to_string(key.first) +
          " label=" + std::to_string(key.second));
    if (z.beta <= 0.0 || z.beta >= 1.0) throw ParseError("beta outside (0,1)");
    if (z.beta != 0.5) has_offline_ = true;
  }
  auto it = chars_.find(key);
  if (it == chars_.end()) {
    chars_[key] = std::move(block);
    return;
  }
  PerChar& cur = it->second;
  const PerChar& lo = cur.height_complete <= block.height_complete ? cur : block;
  const PerChar& hi = cur.height_complete <= block.height_complete ? block : cur;
  for (size_t i = 0; i < lo.zeros.size() && i < hi.zeros.size(); ++i)
    if (std::fabs(lo.zeros[i].gamma - hi.zeros[i].gamma) > 1e-7)
      throw ParseError("conflicting duplicate block for q=" +
                       std::to_string(key.first));
  cur = hi;
}

const ZeroTable::PerChar& ZeroTable::at(CharKey key) const {
  auto it = chars_.find(key);
  if (it == chars_.end())
    throw IncompleteTable("no zeros for q=" + std::to_string(key.first) +
                          " label=" + std::to_string(key.second));
  return it->second;
}

void ZeroTable::merge(const ZeroTable& other) {
  for (auto& [k, v] : other.chars_) add_block(k, v);
}

int count_zeros(const ZeroTable& table, const DirichletCharacter& chi,
                double T) {
  const auto& pc = table.at({static_cast<std::uint32_t>(chi.q()),
                             static_cast<std::uint32_t>(chi.label())});
  if (T > pc.height_complete + 1e-12)
    throw IncompleteTable("count_zeros: T beyond certified height");
  int n = 0;
  for (const auto& z : pc.zeros)
    if (z.gamma <= T) ++n;
  return n;
}

std::pair<double, double> inverse_square_sum(const ZeroTable& table,
                                             const DirichletCharacter& chi,
                                             double t_min) {
  const auto& pc = table.at({static_cast<std::uint32_t>(chi.q()),
                             static_cast<std::uint32_t>(chi.label())});
  if (t_min >= pc.height_complete)
    throw IncompleteTable("inverse_square_sum: t_min >= certified height");
  double partial = 0.0;
  for (const auto& z : pc.zeros)
    if (z.gamma > t_min)
      partial += 1.0 / (z.beta * z.beta + z.gamma * z.gamma);
  // one-sided density tail: int_{Tc}^inf (1/2pi) log(q u/(2 pi e)) u^{-2} du
  double Tc = pc.height_complete;
  double qc = static_cast<double>(chi.conductor());
  double tail =
      (std::log(qc * Tc / (kTwoPi * std::exp(1.0))) + 1.0) / (kTwoPi * Tc);
  return {partial, tail};
}

double calibrate_c_abs(const ZeroTable& table) {
  double sup = 0.0;
  for (auto& [key, pc] : table.blocks()) {
    auto chi = characters::character_by_label(key.first, key.second);
    auto conj_key =
        CharKey{key.first, static_cast<std::uint32_t>(chi.conjugate().label())};
    if (!table.has(conj_key)) continue;
    const auto& pcc = table.at(conj_key);
    double Tc = std::min(pc.height_complete, pcc.height_complete);
    double qc = static_cast<double>(chi.conductor());
    for (double T : {2.0, 5.0, 10.0, 20.0, 50.0}) {
      if (T >= Tc) continue;
      // both signs: positive ordinates of chi and of conj(chi)
      double s = 0.0;
      for (const auto& z : pc.zeros)
        if (z.gamma > T) s += 1.0 / (z.beta * z.beta + z.gamma * z.gamma);
      for (const auto& z : pcc.zeros)
        if (z.gamma > T) s += 1.0 / (z.beta * z.beta + z.gamma * z.gamma);
      s += 2.0 * (std::log(qc * Tc / (kTwoPi * std::exp(1.0))) + 1.0) /
           (kTwoPi * Tc);
      double ratio = s * T / std::log(static_cast<double>(key.first) * T);
      sup = std::max(sup, ratio);
    }
  }
  return sup;
}

ZeroTable compute_bundle(std::uint32_t q_max, int threads) {
  struct Job {
    DirichletCharacter chi;
    double height;
  };
  std::vector<Job> jobs;
  for (std::uint32_t q = 1; q <= q_max; ++q) {
    for (auto& chi : characters::character_group(q)) {
      if (q > 1 && (chi.is_principal() || chi.conductor() != q)) continue;
      jobs.push_back({chi, q <= 10 ? 200.0 : 100.0});
    }
  }
  std::vector<ZeroTable::PerChar> results(jobs.size());
  parallel_for(
      jobs.size(),
      [&](std::size_t i) {
        auto zs = find_zeros(jobs[i].chi, jobs[i].height);
        results[i] = ZeroTable::PerChar{std::move(zs), jobs[i].height};
      },
      threads);
  ZeroTable table;
  for (size_t i = 0; i < jobs.size(); ++i)
    table.add_block({static_cast<std::uint32_t>(jobs[i].chi.q()),
                     static_cast<std::uint32_t>(jobs[i].chi.label())},
                    std::move(results[i]));
  return table;
}

}  // namespace primevar::lfunctions
