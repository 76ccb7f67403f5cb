#include "primevar/characters.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numeric>

namespace primevar::characters {

namespace {

constexpr double kTwoPi = 6.28318530717958647692;

std::uint64_t pow_mod(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
  unsigned __int128 r = 1, x = b % m;
  while (e) {
    if (e & 1) r = r * x % m;
    x = x * x % m;
    e >>= 1;
  }
  return static_cast<std::uint64_t>(r);
}

std::vector<std::pair<std::uint64_t, unsigned>> factorize(std::uint64_t n) {
  std::vector<std::pair<std::uint64_t, unsigned>> f;
  for (std::uint64_t p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
    if (n % p == 0) {
      unsigned e = 0;
      while (n % p == 0) {
        n /= p;
        ++e;
      }
      f.emplace_back(p, e);
    }
  }
  if (n > 1) f.emplace_back(n, 1);
  return f;
}

std::uint64_t primitive_root_mod_p(std::uint64_t p) {
  if (p == 2) return 1;
  auto fac = factorize(p - 1);
  for (std::uint64_t g = 2; g < p; ++g) {
    bool ok = true;
    for (auto& [f, e] : fac) {
      (void)e;
      if (pow_mod(g, (p - 1) / f, p) == 1) {
        ok = false;
        break;
      }
    }
    if (ok) return g;
  }
  throw std::logic_error("no primitive root found");
}

// CRT lift: x = a mod m, x = 1 mod n, with gcd(m, n) = 1
std::uint64_t crt_lift(std::uint64_t a, std::uint64_t m, std::uint64_t n) {
  if (n == 1) return a % m;
  // x = a + m*t with a + m*t = 1 mod n  ->  t = (1 - a) * m^{-1} mod n
  std::uint64_t minv = 1;
  {
    // extended euclid for m^{-1} mod n
    std::int64_t t0 = 0, t1 = 1;
    std::int64_t r0 = static_cast<std::int64_t>(n),
                 r1 = static_cast<std::int64_t>(m % n);
    while (r1 != 0) {
      std::int64_t qq = r0 / r1;
      std::int64_t tmp = r0 - qq * r1;
      r0 = r1;
      r1 = tmp;
      tmp = t0 - qq * t1;
      t0 = t1;
      t1 = tmp;
    }
    std::int64_t inv = t0 % static_cast<std::int64_t>(n);
    if (inv < 0) inv += static_cast<std::int64_t>(n);
    minv = static_cast<std::uint64_t>(inv);
  }
  std::uint64_t am = a % n;
  std::uint64_t diff = (1 + n - am) % n;
  unsigned __int128 t = (unsigned __int128)diff * minv % n;
  return a + m * static_cast<std::uint64_t>(t);
}

std::int64_t gcd_i64(std::int64_t a, std::int64_t b) {
  return std::gcd(a, b);
}

}  // namespace

CharacterGroup::CharacterGroup(std::uint64_t q) : q_(q) {
  if (q == 0) throw DomainError("q must be >= 1");
  if (q > 1000000) throw OverflowError("character_group: q > 10^6 unsupported");
  auto fac = factorize(q);
  phi_ = 1;
  for (auto& [p, e] : fac) {
    std::uint64_t pe = 1;
    for (unsigned i = 0; i < e; ++i) pe *= p;
    std::uint64_t cof = q / pe;
    if (p == 2) {
      if (e == 1) continue;  // trivial unit group
      if (e == 2) {
        Component c;
        c.pe = 4;
        c.gen = crt_lift(3, 4, cof);
        c.order = 2;
        c.dlog.assign(4, -1);
        c.dlog[1] = 0;
        c.dlog[3] = 1;
        comps_.push_back(std::move(c));
        phi_ *= 2;
        continue;
      }
      // e >= 3: {+-1} x <3>
      std::uint64_t half = pe >> 2;  // 2^{e-2}
      std::vector<std::int32_t> three_log(pe, -1);
      std::uint64_t x = 1;
      for (std::uint64_t j = 0; j < half; ++j) {
        three_log[x] = static_cast<std::int32_t>(j);
        x = x * 3 % pe;
      }
      Component sign;
      sign.pe = pe;
      sign.gen = crt_lift(pe - 1, pe, cof);
      sign.order = 2;
      sign.is_sign = true;
      sign.dlog.assign(pe, -1);
      Component three;
      three.pe = pe;
      three.gen = crt_lift(3, pe, cof);
      three.order = half;
      three.dlog.assign(pe, -1);
      for (std::uint64_t n = 1; n < pe; n += 2) {
        if (three_log[n] >= 0) {
          sign.dlog[n] = 0;
          three.dlog[n] = three_log[n];
        } else {
          std::uint64_t m = pe - n;
          sign.dlog[n] = 1;
          three.dlog[n] = three_log[m];
        }
      }
      comps_.push_back(std::move(sign));
      comps_.push_back(std::move(three));
      phi_ *= 2 * half;
      continue;
    }
    // odd prime power: cyclic
    std::uint64_t g = primitive_root_mod_p(p);
    if (e >= 2 && pow_mod(g, p - 1, p * p) == 1) g += p;
    std::uint64_t order = pe / p * (p - 1);
    Component c;
    c.pe = pe;
    c.gen = crt_lift(g % pe, pe, cof);
    c.order = order;
    c.dlog.assign(pe, -1);
    std::uint64_t x = 1;
    for (std::uint64_t j = 0; j < order; ++j) {
      c.dlog[x] = static_cast<std::int32_t>(j);
      x = static_cast<std::uint64_t>((unsigned __int128)x * (g % pe) % pe);
    }
    comps_.push_back(std::move(c));
    phi_ *= order;
  }
}

std::shared_ptr<const CharacterGroup> CharacterGroup::get(std::uint64_t q) {
  static std::mutex mu;
  static std::map<std::uint64_t, std::shared_ptr<const CharacterGroup>> cache;
  std::lock_guard<std::mutex> lk(mu);
  auto it = cache.find(q);
  if (it != cache.end()) return it->second;
  auto g = std::shared_ptr<const CharacterGroup>(new CharacterGroup(q));
  cache[q] = g;
  return g;
}

bool CharacterGroup::index(std::uint64_t n,
                           std::vector<std::uint32_t>& out) const {
  out.resize(comps_.size());
  std::uint64_t r = n % q_;
  if (q_ == 1) return true;
  if (std::gcd(r, q_) != 1) return false;
  for (size_t i = 0; i < comps_.size(); ++i) {
    std::int32_t d = comps_[i].dlog[n % comps_[i].pe];
    if (d < 0) return false;
    out[i] = static_cast<std::uint32_t>(d);
  }
  return true;
}

DirichletCharacter::DirichletCharacter(
    std::shared_ptr<const CharacterGroup> g, std::vector<std::uint32_t> exps)
    : group_(std::move(g)), exps_(std::move(exps)) {
  const auto& comps = group_->components();
  if (exps_.size() != comps.size())
    throw DomainError("character exponent vector has wrong arity");
  std::uint64_t lab = 0, radix = 1;
  for (size_t i = 0; i < comps.size(); ++i) {
    lab += exps_[i] % comps[i].order * radix;
    radix *= comps[i].order;
  }
  label_ = lab;
}

bool DirichletCharacter::is_principal() const {
  for (auto a : exps_)
    if (a != 0) return false;
  return true;
}

std::optional<std::pair<std::int64_t, std::int64_t>>
DirichletCharacter::angle(std::uint64_t n) const {
  static thread_local std::vector<std::uint32_t> idx;
  if (!group_->index(n, idx)) return std::nullopt;
  // sum of a_i * idx_i / m_i mod 1, exact
  std::int64_t num = 0, den = 1;
  const auto& comps = group_->components();
  for (size_t i = 0; i < comps.size(); ++i) {
    std::int64_t m = static_cast<std::int64_t>(comps[i].order);
    std::int64_t ni = static_cast<std::int64_t>(exps_[i]) * idx[i] % m;
    std::int64_t g = gcd_i64(den, m);
    std::int64_t nden = den / g * m;
    num = num * (m / g) + ni * (den / g);
    den = nden;
    num %= den;
  }
  std::int64_t g = gcd_i64(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  if (num < 0) num += den;
  return std::make_pair(num, den);
}

std::complex<double> DirichletCharacter::operator()(std::uint64_t n) const {
  auto a = angle(n);
  if (!a) return {0.0, 0.0};
  if (a->first == 0) return {1.0, 0.0};
  double ang = kTwoPi * static_cast<double>(a->first) /
               static_cast<double>(a->second);
  return {std::cos(ang), std::sin(ang)};
}

int DirichletCharacter::parity() const {
  if (q() <= 2) return 0;
  auto a = angle(q() - 1);
  return (a && a->first != 0) ? 1 : 0;  // chi(-1) is +-1, so angle is 0 or 1/2
}

std::uint64_t DirichletCharacter::conductor() const {
  if (conductor_) return conductor_;
  std::uint64_t cond = 1;
  const auto& comps = group_->components();
  // components of the same prime power (p=2, e>=3) must be combined
  for (size_t i = 0; i < comps.size();) {
    if (comps[i].is_sign) {
      std::uint32_t eps = exps_[i];
      std::uint32_t a = exps_[i + 1];
      std::uint64_t half = comps[i + 1].order;  // 2^{e-2}
      if (a == 0) {
        cond *= (eps ? 4 : 1);
      } else {
        std::uint64_t v = 0, aa = a;
        while ((aa & 1) == 0) {
          aa >>= 1;
          ++v;
        }
        cond *= comps[i].pe >> v;  // 2^{e - v2(a)}
        (void)half;
      }
      i += 2;
      continue;
    }
    std::uint64_t a = exps_[i];
    if (a == 0) {
      ++i;
      continue;
    }
    if (comps[i].pe == 4) {
      cond *= 4;
      ++i;
      continue;
    }
    // odd p^e: conductor p^{v_p(char order)+1}
    std::uint64_t m = comps[i].order;
    std::uint64_t r = m / std::gcd(a, m);
    std::uint64_t p = factorize(comps[i].pe)[0].first;
    std::uint64_t pf = p;
    while (r % p == 0) {
      r /= p;
      pf *= p;
    }
    cond *= pf;
    ++i;
  }
  conductor_ = cond;
  return cond;
}

DirichletCharacter DirichletCharacter::conjugate() const {
  const auto& comps = group_->components();
  std::vector<std::uint32_t> e(exps_.size());
  for (size_t i = 0; i < e.size(); ++i)
    e[i] = exps_[i] == 0
               ? 0
               : static_cast<std::uint32_t>(comps[i].order - exps_[i]);
  return DirichletCharacter(group_, std::move(e));
}

std::vector<std::complex<double>> DirichletCharacter::value_table() const {
  std::uint64_t qq = q();
  std::vector<std::complex<double>> tab(qq);
  for (std::uint64_t n = 0; n < qq; ++n) tab[n] = (*this)(n);
  if (qq == 1) tab[0] = {1.0, 0.0};
  return tab;
}

std::vector<DirichletCharacter> character_group(std::uint64_t q) {
  auto g = CharacterGroup::get(q);
  const auto& comps = g->components();
  std::vector<DirichletCharacter> out;
  out.reserve(g->phi());
  std::vector<std::uint32_t> e(comps.size(), 0);
  for (std::uint64_t lab = 0; lab < g->phi(); ++lab) {
    std::uint64_t rest = lab;
    for (size_t i = 0; i < comps.size(); ++i) {
      e[i] = static_cast<std::uint32_t>(rest % comps[i].order);
      rest /= comps[i].order;
    }
    out.emplace_back(g, e);
  }
  return out;
}

DirichletCharacter character_by_label(std::uint64_t q, std::uint64_t label) {
  auto g = CharacterGroup::get(q);
  if (label >= g->phi()) throw DomainError("character label out of range");
  const auto& comps = g->components();
  std::vector<std::uint32_t> e(comps.size());
  std::uint64_t rest = label;
  for (size_t i = 0; i < comps.size(); ++i) {
    e[i] = static_cast<std::uint32_t>(rest % comps[i].order);
    rest /= comps[i].order;
  }
  return DirichletCharacter(g, std::move(e));
}

std::uint64_t conductor(const DirichletCharacter& chi) {
  return chi.conductor();
}

DirichletCharacter induce(const DirichletCharacter& chi_star, std::uint64_t q) {
  std::uint64_t d = chi_star.q();
  if (d == 0 || q % d != 0)
    throw DomainError("induce: d must divide q");
  auto g = CharacterGroup::get(q);
  const auto& comps = g->components();
  std::vector<std::uint32_t> e(comps.size(), 0);
  for (size_t i = 0; i < comps.size(); ++i) {
    auto a = chi_star.angle(comps[i].gen);  // gen coprime to q, hence to d
    if (!a) throw DomainError("induce: generator not coprime to d");
    // chi(gen) is an order_i-th root of unity: a->first/a->second * order_i
    // must be integral
    std::int64_t m = static_cast<std::int64_t>(comps[i].order);
    std::int64_t num = a->first * m;
    if (num % a->second != 0)
      throw DomainError("induce: incompatible character order");
    e[i] = static_cast<std::uint32_t>((num / a->second) % m);
  }
  return DirichletCharacter(g, std::move(e));
}

DirichletCharacter primitive_inducer(const DirichletCharacter& chi) {
  std::uint64_t d = chi.conductor();
  std::uint64_t q = chi.q();
  auto gd = CharacterGroup::get(d);
  const auto& comps = gd->components();
  std::vector<std::uint32_t> e(comps.size(), 0);
  for (size_t i = 0; i < comps.size(); ++i) {
    // lift the generator of the mod-d component to something coprime to q
    std::uint64_t n = comps[i].gen;
    while (std::gcd(n, q) != 1) n += d;
    auto a = chi.angle(n);
    if (!a) throw std::logic_error("primitive_inducer: lift not coprime");
    std::int64_t m = static_cast<std::int64_t>(comps[i].order);
    std::int64_t num = a->first * m;
    if (num % a->second != 0)
      throw std::logic_error("primitive_inducer: incompatible order");
    e[i] = static_cast<std::uint32_t>((num / a->second) % m);
  }
  return DirichletCharacter(gd, std::move(e));
}

std::size_t CharacterFamily::total_members() const {
  std::size_t n = 0;
  for (auto& [q, v] : members) n += v.size();
  return n;
}

CharacterFamily select_family(std::uint64_t Q, double g_target,
                              const std::vector<std::uint64_t>& moduli) {
  if (Q < 3) throw DomainError("select_family: Q >= 3 required");
  if (g_target < 1.0 || g_target > std::log(2.0 * Q) + 1.0)
    throw DomainError("select_family: g_target out of range");
  CharacterFamily fam;
  fam.Q = Q;
  fam.g_target = g_target;
  fam.moduli = moduli;
  std::sort(fam.moduli.begin(), fam.moduli.end());
  for (std::uint64_t q : fam.moduli) {
    if (q < 3) throw DomainError("select_family: moduli must be >= 3");
    double lq = std::log(static_cast<double>(q));
    double llq = std::log(lq);
    double threshold = lq - llq * llq;
    auto chars = character_group(q);
    std::vector<DirichletCharacter> fq;
    for (auto& chi : chars) {
      double lcond = std::log(static_cast<double>(chi.conductor()));
      if (lcond > threshold) fq.push_back(chi);
    }
    std::size_t need = (CharacterGroup::get(q)->phi() + 1) / 2;
    if (fq.size() < need) throw FamilyTooSmall(q, fq.size(), need);
    fam.f_size[q] = fq.size();
    // chars are already label-ordered; keep the first Phi_q
    auto phi_q = static_cast<std::size_t>(
        std::floor(g_target * static_cast<double>(fq.size()) / lq));
    phi_q = std::min(phi_q, fq.size());
    fq.resize(phi_q);
    for (auto& chi : fq)
      fam.e_value += lq - std::log(static_cast<double>(chi.conductor()));
    fam.members[q] = std::move(fq);
  }
  return fam;
}

}  // namespace primevar::characters
