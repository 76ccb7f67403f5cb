#include <cmath>
#include <complex>
#include <numeric>

#include "doctest.h"
#include "primevar/characters.hpp"

namespace ch = primevar::characters;
using cd = std::complex<double>;

namespace {

std::uint64_t phi_naive(std::uint64_t q) {
  std::uint64_t n = 0;
  for (std::uint64_t a = 1; a <= q; ++a)
    if (std::gcd(a, q) == 1) ++n;
  return q == 1 ? 1 : n;
}

// brute-force conductor: smallest d | q such that chi(n) = 1 whenever
// n = 1 (mod d) and gcd(n, q) = 1
std::uint64_t conductor_brute(const ch::DirichletCharacter& chi) {
  std::uint64_t q = chi.q();
  for (std::uint64_t d = 1; d <= q; ++d) {
    if (q % d != 0) continue;
    bool ok = true;
    for (std::uint64_t n = 1; n <= q && ok; ++n) {
      if (std::gcd(n, q) != 1 || n % d != 1) continue;
      auto a = chi.angle(n);
      if (!a || a->first != 0) ok = false;
    }
    if (ok) return d;
  }
  return q;
}

}  // namespace

TEST_CASE("trivial group q=1") {
  auto g = ch::character_group(1);
  REQUIRE(g.size() == 1);
  CHECK(g[0].is_principal());
  CHECK(g[0](5) == cd(1.0, 0.0));
  CHECK(g[0].conductor() == 1);
}

TEST_CASE("q=4: the non-principal character") {
  auto g = ch::character_group(4);
  REQUIRE(g.size() == 2);
  CHECK(g[0].is_principal());
  const auto& chi = g[1];
  CHECK(chi(3) == cd(-1.0, 0.0));
  CHECK(chi(2) == cd(0.0, 0.0));
  CHECK(chi.conductor() == 4);
  CHECK(chi.parity() == 1);
}

TEST_CASE("q=5: four characters on the cyclic group generated by 2") {
  auto g = ch::character_group(5);
  REQUIRE(g.size() == 4);
  // values must be 4th roots of unity; complete multiplicativity brute force
  for (const auto& chi : g) {
    for (std::uint64_t n = 1; n < 5; ++n) {
      cd v = chi(n);
      CHECK(std::abs(std::pow(v, 4) - cd(1.0, 0.0)) < 1e-12);
    }
    for (std::uint64_t m = 1; m <= 20; ++m)
      for (std::uint64_t n = 1; n <= 20; ++n) {
        cd lhs = chi(m * n);
        cd rhs = chi(m) * chi(n);
        CHECK(std::abs(lhs - rhs) < 1e-12);
      }
  }
  // a generator of the character group sends 2 to a primitive 4th root
  bool found_i = false;
  for (const auto& chi : g)
    if (std::abs(chi(2) - cd(0.0, 1.0)) < 1e-12) found_i = true;
  CHECK(found_i);
}

TEST_CASE("complete multiplicativity and zero off units (several q)") {
  for (std::uint64_t q : {8ull, 9ull, 12ull, 15ull, 16ull, 24ull, 30ull, 45ull}) {
    auto g = ch::character_group(q);
    REQUIRE(g.size() == phi_naive(q));
    for (const auto& chi : g) {
      for (std::uint64_t n = 1; n <= 2 * q; ++n) {
        if (std::gcd(n, q) != 1) {
          CHECK(chi(n) == cd(0.0, 0.0));
        } else {
          CHECK(std::abs(std::abs(chi(n)) - 1.0) < 1e-12);
        }
      }
      for (std::uint64_t m = 1; m <= q; ++m)
        for (std::uint64_t n = 1; n <= q; n += 3) {
          cd lhs = chi(m * n);
          cd rhs = chi(m) * chi(n);
          CHECK(std::abs(lhs - rhs) < 1e-11);
        }
      // chi(-1) = (-1)^kappa
      cd vm1 = chi(q - 1);
      CHECK(std::abs(vm1 - (chi.parity() ? cd(-1, 0) : cd(1, 0))) < 1e-12);
    }
  }
}

TEST_CASE("orthogonality relations") {
  for (std::uint64_t q : {3ull, 8ull, 12ull, 21ull, 36ull, 50ull}) {
    auto g = ch::character_group(q);
    double phi = static_cast<double>(g.size());
    SUBCASE(("q=" + std::to_string(q)).c_str()) {
      // I: sum_chi chi(a) = phi(q) [a = 1]
      for (std::uint64_t a = 1; a <= q; ++a) {
        if (std::gcd(a, q) != 1) continue;
        cd s{0.0, 0.0};
        for (const auto& chi : g) s += chi(a);
        cd expect = (a % q == 1 % q) ? cd(phi, 0.0) : cd(0.0, 0.0);
        CHECK(std::abs(s - expect) < 1e-10);
      }
      // II: sum_a chi(a) conj(chi'(a)) = phi(q) [chi = chi']
      for (size_t i = 0; i < g.size(); ++i)
        for (size_t j = 0; j < g.size(); ++j) {
          cd s{0.0, 0.0};
          for (std::uint64_t a = 1; a <= q; ++a)
            s += g[i](a)*std::conj(g[j](a));
          cd expect = i == j ? cd(phi, 0.0) : cd(0.0, 0.0);
          CHECK(std::abs(s - expect) < 1e-10);
        }
    }
  }
}

TEST_CASE("conductor: formula vs divisor brute force") {
  for (std::uint64_t q = 1; q <= 60; ++q) {
    for (const auto& chi : ch::character_group(q)) {
      CHECK(chi.conductor() == conductor_brute(chi));
    }
  }
}

TEST_CASE("conductor examples") {
  // principal mod 12 -> 1
  CHECK(ch::character_group(12)[0].conductor() == 1);
  // character mod 8 induced from mod 4 -> conductor 4
  auto g4 = ch::character_group(4);
  auto lifted = ch::induce(g4[1], 8);
  CHECK(lifted.conductor() == 4);
  // primitive character mod 7 -> 7; for prime q all non-principal are
  // primitive
  for (std::uint64_t q : {3ull, 5ull, 7ull, 13ull, 19ull}) {
    auto g = ch::character_group(q);
    for (size_t i = 1; i < g.size(); ++i) CHECK(g[i].conductor() == q);
  }
}

TEST_CASE("induce") {
  // trivial mod 1 -> principal mod 6
  auto g1 = ch::character_group(1);
  auto p6 = ch::induce(g1[0], 6);
  CHECK(p6.is_principal());
  CHECK(p6.q() == 6);

  // chi mod 4 lifted to 12: value at 7 equals chi*(7) = chi*(3) = -1
  auto g4 = ch::character_group(4);
  auto l12 = ch::induce(g4[1], 12);
  CHECK(std::abs(l12(7) - cd(-1.0, 0.0)) < 1e-12);
  CHECK(std::abs(l12(11) - g4[1](11)) < 1e-12);
  CHECK(l12(3) == cd(0.0, 0.0));  // gcd(3,12) > 1

  // round trip: conductor(induce(primitive mod 5, 15)) = 5
  auto g5 = ch::character_group(5);
  for (size_t i = 1; i < g5.size(); ++i) {
    auto l15 = ch::induce(g5[i], 15);
    CHECK(l15.conductor() == 5);
    auto back = ch::primitive_inducer(l15);
    CHECK(back.q() == 5);
    CHECK(back.label() == g5[i].label());
  }

  CHECK_THROWS_AS((void)ch::induce(g4[1], 6), ch::DomainError);
}

TEST_CASE("primitive_inducer agrees pointwise") {
  for (std::uint64_t q : {12ull, 18ull, 40ull}) {
    for (const auto& chi : ch::character_group(q)) {
      auto star = ch::primitive_inducer(chi);
      CHECK(star.q() == chi.conductor());
      for (std::uint64_t n = 1; n <= 3 * q; ++n) {
        if (std::gcd(n, q) != 1) continue;
        CHECK(std::abs(chi(n) - star(n)) < 1e-11);
      }
    }
  }
}

TEST_CASE("conjugate and labels deterministic") {
  auto g = ch::character_group(13);
  for (const auto& chi : g) {
    auto cc = chi.conjugate();
    for (std::uint64_t n = 1; n < 13; ++n)
      CHECK(std::abs(cc(n) - std::conj(chi(n))) < 1e-12);
    CHECK(ch::character_by_label(13, chi.label()).label() == chi.label());
  }
}

TEST_CASE("select_family") {
  SUBCASE("Q=13, g=log13: all primitive characters") {
    auto fam = ch::select_family(13, std::log(13.0), {13});
    REQUIRE(fam.members.count(13) == 1);
    CHECK(fam.f_size[13] == 11);       // phi(13)-1 = 11 primitive non-principal
    CHECK(fam.members[13].size() == 11);
    for (auto& chi : fam.members[13]) {
      CHECK(!chi.is_principal());
      CHECK(chi.conductor() == 13);
    }
    CHECK(fam.e_value == doctest::Approx(0.0));
  }
  SUBCASE("principal character never qualifies") {
    auto fam = ch::select_family(7, std::log(7.0), {7});
    for (auto& chi : fam.members[7]) CHECK(!chi.is_principal());
  }
  SUBCASE("Q=3, g=1: Phi_3 = floor(1 * 1 / log 3) = 0") {
    auto fam = ch::select_family(3, 1.0, {3});
    CHECK(fam.f_size[3] == 1);
    CHECK(fam.members[3].size() == 0);
  }
  SUBCASE("FamilyTooSmall at q=6") {
    CHECK_THROWS_AS((void)ch::select_family(6, 1.0, {6}), ch::FamilyTooSmall);
  }
}
