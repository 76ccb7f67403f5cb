#include <cmath>
#include <complex>

#include "doctest.h"
#include "oracles.hpp"
#include "primevar/primesums.hpp"

namespace ps = primevar::primesums;
namespace ch = primevar::characters;
namespace w = primevar::weights;
using cd = std::complex<double>;

TEST_CASE("lambda stream matches trial division up to 1e5") {
  std::vector<double> lam(100001, 0.0);
  ps::lambda_stream(100000, false,
                    [&](std::uint64_t, const std::uint64_t* ns,
                        const double* logs, std::size_t cnt) {
                      for (std::size_t i = 0; i < cnt; ++i) lam[ns[i]] = logs[i];
                    });
  for (std::uint64_t n = 0; n <= 100000; ++n) {
    double expect = oracles::lambda_trial_division(n);
    CHECK(std::fabs(lam[n] - expect) <= 1e-12 * std::max(1.0, expect));
  }
}

TEST_CASE("chebyshev psi within 5% of N") {
  for (double N : {1e4, 1e6}) {
    double psi = 0.0;
    ps::lambda_stream(static_cast<std::uint64_t>(N), false,
                      [&](std::uint64_t, const std::uint64_t*,
                          const double* logs, std::size_t cnt) {
                        for (std::size_t i = 0; i < cnt; ++i) psi += logs[i];
                      });
    CHECK(std::fabs(psi - N) < 0.05 * N);
  }
}

TEST_CASE("psi_eta_direct at x=1e6, trivial character") {
  const auto& eta1 = w::preset("exp_linear");
  auto one = ch::character_group(1)[0];
  auto s = ps::psi_eta_direct(eta1, 1e6, one);
  // within 0.2% of M eta(1) x = x
  CHECK(std::fabs(s.value.real() - 1e6) < 2e3);
  CHECK(s.value.imag() == 0.0);
  CHECK(s.truncation_bound < 1e-6 * 1e6);
}

TEST_CASE("compact bump: exact enumeration at tiny x") {
  const auto& bump = w::preset("bump");
  auto chi3 = ch::character_group(3)[1];

  SUBCASE("x=1: only n=2 in the window, and eta(2)=0") {
    auto s = ps::psi_eta_direct(bump, 1.0, chi3);
    double expect = std::log(2.0) * bump.eval(2.0);  // = 0 at the edge
    CHECK(std::abs(s.value - chi3(2) * expect) < 1e-15);
    CHECK(s.truncation_bound == 0.0);
  }
  SUBCASE("x=1.5: n=2 contributes log 2 * chi(2) * eta(4/3)") {
    auto s = ps::psi_eta_direct(bump, 1.5, chi3);
    cd expect = chi3(2) * std::log(2.0) * bump.eval(2.0 / 1.5);
    CHECK(std::abs(s.value - expect) < 1e-12);
  }
  SUBCASE("x=3.2: window [1.6, 6.4]; terms n in {2,3,4,5}") {
    auto s = ps::psi_eta_direct(bump, 3.2, chi3);
    cd expect{0.0, 0.0};
    for (std::uint64_t n = 2; n <= 6; ++n)
      expect += oracles::lambda_trial_division(n) * chi3(n) *
                bump.eval(static_cast<double>(n) / 3.2);
    CHECK(std::abs(s.value - expect) < 1e-12);
  }
}

TEST_CASE("principal character reduces to the trivial one minus p|q terms") {
  const auto& eta1 = w::preset("exp_linear");
  double x = 1e4;
  auto one = ch::character_group(1)[0];
  auto p6 = ch::character_group(6)[0];
  REQUIRE(p6.is_principal());
  auto s1 = ps::psi_eta_direct(eta1, x, one);
  auto s6 = ps::psi_eta_direct(eta1, x, p6);
  double correction = 0.0;
  for (std::uint64_t p : {2ull, 3ull}) {
    double lp = std::log(static_cast<double>(p));
    for (std::uint64_t pk = p; pk < static_cast<std::uint64_t>(64 * x); pk *= p)
      correction += lp * eta1.eval(static_cast<double>(pk) / x);
  }
  CHECK(s6.value.real() ==
        doctest::Approx(s1.value.real() - correction).epsilon(1e-10));
  // difference is small compared to x (Lemma-scale: O(log q))
  CHECK(std::fabs(s1.value.real() - s6.value.real()) < 10.0 * std::log(6.0));
}

TEST_CASE("theta vs psi") {
  const auto& eta1 = w::preset("exp_linear");
  auto one = ch::character_group(1)[0];
  SUBCASE("x=1e6: theta within 0.2% of x and gap <= 3 sqrt x") {
    auto spsi = ps::psi_eta_direct(eta1, 1e6, one);
    auto sth = ps::theta_eta_direct(eta1, 1e6, one);
    CHECK(std::fabs(sth.value.real() - 1e6) < 2e3);
    CHECK(std::fabs(spsi.value.real() - sth.value.real()) <= 3.0 * 1e3);
    CHECK(spsi.value.real() >= sth.value.real());  // termwise nonnegative
  }
  SUBCASE("x=1e4, chi mod 4: naive-loop oracle") {
    auto chi4 = ch::character_group(4)[1];
    auto sth = ps::theta_eta_direct(eta1, 1e4, chi4);
    cd oracle{0.0, 0.0};
    for (std::uint64_t n = 2; n <= 700000; ++n) {
      double l = oracles::lambda_trial_division(n);
      if (l == 0.0) continue;
      double ln = std::log(static_cast<double>(n));
      if (std::fabs(l - ln) > 1e-12 * ln) continue;  // primes only
      oracle += chi4(n) * l * eta1.eval(static_cast<double>(n) / 1e4);
    }
    CHECK(std::abs(sth.value - oracle) < 1e-6);
  }
}

TEST_CASE("classical sums") {
  SUBCASE("x=10, q=3 hand enumeration") {
    auto cs = ps::classical_sums(10.0, 3);
    // primes 2,3,5,7: class 1 gets {7}, class 2 gets {2,5}; 3 lands in class 0
    CHECK(cs.theta_class[1] == doctest::Approx(std::log(7.0)).epsilon(1e-14));
    CHECK(cs.theta_class[2] ==
          doctest::Approx(std::log(2.0) + std::log(5.0)).epsilon(1e-14));
    CHECK(cs.theta_class[0] == doctest::Approx(std::log(3.0)).epsilon(1e-14));
    // Lambda side adds 4, 8 (log 2) and 9 (log 3)
    CHECK(cs.psi_class[1] ==
          doctest::Approx(std::log(2.0) + std::log(7.0)).epsilon(1e-14));
    CHECK(cs.psi_class[2] ==
          doctest::Approx(2.0 * std::log(2.0) + std::log(5.0)).epsilon(1e-14));
  }
  SUBCASE("x=2, q=3: single prime") {
    auto cs = ps::classical_sums(2.0, 3);
    CHECK(cs.theta_class[2] == doctest::Approx(std::log(2.0)).epsilon(1e-14));
    CHECK(cs.theta_class[1] == 0.0);
  }
  SUBCASE("x=1e6, q=4: two classes within 1% of x/2") {
    auto cs = ps::classical_sums(1e6, 4);
    CHECK(std::fabs(cs.theta_class[1] - 5e5) < 1e4);
    CHECK(std::fabs(cs.theta_class[3] - 5e5) < 1e4);
  }
}

TEST_CASE("scale guard") {
  const auto& eta1 = w::preset("exp_linear");
  auto one = ch::character_group(1)[0];
  CHECK_THROWS_AS((void)ps::psi_eta_direct(eta1, 2e9, one), ps::ScaleTooLarge);
}

TEST_CASE("psi/theta gap growth (Lemma psi-theta shape)") {
  const auto& eta1 = w::preset("exp_linear");
  auto one = ch::character_group(1)[0];
  double k_fit = 0.0;
  for (double x : {1e3, 1e4, 1e5, 1e6}) {
    auto spsi = ps::psi_eta_direct(eta1, x, one);
    auto sth = ps::theta_eta_direct(eta1, x, one);
    double gap = std::fabs(spsi.value.real() - sth.value.real());
    if (x == 1e3)
      k_fit = gap / std::sqrt(x);
    else
      CHECK(gap <= 2.0 * k_fit * std::sqrt(x));
  }
}
