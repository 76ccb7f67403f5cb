#include <cmath>
#include <random>

#include "doctest.h"
#include "primevar/bigint.hpp"

using primevar::BigUInt;

TEST_CASE("arithmetic against u64/u128") {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 500; ++i) {
    std::uint64_t a = rng() >> 12, b = rng() >> 12;
    BigUInt A(a), B(b);
    BigUInt S = A;
    S.add(B);
    unsigned __int128 s = (unsigned __int128)a + b;
    CHECK(S.to_double() ==
          doctest::Approx(static_cast<double>(s)).epsilon(1e-15));
    BigUInt P = BigUInt::mul(A, B);
    long double p = static_cast<long double>(a) * b;
    CHECK(P.to_double() ==
          doctest::Approx(static_cast<double>(p)).epsilon(1e-15));
    if (a >= b) {
      BigUInt D = A;
      D.sub(B);
      CHECK(D.to_double() ==
            doctest::Approx(static_cast<double>(a - b)).epsilon(1e-15));
    }
  }
}

TEST_CASE("decimal output") {
  BigUInt x(1234567890123456789ull);
  CHECK(x.to_decimal() == "1234567890123456789");
  x.mul_u64(1000000007ull);
  CHECK(x.to_decimal() == "1234567898765432019864197523");
  CHECK(x.to_double() == doctest::Approx(1.2345678987654320e27).epsilon(1e-12));
  CHECK(BigUInt(0).to_decimal() == "0");
}

TEST_CASE("shift and bit length") {
  BigUInt x(1);
  x.shl_bits(130);
  CHECK(x.bit_length() == 131);
  CHECK(x.bit(130) == 1);
  CHECK(x.bit(0) == 0);
  CHECK(x.log_natural() == doctest::Approx(130.0 * std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("exact fractional parts match long double for small t") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> lam_d(0.0, 1.0);
  for (int i = 0; i < 2000; ++i) {
    std::uint64_t t = rng() % 1000000 + 1;
    double lam = lam_d(rng);
    BigUInt T(t);
    long double prod = static_cast<long double>(t) * lam;
    long double frac = prod - std::floorl(prod);
    long double dist = std::min(frac, 1.0L - frac);
    CHECK(T.dist_to_integer(lam) ==
          doctest::Approx(static_cast<double>(dist)).epsilon(1e-9));
  }
}

TEST_CASE("frac is exact in the product sense") {
  // t * lam for lam a dyadic rational: exact zero distance
  double lam = 3.0 / 4096.0;
  BigUInt t(4096ull * 12345ull);
  CHECK(t.dist_to_integer(lam) == 0.0);
}
