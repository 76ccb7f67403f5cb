#pragma once

// Minimal unsigned big integer: just enough for synchronization times t that
// exceed 64 bits, exact fractional parts of t*lambda, and decimal output.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <string>
#include <vector>

namespace primevar {

class BigUInt {
 public:
  BigUInt() = default;
  explicit BigUInt(std::uint64_t v) {
    if (v) w_.push_back(v);
  }

  bool is_zero() const { return w_.empty(); }

  static int cmp(const BigUInt& a, const BigUInt& b) {
    if (a.w_.size() != b.w_.size()) return a.w_.size() < b.w_.size() ? -1 : 1;
    for (size_t i = a.w_.size(); i-- > 0;)
      if (a.w_[i] != b.w_[i]) return a.w_[i] < b.w_[i] ? -1 : 1;
    return 0;
  }
  bool operator==(const BigUInt& o) const { return cmp(*this, o) == 0; }
  bool operator<(const BigUInt& o) const { return cmp(*this, o) < 0; }
  bool operator<=(const BigUInt& o) const { return cmp(*this, o) <= 0; }

  void add(const BigUInt& o) {
    if (o.w_.size() > w_.size()) w_.resize(o.w_.size(), 0);
    unsigned __int128 carry = 0;
    for (size_t i = 0; i < w_.size(); ++i) {
      unsigned __int128 s = carry + w_[i] + (i < o.w_.size() ? o.w_[i] : 0);
      w_[i] = static_cast<std::uint64_t>(s);
      carry = s >> 64;
    }
    if (carry) w_.push_back(static_cast<std::uint64_t>(carry));
  }
  void add_u64(std::uint64_t v) { add(BigUInt(v)); }

  // requires *this >= o
  void sub(const BigUInt& o) {
    unsigned __int128 borrow = 0;
    for (size_t i = 0; i < w_.size(); ++i) {
      unsigned __int128 d = (unsigned __int128)w_[i] -
                            (i < o.w_.size() ? o.w_[i] : 0) - borrow;
      w_[i] = static_cast<std::uint64_t>(d);
      borrow = (d >> 64) ? 1 : 0;
    }
    trim();
  }

  void mul_u64(std::uint64_t m) {
    if (m == 0 || is_zero()) {
      w_.clear();
      return;
    }
    unsigned __int128 carry = 0;
    for (size_t i = 0; i < w_.size(); ++i) {
      unsigned __int128 p = (unsigned __int128)w_[i] * m + carry;
      w_[i] = static_cast<std::uint64_t>(p);
      carry = p >> 64;
    }
    if (carry) w_.push_back(static_cast<std::uint64_t>(carry));
  }

  static BigUInt mul(const BigUInt& a, const BigUInt& b) {
    BigUInt r;
    if (a.is_zero() || b.is_zero()) return r;
    r.w_.assign(a.w_.size() + b.w_.size(), 0);
    for (size_t i = 0; i < a.w_.size(); ++i) {
      unsigned __int128 carry = 0;
      for (size_t j = 0; j < b.w_.size(); ++j) {
        unsigned __int128 cur = (unsigned __int128)a.w_[i] * b.w_[j] +
                                r.w_[i + j] + carry;
        r.w_[i + j] = static_cast<std::uint64_t>(cur);
        carry = cur >> 64;
      }
      size_t k = i + b.w_.size();
      while (carry) {
        unsigned __int128 cur = (unsigned __int128)r.w_[k] + carry;
        r.w_[k] = static_cast<std::uint64_t>(cur);
        carry = cur >> 64;
        ++k;
      }
    }
    r.trim();
    return r;
  }

  void shl_bits(unsigned n) {
    if (is_zero() || n == 0) return;
    unsigned words = n / 64, bits = n % 64;
    size_t old = w_.size();
    w_.resize(old + words + 1, 0);
    for (size_t i = old; i-- > 0;) {
      std::uint64_t hi = bits ? (w_[i] >> (64 - bits)) : 0;
      if (bits) w_[i + words + 1] |= hi;
      w_[i + words] = w_[i] << bits;  // bits==0 keeps the word
    }
    for (unsigned i = 0; i < words; ++i) w_[i] = 0;
    trim();
  }

  std::uint64_t bit(size_t idx) const {
    size_t wi = idx / 64;
    if (wi >= w_.size()) return 0;
    return (w_[wi] >> (idx % 64)) & 1u;
  }

  size_t bit_length() const {
    if (w_.empty()) return 0;
    size_t n = 64 * (w_.size() - 1);
    std::uint64_t top = w_.back();
    while (top) {
      ++n;
      top >>= 1;
    }
    return n;
  }

  double to_double() const {
    double r = 0.0;
    for (size_t i = w_.size(); i-- > 0;)
      r = r * 18446744073709551616.0 + static_cast<double>(w_[i]);
    return r;
  }

  // natural log; valid for any size
  double log_natural() const {
    if (is_zero()) return -std::numeric_limits<double>::infinity();
    size_t bl = bit_length();
    // take the top <=64 bits as mantissa
    size_t shift = bl > 64 ? bl - 64 : 0;
    std::uint64_t top = 0;
    for (size_t i = 0; i < 64; ++i) {
      size_t idx = shift + 63 - i;
      top = (top << 1) | (idx < bl ? bit(idx) : 0);
    }
    return std::log(static_cast<double>(top)) + shift * 0.6931471805599453;
  }

  std::string to_decimal() const {
    if (is_zero()) return "0";
    std::vector<std::uint64_t> tmp = w_;
    std::string out;
    while (!tmp.empty()) {
      unsigned __int128 rem = 0;
      for (size_t i = tmp.size(); i-- > 0;) {
        unsigned __int128 cur = (rem << 64) | tmp[i];
        tmp[i] = static_cast<std::uint64_t>(cur / 1000000000000000000ULL);
        rem = cur % 1000000000000000000ULL;
      }
      while (!tmp.empty() && tmp.back() == 0) tmp.pop_back();
      char buf[20];
      if (tmp.empty())
        std::snprintf(buf, sizeof buf, "%llu", (unsigned long long)rem);
      else
        std::snprintf(buf, sizeof buf, "%018llu", (unsigned long long)rem);
      out.insert(0, buf);
    }
    return out;
  }

  // Exact fractional part of (*this) * lam for a finite double lam >= 0,
  // returned as a binary fixed-point value frac * 2^128 (truncated).
  unsigned __int128 frac_fixed128(double lam) const {
    if (is_zero() || lam == 0.0) return 0;
    int e2 = 0;
    double f = std::frexp(lam, &e2);            // lam = f * 2^e2, f in [0.5,1)
    auto m = static_cast<std::uint64_t>(std::ldexp(f, 53));  // 53-bit integer
    // this*lam = (this*m) * 2^(e2-53); fractional bits = low (53-e2) bits
    long s = 53 - e2;
    if (s <= 0) return 0;  // product is an integer
    BigUInt p = *this;
    p.mul_u64(m);
    // fractional value = (p mod 2^s) / 2^s; report top 128 bits
    unsigned __int128 out = 0;
    for (int i = 0; i < 128; ++i) {
      long idx = s - 1 - i;
      out <<= 1;
      if (idx >= 0) out |= p.bit(static_cast<size_t>(idx));
    }
    return out;
  }

  // ||(*this) * lam|| : distance of t*lam from the nearest integer (exact in
  // the 128-bit fixed-point sense).
  double dist_to_integer(double lam) const {
    unsigned __int128 fr = frac_fixed128(lam);
    bool upper = fr >> 127;  // frac >= 1/2
    unsigned __int128 d = upper ? (~fr) + 1 : fr;  // min(frac, 1-frac) * 2^128
    // top 64 bits to double
    double top = static_cast<double>(static_cast<std::uint64_t>(d >> 64));
    return std::ldexp(top, -64);
  }

  // signed fractional part in (-1/2, 1/2]
  double signed_frac(double lam) const {
    unsigned __int128 fr = frac_fixed128(lam);
    double v = std::ldexp(static_cast<double>(static_cast<std::uint64_t>(fr >> 64)), -64);
    return (fr >> 127) ? v - 1.0 : v;
  }

  const std::vector<std::uint64_t>& words() const { return w_; }

 private:
  void trim() {
    while (!w_.empty() && w_.back() == 0) w_.pop_back();
  }
  std::vector<std::uint64_t> w_;  // little-endian 64-bit limbs
};

}  // namespace primevar
