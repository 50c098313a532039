#pragma once

#include <cstdint>
#include <string>

#include "macsim/bignat.hpp"

namespace macsim {

// Exact signed dyadic rational num / 2^exp.
// Canonical form: numerator odd, or exp == 0. Every protocol state update is
// a two-term average, so states stay dyadic and comparisons are exact.
class Dyadic {
 public:
  Dyadic() = default;
  static Dyadic from_int(std::int64_t v);
  // num / 2^exp
  static Dyadic from_parts(std::int64_t num, std::uint32_t exp);
  static Dyadic zero() { return Dyadic{}; }
  static Dyadic one() { return from_int(1); }

  // (1 - 2^-n) as an exact dyadic: (2^n - 1) / 2^n
  static Dyadic one_minus_pow2(std::uint32_t n);

  // Accepts "3", "-3", "a/2^k", "2^-k", and terminating decimals like "0.25"
  // (rejects decimals that are not exactly dyadic, e.g. "0.1").
  static Dyadic parse(const std::string& text);

  bool is_zero() const { return mag_.is_zero(); }
  bool negative() const { return neg_; }
  std::uint32_t exponent() const { return exp_; }
  const BigNat& magnitude() const { return mag_; }

  friend Dyadic operator+(const Dyadic& a, const Dyadic& b);
  friend Dyadic operator-(const Dyadic& a, const Dyadic& b);
  friend Dyadic operator*(const Dyadic& a, const Dyadic& b);
  Dyadic operator-() const;

  Dyadic halved() const;  // value / 2
  static Dyadic average(const Dyadic& a, const Dyadic& b);  // (a+b)/2 exact
  Dyadic pow(std::uint32_t e) const;
  Dyadic scaled_pow2(std::int32_t k) const;  // value * 2^k, exact

  static int compare(const Dyadic& a, const Dyadic& b);
  bool operator==(const Dyadic& o) const { return compare(*this, o) == 0; }
  bool operator!=(const Dyadic& o) const { return compare(*this, o) != 0; }
  bool operator<(const Dyadic& o) const { return compare(*this, o) < 0; }
  bool operator<=(const Dyadic& o) const { return compare(*this, o) <= 0; }
  bool operator>(const Dyadic& o) const { return compare(*this, o) > 0; }
  bool operator>=(const Dyadic& o) const { return compare(*this, o) >= 0; }

  static const Dyadic& min(const Dyadic& a, const Dyadic& b) { return b < a ? b : a; }
  static const Dyadic& max(const Dyadic& a, const Dyadic& b) { return a < b ? b : a; }

  double to_double() const;               // lossy, for stats only
  std::string to_decimal(int digits = 12) const;  // rounded decimal rendering
  std::string to_pow2_string() const;     // "num/2^exp"

  void hash_into(std::uint64_t& h) const;

 private:
  void canonicalize();
  BigNat mag_{};
  std::uint32_t exp_ = 0;
  bool neg_ = false;
};

// Exact non-negative rational with arbitrary denominator; used for tolerance
// bounds (epsilon may be a decimal like 0.01 that is not dyadic).
class Frac {
 public:
  Frac() : num_(0), den_(1) {}
  Frac(BigNat num, BigNat den);
  static Frac from_dyadic(const Dyadic& d);  // d must be >= 0
  static Frac parse(const std::string& text);  // "a/b", "2^-k", decimals, ints

  const BigNat& num() const { return num_; }
  const BigNat& den() const { return den_; }

  // compare a dyadic (must be >= 0) against this bound
  static int compare(const Dyadic& d, const Frac& f);

  double to_double() const;
  std::string to_string() const;

 private:
  BigNat num_, den_;
};

// Least integer p >= 0 with base^p <= eps, where base = (1-2^-n) for n >= 1,
// or 1/2 when n == 0 sentinel is not used; callers pass explicit base kind.
int p_end_halving(const Frac& eps);                       // base 1/2
int p_end_contraction(std::uint32_t n, const Frac& eps);  // base 1-2^-n

}  // namespace macsim
