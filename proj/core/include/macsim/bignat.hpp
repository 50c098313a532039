#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace macsim {

// Arbitrary-precision unsigned integer, little-endian 64-bit limbs.
// Only the operations the dyadic number type needs: add/sub/mul,
// bit shifts, comparison and small-divisor division for printing.
class BigNat {
 public:
  BigNat() = default;
  explicit BigNat(std::uint64_t v) {
    if (v != 0) limbs_.push_back(v);
  }

  static BigNat from_pow2(std::uint32_t bits);           // 2^bits
  static BigNat from_decimal(const std::string& digits); // "1234"

  bool is_zero() const { return limbs_.empty(); }
  bool is_odd() const { return !limbs_.empty() && (limbs_[0] & 1u); }
  std::size_t limb_count() const { return limbs_.size(); }

  std::uint32_t bit_length() const;
  std::uint32_t trailing_zero_bits() const;  // undefined for zero
  bool bit(std::uint32_t i) const;

  // -1, 0, +1
  static int compare(const BigNat& a, const BigNat& b);

  friend BigNat operator+(const BigNat& a, const BigNat& b);
  // requires a >= b
  friend BigNat operator-(const BigNat& a, const BigNat& b);
  friend BigNat operator*(const BigNat& a, const BigNat& b);

  BigNat shifted_left(std::uint32_t bits) const;
  BigNat shifted_right(std::uint32_t bits) const;

  BigNat& operator+=(const BigNat& b) { *this = *this + b; return *this; }

  void mul_small(std::uint64_t m);
  // divides in place, returns remainder; d must be nonzero
  std::uint64_t divmod_small(std::uint64_t d);

  BigNat pow(std::uint32_t e) const;

  // value mod 2^bits (mask of the low bits)
  BigNat low_bits(std::uint32_t bits) const;

  std::uint64_t to_u64_saturating() const;
  std::string to_decimal() const;

  bool operator==(const BigNat& o) const { return limbs_ == o.limbs_; }
  bool operator!=(const BigNat& o) const { return limbs_ != o.limbs_; }
  bool operator<(const BigNat& o) const { return compare(*this, o) < 0; }
  bool operator<=(const BigNat& o) const { return compare(*this, o) <= 0; }

  void hash_into(std::uint64_t& h) const;

 private:
  void trim();
  std::vector<std::uint64_t> limbs_;
};

}  // namespace macsim
