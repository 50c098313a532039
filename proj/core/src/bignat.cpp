#include "macsim/bignat.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace macsim {

namespace {
using u64 = std::uint64_t;
using u128 = unsigned __int128;
}  // namespace

void BigNat::trim() {
  while (!limbs_.empty() && limbs_.back() == 0) limbs_.pop_back();
}

BigNat BigNat::from_pow2(std::uint32_t bits) {
  BigNat r;
  r.limbs_.assign(bits / 64 + 1, 0);
  r.limbs_.back() = u64{1} << (bits % 64);
  return r;
}

BigNat BigNat::from_decimal(const std::string& digits) {
  BigNat r;
  for (char ch : digits) {
    if (ch < '0' || ch > '9') throw std::invalid_argument("BigNat::from_decimal: bad digit");
    r.mul_small(10);
    r += BigNat(static_cast<u64>(ch - '0'));
  }
  return r;
}

std::uint32_t BigNat::bit_length() const {
  if (limbs_.empty()) return 0;
  return static_cast<std::uint32_t>(64 * (limbs_.size() - 1) +
                                    (64 - std::countl_zero(limbs_.back())));
}

std::uint32_t BigNat::trailing_zero_bits() const {
  for (std::size_t i = 0; i < limbs_.size(); ++i) {
    if (limbs_[i] != 0)
      return static_cast<std::uint32_t>(64 * i + std::countr_zero(limbs_[i]));
  }
  return 0;
}

bool BigNat::bit(std::uint32_t i) const {
  std::size_t limb = i / 64;
  if (limb >= limbs_.size()) return false;
  return (limbs_[limb] >> (i % 64)) & 1u;
}

int BigNat::compare(const BigNat& a, const BigNat& b) {
  if (a.limbs_.size() != b.limbs_.size())
    return a.limbs_.size() < b.limbs_.size() ? -1 : 1;
  for (std::size_t i = a.limbs_.size(); i-- > 0;) {
    if (a.limbs_[i] != b.limbs_[i]) return a.limbs_[i] < b.limbs_[i] ? -1 : 1;
  }
  return 0;
}

BigNat operator+(const BigNat& a, const BigNat& b) {
  BigNat r;
  const auto& x = a.limbs_;
  const auto& y = b.limbs_;
  std::size_t n = std::max(x.size(), y.size());
  r.limbs_.resize(n, 0);
  u64 carry = 0;
  for (std::size_t i = 0; i < n; ++i) {
    u128 s = carry;
    if (i < x.size()) s += x[i];
    if (i < y.size()) s += y[i];
    r.limbs_[i] = static_cast<u64>(s);
    carry = static_cast<u64>(s >> 64);
  }
  if (carry) r.limbs_.push_back(carry);
  return r;
}

BigNat operator-(const BigNat& a, const BigNat& b) {
  if (BigNat::compare(a, b) < 0) throw std::logic_error("BigNat subtraction underflow");
  BigNat r;
  r.limbs_ = a.limbs_;
  u64 borrow = 0;
  for (std::size_t i = 0; i < r.limbs_.size(); ++i) {
    u128 sub = borrow;
    if (i < b.limbs_.size()) sub += b.limbs_[i];
    if (static_cast<u128>(r.limbs_[i]) >= sub) {
      r.limbs_[i] -= static_cast<u64>(sub);
      borrow = 0;
    } else {
      r.limbs_[i] = static_cast<u64>((u128{1} << 64) + r.limbs_[i] - sub);
      borrow = 1;
    }
  }
  r.trim();
  return r;
}

BigNat operator*(const BigNat& a, const BigNat& b) {
  if (a.is_zero() || b.is_zero()) return BigNat{};
  BigNat r;
  r.limbs_.assign(a.limbs_.size() + b.limbs_.size(), 0);
  for (std::size_t i = 0; i < a.limbs_.size(); ++i) {
    u64 carry = 0;
    for (std::size_t j = 0; j < b.limbs_.size(); ++j) {
      u128 cur = static_cast<u128>(a.limbs_[i]) * b.limbs_[j] + r.limbs_[i + j] + carry;
      r.limbs_[i + j] = static_cast<u64>(cur);
      carry = static_cast<u64>(cur >> 64);
    }
    r.limbs_[i + b.limbs_.size()] += carry;
  }
  r.trim();
  return r;
}

BigNat BigNat::shifted_left(std::uint32_t bits) const {
  if (is_zero() || bits == 0) {
    BigNat r = *this;
    return r;
  }
  std::size_t limb_shift = bits / 64;
  std::uint32_t bit_shift = bits % 64;
  BigNat r;
  r.limbs_.assign(limbs_.size() + limb_shift + 1, 0);
  for (std::size_t i = 0; i < limbs_.size(); ++i) {
    r.limbs_[i + limb_shift] |= bit_shift ? (limbs_[i] << bit_shift) : limbs_[i];
    if (bit_shift) r.limbs_[i + limb_shift + 1] |= limbs_[i] >> (64 - bit_shift);
  }
  r.trim();
  return r;
}

BigNat BigNat::shifted_right(std::uint32_t bits) const {
  std::size_t limb_shift = bits / 64;
  std::uint32_t bit_shift = bits % 64;
  if (limb_shift >= limbs_.size()) return BigNat{};
  BigNat r;
  r.limbs_.assign(limbs_.size() - limb_shift, 0);
  for (std::size_t i = 0; i < r.limbs_.size(); ++i) {
    r.limbs_[i] = limbs_[i + limb_shift] >> bit_shift;
    if (bit_shift && i + limb_shift + 1 < limbs_.size())
      r.limbs_[i] |= limbs_[i + limb_shift + 1] << (64 - bit_shift);
  }
  r.trim();
  return r;
}

void BigNat::mul_small(std::uint64_t m) {
  if (m == 0 || is_zero()) {
    limbs_.clear();
    return;
  }
  u64 carry = 0;
  for (auto& limb : limbs_) {
    u128 cur = static_cast<u128>(limb) * m + carry;
    limb = static_cast<u64>(cur);
    carry = static_cast<u64>(cur >> 64);
  }
  if (carry) limbs_.push_back(carry);
}

std::uint64_t BigNat::divmod_small(std::uint64_t d) {
  if (d == 0) throw std::invalid_argument("BigNat::divmod_small: zero divisor");
  u64 rem = 0;
  for (std::size_t i = limbs_.size(); i-- > 0;) {
    u128 cur = (static_cast<u128>(rem) << 64) | limbs_[i];
    limbs_[i] = static_cast<u64>(cur / d);
    rem = static_cast<u64>(cur % d);
  }
  trim();
  return rem;
}

BigNat BigNat::pow(std::uint32_t e) const {
  BigNat result(1);
  BigNat base = *this;
  while (e > 0) {
    if (e & 1u) result = result * base;
    e >>= 1;
    if (e) base = base * base;
  }
  return result;
}

BigNat BigNat::low_bits(std::uint32_t bits) const {
  std::size_t limb_count = (bits + 63) / 64;
  BigNat r;
  r.limbs_.assign(limbs_.begin(),
                  limbs_.begin() + static_cast<std::ptrdiff_t>(std::min(limb_count, limbs_.size())));
  if (bits % 64 && limb_count <= r.limbs_.size() && !r.limbs_.empty() &&
      limb_count == r.limbs_.size()) {
    r.limbs_.back() &= (u64{1} << (bits % 64)) - 1;
  }
  r.trim();
  return r;
}

std::uint64_t BigNat::to_u64_saturating() const {
  if (limbs_.empty()) return 0;
  if (limbs_.size() > 1) return ~u64{0};
  return limbs_[0];
}

std::string BigNat::to_decimal() const {
  if (is_zero()) return "0";
  BigNat tmp = *this;
  std::string out;
  while (!tmp.is_zero()) out.push_back(static_cast<char>('0' + tmp.divmod_small(10)));
  std::reverse(out.begin(), out.end());
  return out;
}

void BigNat::hash_into(std::uint64_t& h) const {
  auto mix = [](u64 x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  };
  h = mix(h ^ limbs_.size());
  for (u64 limb : limbs_) h = mix(h ^ limb);
}

}  // namespace macsim
