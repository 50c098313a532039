#include "macsim/dyadic.hpp"

#include <cmath>
#include <stdexcept>

namespace macsim {

void Dyadic::canonicalize() {
  if (mag_.is_zero()) {
    exp_ = 0;
    neg_ = false;
    return;
  }
  if (exp_ == 0) return;
  std::uint32_t tz = mag_.trailing_zero_bits();
  std::uint32_t drop = tz < exp_ ? tz : exp_;
  if (drop > 0) {
    mag_ = mag_.shifted_right(drop);
    exp_ -= drop;
  }
}

Dyadic Dyadic::from_int(std::int64_t v) {
  Dyadic d;
  d.neg_ = v < 0;
  d.mag_ = BigNat(static_cast<std::uint64_t>(d.neg_ ? -v : v));
  d.exp_ = 0;
  return d;
}

Dyadic Dyadic::from_parts(std::int64_t num, std::uint32_t exp) {
  Dyadic d;
  d.neg_ = num < 0;
  d.mag_ = BigNat(static_cast<std::uint64_t>(d.neg_ ? -num : num));
  d.exp_ = exp;
  d.canonicalize();
  return d;
}

Dyadic Dyadic::one_minus_pow2(std::uint32_t n) {
  Dyadic d;
  d.mag_ = BigNat::from_pow2(n) - BigNat(1);
  d.exp_ = n;
  d.canonicalize();
  return d;
}

Dyadic operator+(const Dyadic& a, const Dyadic& b) {
  std::uint32_t exp = std::max(a.exp_, b.exp_);
  BigNat am = a.mag_.shifted_left(exp - a.exp_);
  BigNat bm = b.mag_.shifted_left(exp - b.exp_);
  Dyadic r;
  r.exp_ = exp;
  if (a.neg_ == b.neg_) {
    r.mag_ = am + bm;
    r.neg_ = a.neg_;
  } else {
    int c = BigNat::compare(am, bm);
    if (c == 0) return Dyadic{};
    if (c > 0) {
      r.mag_ = am - bm;
      r.neg_ = a.neg_;
    } else {
      r.mag_ = bm - am;
      r.neg_ = b.neg_;
    }
  }
  r.canonicalize();
  return r;
}

Dyadic operator-(const Dyadic& a, const Dyadic& b) { return a + (-b); }

Dyadic operator*(const Dyadic& a, const Dyadic& b) {
  Dyadic r;
  r.mag_ = a.mag_ * b.mag_;
  r.exp_ = a.exp_ + b.exp_;
  r.neg_ = a.neg_ != b.neg_;
  r.canonicalize();
  return r;
}

Dyadic Dyadic::operator-() const {
  Dyadic r = *this;
  if (!r.mag_.is_zero()) r.neg_ = !r.neg_;
  return r;
}

Dyadic Dyadic::halved() const {
  Dyadic r = *this;
  if (!r.mag_.is_zero()) r.exp_ += 1;
  return r;
}

Dyadic Dyadic::average(const Dyadic& a, const Dyadic& b) { return (a + b).halved(); }

Dyadic Dyadic::scaled_pow2(std::int32_t k) const {
  if (mag_.is_zero()) return Dyadic{};
  Dyadic r = *this;
  if (k >= 0) {
    std::uint32_t up = static_cast<std::uint32_t>(k);
    if (r.exp_ >= up) {
      r.exp_ -= up;
    } else {
      r.mag_ = r.mag_.shifted_left(up - r.exp_);
      r.exp_ = 0;
    }
  } else {
    r.exp_ += static_cast<std::uint32_t>(-k);
  }
  r.canonicalize();
  return r;
}

Dyadic Dyadic::pow(std::uint32_t e) const {
  Dyadic r;
  r.mag_ = mag_.pow(e);
  r.exp_ = exp_ * e;
  r.neg_ = neg_ && (e & 1u);
  r.canonicalize();
  return r;
}

int Dyadic::compare(const Dyadic& a, const Dyadic& b) {
  if (a.neg_ != b.neg_) return a.neg_ ? -1 : 1;
  std::uint32_t exp = std::max(a.exp_, b.exp_);
  BigNat am = a.mag_.shifted_left(exp - a.exp_);
  BigNat bm = b.mag_.shifted_left(exp - b.exp_);
  int c = BigNat::compare(am, bm);
  return a.neg_ ? -c : c;
}

double Dyadic::to_double() const {
  // Keep top bits only; adequate for CSV-level statistics.
  std::uint32_t bits = mag_.bit_length();
  double m;
  int scale;
  if (bits <= 63) {
    m = static_cast<double>(mag_.to_u64_saturating());
    scale = -static_cast<int>(exp_);
  } else {
    std::uint32_t drop = bits - 63;
    m = static_cast<double>(mag_.shifted_right(drop).to_u64_saturating());
    scale = static_cast<int>(drop) - static_cast<int>(exp_);
  }
  double v = std::ldexp(m, scale);
  return neg_ ? -v : v;
}

std::string Dyadic::to_decimal(int digits) const {
  if (mag_.is_zero()) return "0";
  std::string out = neg_ ? "-" : "";
  BigNat ip = mag_.shifted_right(exp_);
  BigNat frac = mag_.low_bits(exp_);
  out += ip.to_decimal();
  if (frac.is_zero()) return out;
  std::string fd;
  BigNat rem = frac;
  for (int i = 0; i < digits && !rem.is_zero(); ++i) {
    rem.mul_small(10);
    BigNat digit = rem.shifted_right(exp_);
    fd.push_back(static_cast<char>('0' + digit.to_u64_saturating()));
    rem = rem.low_bits(exp_);
  }
  if (!rem.is_zero()) {
    // round on the next digit, half-up
    rem.mul_small(10);
    if (rem.shifted_right(exp_).to_u64_saturating() >= 5) {
      int i = static_cast<int>(fd.size()) - 1;
      for (; i >= 0; --i) {
        if (fd[i] != '9') {
          fd[i] += 1;
          break;
        }
        fd[i] = '0';
      }
      if (i < 0) {
        out = (neg_ ? "-" : "") + (ip + BigNat(1)).to_decimal();
      }
    }
  }
  while (!fd.empty() && fd.back() == '0') fd.pop_back();
  if (!fd.empty()) out += "." + fd;
  return out;
}

std::string Dyadic::to_pow2_string() const {
  std::string s = neg_ ? "-" : "";
  s += mag_.to_decimal();
  s += "/2^";
  s += std::to_string(exp_);
  return s;
}

void Dyadic::hash_into(std::uint64_t& h) const {
  mag_.hash_into(h);
  h ^= (static_cast<std::uint64_t>(exp_) << 1) | (neg_ ? 1 : 0);
  h *= 0x9e3779b97f4a7c15ULL;
}

Dyadic Dyadic::parse(const std::string& text) {
  if (text.empty()) throw std::invalid_argument("Dyadic::parse: empty");
  std::string s = text;
  bool neg = false;
  if (s[0] == '-') {
    neg = true;
    s = s.substr(1);
  }
  Dyadic d;
  auto caret = s.find("2^");
  if (auto slash = s.find('/'); slash != std::string::npos) {
    // "a/2^k"
    auto denom = s.substr(slash + 1);
    if (denom.rfind("2^", 0) != 0)
      throw std::invalid_argument("Dyadic::parse: denominator must be 2^k");
    d.mag_ = BigNat::from_decimal(s.substr(0, slash));
    d.exp_ = static_cast<std::uint32_t>(std::stoul(denom.substr(2)));
  } else if (caret == 0) {
    // "2^-k" or "2^k"
    std::string e = s.substr(2);
    if (!e.empty() && e[0] == '-') {
      d.mag_ = BigNat(1);
      d.exp_ = static_cast<std::uint32_t>(std::stoul(e.substr(1)));
    } else {
      d.mag_ = BigNat::from_pow2(static_cast<std::uint32_t>(std::stoul(e)));
      d.exp_ = 0;
    }
  } else if (auto dot = s.find('.'); dot != std::string::npos) {
    std::string digits = s.substr(0, dot) + s.substr(dot + 1);
    std::uint32_t places = static_cast<std::uint32_t>(s.size() - dot - 1);
    BigNat m = BigNat::from_decimal(digits);
    // m / 10^places must reduce to num / 2^k: strip factors of 5
    std::uint32_t k = places;
    BigNat five_pow(1);
    for (std::uint32_t i = 0; i < places; ++i) five_pow.mul_small(5);
    BigNat tmp = m;
    BigNat q = tmp;
    // m divisible by 5^places <=> dyadic
    for (std::uint32_t i = 0; i < places; ++i) {
      if (q.divmod_small(5) != 0)
        throw std::invalid_argument("Dyadic::parse: '" + text + "' is not dyadic");
    }
    d.mag_ = q;
    d.exp_ = k;
  } else {
    d.mag_ = BigNat::from_decimal(s);
    d.exp_ = 0;
  }
  d.neg_ = neg && !d.mag_.is_zero();
  d.canonicalize();
  return d;
}

Frac::Frac(BigNat num, BigNat den) : num_(std::move(num)), den_(std::move(den)) {
  if (den_.is_zero()) throw std::invalid_argument("Frac: zero denominator");
}

Frac Frac::from_dyadic(const Dyadic& d) {
  if (d.negative()) throw std::invalid_argument("Frac::from_dyadic: negative");
  return Frac(d.magnitude(), BigNat::from_pow2(d.exponent()));
}

Frac Frac::parse(const std::string& text) {
  if (auto slash = text.find('/'); slash != std::string::npos) {
    std::string den = text.substr(slash + 1);
    if (den.rfind("2^", 0) == 0) return from_dyadic(Dyadic::parse(text));
    return Frac(BigNat::from_decimal(text.substr(0, slash)), BigNat::from_decimal(den));
  }
  if (text.rfind("2^", 0) == 0) return from_dyadic(Dyadic::parse(text));
  if (auto dot = text.find('.'); dot != std::string::npos) {
    std::string digits = text.substr(0, dot) + text.substr(dot + 1);
    BigNat den(1);
    for (std::size_t i = 0; i < text.size() - dot - 1; ++i) den.mul_small(10);
    return Frac(BigNat::from_decimal(digits), den);
  }
  return Frac(BigNat::from_decimal(text), BigNat(1));
}

int Frac::compare(const Dyadic& d, const Frac& f) {
  if (d.negative()) return -1;
  // d.mag / 2^d.exp  vs  f.num / f.den  <=>  d.mag * f.den  vs  f.num << d.exp
  BigNat lhs = d.magnitude() * f.den_;
  BigNat rhs = f.num_.shifted_left(d.exponent());
  return BigNat::compare(lhs, rhs);
}

double Frac::to_double() const {
  // good enough for p_end formula displays
  double n = 0, d = 0;
  BigNat tn = num_, td = den_;
  while (tn.bit_length() > 52) tn = tn.shifted_right(1), td = td.shifted_right(1);
  while (td.bit_length() > 52) tn = tn.shifted_right(1), td = td.shifted_right(1);
  n = static_cast<double>(tn.to_u64_saturating());
  d = static_cast<double>(td.to_u64_saturating());
  return d == 0 ? 0 : n / d;
}

std::string Frac::to_string() const { return num_.to_decimal() + "/" + den_.to_decimal(); }

int p_end_halving(const Frac& eps) {
  // least p with 2^-p <= eps  <=>  den <= num * 2^p
  for (int p = 0; p <= 4096; ++p) {
    if (BigNat::compare(eps.den(), eps.num().shifted_left(static_cast<std::uint32_t>(p))) <= 0)
      return p;
  }
  throw std::invalid_argument("p_end_halving: epsilon too small");
}

int p_end_contraction(std::uint32_t n, const Frac& eps) {
  // least p with ((2^n - 1)/2^n)^p <= eps
  //  <=>  (2^n - 1)^p * eps.den <= eps.num * 2^(n p)
  BigNat base = BigNat::from_pow2(n) - BigNat(1);
  BigNat pow(1);
  for (int p = 0; p <= 100000; ++p) {
    BigNat lhs = pow * eps.den();
    BigNat rhs = eps.num().shifted_left(n * static_cast<std::uint32_t>(p));
    if (BigNat::compare(lhs, rhs) <= 0) return p;
    pow = pow * base;
  }
  throw std::invalid_argument("p_end_contraction: did not converge");
}

}  // namespace macsim
