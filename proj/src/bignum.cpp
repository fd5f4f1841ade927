#include "relic/bignum.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>

namespace relic {

// ---------------------------------------------------------------- BigNat

BigNat::BigNat(uint64_t v) {
  if (v) {
    limbs_.push_back(static_cast<uint32_t>(v));
    if (v >> 32) limbs_.push_back(static_cast<uint32_t>(v >> 32));
  }
}

void BigNat::trim() {
  while (!limbs_.empty() && limbs_.back() == 0) limbs_.pop_back();
}

uint64_t BigNat::to_u64() const {
  assert(fits_u64());
  uint64_t v = 0;
  if (limbs_.size() > 1) v = static_cast<uint64_t>(limbs_[1]) << 32;
  if (!limbs_.empty()) v |= limbs_[0];
  return v;
}

std::optional<BigNat> BigNat::parse(std::string_view s) {
  if (s.empty()) return std::nullopt;
  BigNat acc;
  for (char ch : s) {
    if (ch < '0' || ch > '9') return std::nullopt;
    acc = acc * BigNat(10) + BigNat(static_cast<uint64_t>(ch - '0'));
  }
  return acc;
}

BigNat operator+(const BigNat& a, const BigNat& b) {
  BigNat r;
  const auto& x = a.limbs_;
  const auto& y = b.limbs_;
  size_t n = std::max(x.size(), y.size());
  r.limbs_.resize(n, 0);
  uint64_t carry = 0;
  for (size_t i = 0; i < n; ++i) {
    uint64_t s = carry;
    if (i < x.size()) s += x[i];
    if (i < y.size()) s += y[i];
    r.limbs_[i] = static_cast<uint32_t>(s);
    carry = s >> 32;
  }
  if (carry) r.limbs_.push_back(static_cast<uint32_t>(carry));
  return r;
}

BigNat BigNat::sub_exact(const BigNat& b) const {
  assert(b <= *this);
  BigNat r;
  r.limbs_.resize(limbs_.size(), 0);
  int64_t borrow = 0;
  for (size_t i = 0; i < limbs_.size(); ++i) {
    int64_t d = static_cast<int64_t>(limbs_[i]) - borrow -
                (i < b.limbs_.size() ? static_cast<int64_t>(b.limbs_[i]) : 0);
    borrow = 0;
    if (d < 0) {
      d += (int64_t{1} << 32);
      borrow = 1;
    }
    r.limbs_[i] = static_cast<uint32_t>(d);
  }
  assert(borrow == 0);
  r.trim();
  return r;
}

BigNat BigNat::monus(const BigNat& b) const {
  if (b >= *this) return BigNat();
  return sub_exact(b);
}

BigNat operator*(const BigNat& a, const BigNat& b) {
  if (a.is_zero() || b.is_zero()) return BigNat();
  BigNat r;
  r.limbs_.assign(a.limbs_.size() + b.limbs_.size(), 0);
  for (size_t i = 0; i < a.limbs_.size(); ++i) {
    uint64_t carry = 0;
    for (size_t j = 0; j < b.limbs_.size(); ++j) {
      uint64_t cur = static_cast<uint64_t>(a.limbs_[i]) * b.limbs_[j] +
                     r.limbs_[i + j] + carry;
      r.limbs_[i + j] = static_cast<uint32_t>(cur);
      carry = cur >> 32;
    }
    size_t k = i + b.limbs_.size();
    while (carry) {
      uint64_t cur = r.limbs_[k] + carry;
      r.limbs_[k] = static_cast<uint32_t>(cur);
      carry = cur >> 32;
      ++k;
    }
  }
  r.trim();
  return r;
}

std::strong_ordering operator<=>(const BigNat& a, const BigNat& b) {
  if (a.limbs_.size() != b.limbs_.size())
    return a.limbs_.size() <=> b.limbs_.size();
  for (size_t i = a.limbs_.size(); i-- > 0;) {
    if (a.limbs_[i] != b.limbs_[i]) return a.limbs_[i] <=> b.limbs_[i];
  }
  return std::strong_ordering::equal;
}

namespace {
// Number of significant bits.
size_t bit_length(const std::vector<uint32_t>& limbs) {
  if (limbs.empty()) return 0;
  uint32_t top = limbs.back();
  size_t bits = (limbs.size() - 1) * 32;
  while (top) {
    ++bits;
    top >>= 1;
  }
  return bits;
}
} // namespace

// Shift-and-subtract long division. Operand sizes stay tiny here, so the
// O(bits * limbs) cost is irrelevant.
void BigNat::divmod(const BigNat& a, const BigNat& b, BigNat& q, BigNat& r) {
  if (b.is_zero()) throw std::domain_error("BigNat: division by zero");
  q = BigNat();
  r = BigNat();
  size_t nbits = bit_length(a.limbs_);
  for (size_t i = nbits; i-- > 0;) {
    // r = r*2 + bit i of a
    uint64_t carry = (a.limbs_[i / 32] >> (i % 32)) & 1u;
    for (size_t k = 0; k < r.limbs_.size(); ++k) {
      uint64_t cur = (static_cast<uint64_t>(r.limbs_[k]) << 1) | carry;
      r.limbs_[k] = static_cast<uint32_t>(cur);
      carry = cur >> 32;
    }
    if (carry) r.limbs_.push_back(static_cast<uint32_t>(carry));
    if (r >= b) {
      r = r.sub_exact(b);
      size_t limb = i / 32;
      if (q.limbs_.size() <= limb) q.limbs_.resize(limb + 1, 0);
      q.limbs_[limb] |= (uint32_t{1} << (i % 32));
    }
  }
  q.trim();
  r.trim();
}

BigNat BigNat::gcd(BigNat a, BigNat b) {
  while (!b.is_zero()) {
    BigNat q, r;
    divmod(a, b, q, r);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

std::string BigNat::str() const {
  if (is_zero()) return "0";
  BigNat cur = *this;
  const BigNat chunk(1000000000u);
  std::vector<uint32_t> groups;
  while (!cur.is_zero()) {
    BigNat q, r;
    divmod(cur, chunk, q, r);
    groups.push_back(r.is_zero() ? 0u : r.limbs_[0]);
    cur = std::move(q);
  }
  std::string out = std::to_string(groups.back());
  for (size_t i = groups.size() - 1; i-- > 0;) {
    std::string part = std::to_string(groups[i]);
    out += std::string(9 - part.size(), '0') + part;
  }
  return out;
}

size_t BigNat::hash() const {
  size_t h = 0x9e3779b97f4a7c15ull;
  for (uint32_t l : limbs_) h = h * 1099511628211ull + l;
  return h;
}

// ---------------------------------------------------------------- BigInt

BigInt::BigInt(int64_t v) {
  if (v < 0) {
    neg_ = true;
    mag_ = BigNat(static_cast<uint64_t>(-(v + 1)) + 1);
  } else {
    mag_ = BigNat(static_cast<uint64_t>(v));
  }
}

BigInt::BigInt(const BigNat& m, bool negative) : neg_(negative), mag_(m) {
  canon();
}

void BigInt::canon() {
  if (mag_.is_zero()) neg_ = false;
}

BigInt operator+(const BigInt& a, const BigInt& b) {
  if (a.neg_ == b.neg_) return BigInt(a.mag_ + b.mag_, a.neg_);
  if (a.mag_ >= b.mag_) return BigInt(a.mag_.sub_exact(b.mag_), a.neg_);
  return BigInt(b.mag_.sub_exact(a.mag_), b.neg_);
}

BigInt BigInt::operator-() const { return BigInt(mag_, !neg_); }

BigInt operator-(const BigInt& a, const BigInt& b) { return a + (-b); }

BigInt operator*(const BigInt& a, const BigInt& b) {
  return BigInt(a.mag_ * b.mag_, a.neg_ != b.neg_);
}

std::strong_ordering operator<=>(const BigInt& a, const BigInt& b) {
  if (a.neg_ != b.neg_) return a.neg_ ? std::strong_ordering::less
                                      : std::strong_ordering::greater;
  auto c = a.mag_ <=> b.mag_;
  if (!a.neg_) return c;
  if (c == std::strong_ordering::less) return std::strong_ordering::greater;
  if (c == std::strong_ordering::greater) return std::strong_ordering::less;
  return std::strong_ordering::equal;
}

std::string BigInt::str() const {
  return neg_ ? "-" + mag_.str() : mag_.str();
}

// ---------------------------------------------------------------- BigRat

BigRat::BigRat(BigInt n, BigNat d) : num_(std::move(n)), den_(std::move(d)) {
  if (den_.is_zero()) throw std::domain_error("BigRat: zero denominator");
  normalize();
}

void BigRat::normalize() {
  if (num_.is_zero()) {
    den_ = BigNat(1);
    return;
  }
  BigNat g = BigNat::gcd(num_.magnitude(), den_);
  if (g == BigNat(1)) return;
  BigNat q, r;
  BigNat::divmod(num_.magnitude(), g, q, r);
  num_ = BigInt(q, num_.negative());
  BigNat q2, r2;
  BigNat::divmod(den_, g, q2, r2);
  den_ = q2;
}

BigRat operator+(const BigRat& a, const BigRat& b) {
  return BigRat(a.num_ * BigInt::from_nat(b.den_) +
                    b.num_ * BigInt::from_nat(a.den_),
                a.den_ * b.den_);
}

BigRat operator-(const BigRat& a, const BigRat& b) { return a + (-b); }

BigRat BigRat::operator-() const {
  BigRat r;
  r.num_ = -num_;
  r.den_ = den_;
  return r;
}

BigRat operator*(const BigRat& a, const BigRat& b) {
  return BigRat(a.num_ * b.num_, a.den_ * b.den_);
}

BigRat operator/(const BigRat& a, const BigRat& b) {
  if (b.is_zero()) throw std::domain_error("BigRat: division by zero");
  BigInt n = a.num_ * BigInt::from_nat(b.den_);
  BigNat d = a.den_ * b.num_.magnitude();
  if (b.num_.negative()) n = -n;
  return BigRat(std::move(n), std::move(d));
}

BigInt BigRat::floor() const {
  BigNat q, r;
  BigNat::divmod(num_.magnitude(), den_, q, r);
  if (!num_.negative()) return BigInt(q, false);
  if (r.is_zero()) return BigInt(q, true);
  return BigInt(q + BigNat(1), true);
}

BigInt BigRat::ceil() const { return -((-*this).floor()); }

std::strong_ordering operator<=>(const BigRat& a, const BigRat& b) {
  return a.num_ * BigInt::from_nat(b.den_) <=>
         b.num_ * BigInt::from_nat(a.den_);
}

std::string BigRat::str() const {
  if (is_integer()) return num_.str();
  return num_.str() + "/" + den_.str();
}

} // namespace relic
