// Arbitrary-precision naturals, integers and rationals.
//
// The language's value domain is the naturals with truncated subtraction,
// so BigNat is the base type; BigInt and BigRat exist for the solver's
// exact simplex arithmetic.

#ifndef RELIC_BIGNUM_HPP
#define RELIC_BIGNUM_HPP

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace relic {

class BigNat {
public:
  BigNat() = default;
  BigNat(uint64_t v);

  static std::optional<BigNat> parse(std::string_view s);

  bool is_zero() const { return limbs_.empty(); }
  bool fits_u64() const { return limbs_.size() <= 2; }
  uint64_t to_u64() const; // requires fits_u64()

  friend BigNat operator+(const BigNat& a, const BigNat& b);
  friend BigNat operator*(const BigNat& a, const BigNat& b);
  // Truncated subtraction: a - b is 0 when b > a.
  BigNat monus(const BigNat& b) const;

  // Exact subtraction; requires b <= *this.
  BigNat sub_exact(const BigNat& b) const;

  // Quotient and remainder; divisor must be nonzero.
  static void divmod(const BigNat& a, const BigNat& b, BigNat& q, BigNat& r);
  static BigNat gcd(BigNat a, BigNat b);

  friend std::strong_ordering operator<=>(const BigNat& a, const BigNat& b);
  friend bool operator==(const BigNat& a, const BigNat& b) = default;

  std::string str() const;
  size_t hash() const;

private:
  // Little-endian base-2^32 limbs, no trailing zero limbs.
  std::vector<uint32_t> limbs_;
  void trim();
  friend class BigInt;
};

class BigInt {
public:
  BigInt() = default;
  BigInt(int64_t v);
  BigInt(const BigNat& m, bool negative = false);

  static BigInt from_nat(const BigNat& n) { return BigInt(n, false); }

  bool is_zero() const { return mag_.is_zero(); }
  bool negative() const { return neg_; }
  const BigNat& magnitude() const { return mag_; }
  // Requires a nonnegative value that fits.
  uint64_t to_u64() const { return mag_.to_u64(); }

  friend BigInt operator+(const BigInt& a, const BigInt& b);
  friend BigInt operator-(const BigInt& a, const BigInt& b);
  friend BigInt operator*(const BigInt& a, const BigInt& b);
  BigInt operator-() const;

  friend std::strong_ordering operator<=>(const BigInt& a, const BigInt& b);
  friend bool operator==(const BigInt& a, const BigInt& b) = default;

  std::string str() const;

private:
  bool neg_ = false; // never set when mag_ is zero
  BigNat mag_;
  void canon();
};

// Exact rationals, always normalized with a positive denominator.
class BigRat {
public:
  BigRat() : num_(0), den_(1) {}
  BigRat(BigInt n) : num_(std::move(n)), den_(1) {}
  BigRat(int64_t n) : num_(n), den_(1) {}
  BigRat(BigInt n, BigNat d); // d must be nonzero

  bool is_zero() const { return num_.is_zero(); }
  bool is_integer() const { return den_ == BigNat(1); }
  const BigInt& num() const { return num_; }
  const BigNat& den() const { return den_; }

  friend BigRat operator+(const BigRat& a, const BigRat& b);
  friend BigRat operator-(const BigRat& a, const BigRat& b);
  friend BigRat operator*(const BigRat& a, const BigRat& b);
  friend BigRat operator/(const BigRat& a, const BigRat& b); // b nonzero
  BigRat operator-() const;

  BigInt floor() const;
  BigInt ceil() const;

  friend std::strong_ordering operator<=>(const BigRat& a, const BigRat& b);
  friend bool operator==(const BigRat& a, const BigRat& b) = default;

  std::string str() const;

private:
  BigInt num_;
  BigNat den_;
  void normalize();
};

} // namespace relic

#endif
