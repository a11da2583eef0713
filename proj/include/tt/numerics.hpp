#pragma once

#include <gmp.h>

#include <cassert>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace tt {

// Arbitrary-precision signed integer over GMP's mpz layer.
// Value type: copyable, movable, totally ordered.
class BigInt {
 public:
  BigInt() { mpz_init(z_); }
  BigInt(long v) { mpz_init_set_si(z_, v); }  // NOLINT(google-explicit-constructor)
  BigInt(int v) : BigInt(static_cast<long>(v)) {}
  explicit BigInt(std::string_view decimal) {
    mpz_init(z_);
    if (mpz_set_str(z_, std::string(decimal).c_str(), 10) != 0) {
      mpz_clear(z_);
      throw_parse(decimal);
    }
  }
  BigInt(const BigInt& o) { mpz_init_set(z_, o.z_); }
  BigInt(BigInt&& o) noexcept {
    mpz_init(z_);
    mpz_swap(z_, o.z_);
  }
  BigInt& operator=(const BigInt& o) {
    if (this != &o) mpz_set(z_, o.z_);
    return *this;
  }
  BigInt& operator=(BigInt&& o) noexcept {
    mpz_swap(z_, o.z_);
    return *this;
  }
  ~BigInt() { mpz_clear(z_); }

  static BigInt pow2(unsigned long k) {
    BigInt r;
    mpz_setbit(r.z_, k);
    return r;
  }

  friend BigInt operator+(const BigInt& a, const BigInt& b) {
    BigInt r;
    mpz_add(r.z_, a.z_, b.z_);
    return r;
  }
  friend BigInt operator-(const BigInt& a, const BigInt& b) {
    BigInt r;
    mpz_sub(r.z_, a.z_, b.z_);
    return r;
  }
  friend BigInt operator*(const BigInt& a, const BigInt& b) {
    BigInt r;
    mpz_mul(r.z_, a.z_, b.z_);
    return r;
  }
  friend BigInt operator-(const BigInt& a) {
    BigInt r;
    mpz_neg(r.z_, a.z_);
    return r;
  }
  BigInt& operator+=(const BigInt& o) {
    mpz_add(z_, z_, o.z_);
    return *this;
  }
  BigInt& operator-=(const BigInt& o) {
    mpz_sub(z_, z_, o.z_);
    return *this;
  }
  BigInt& operator*=(const BigInt& o) {
    mpz_mul(z_, z_, o.z_);
    return *this;
  }

  // Floor division (toward -inf). b != 0.
  friend BigInt fdiv(const BigInt& a, const BigInt& b) {
    assert(b.sign() != 0);
    BigInt r;
    mpz_fdiv_q(r.z_, a.z_, b.z_);
    return r;
  }
  // Ceiling division (toward +inf). b != 0.
  friend BigInt cdiv(const BigInt& a, const BigInt& b) {
    assert(b.sign() != 0);
    BigInt r;
    mpz_cdiv_q(r.z_, a.z_, b.z_);
    return r;
  }
  BigInt fdiv2exp(unsigned long k) const {
    BigInt r;
    mpz_fdiv_q_2exp(r.z_, z_, k);
    return r;
  }
  BigInt cdiv2exp(unsigned long k) const {
    BigInt r;
    mpz_cdiv_q_2exp(r.z_, z_, k);
    return r;
  }
  BigInt mul2exp(unsigned long k) const {
    BigInt r;
    mpz_mul_2exp(r.z_, z_, k);
    return r;
  }

  int sign() const { return mpz_sgn(z_); }
  bool is_zero() const { return sign() == 0; }
  BigInt abs() const {
    BigInt r;
    mpz_abs(r.z_, z_);
    return r;
  }

  friend int cmp(const BigInt& a, const BigInt& b) { return mpz_cmp(a.z_, b.z_); }
  friend bool operator==(const BigInt& a, const BigInt& b) { return cmp(a, b) == 0; }
  friend bool operator!=(const BigInt& a, const BigInt& b) { return cmp(a, b) != 0; }
  friend bool operator<(const BigInt& a, const BigInt& b) { return cmp(a, b) < 0; }
  friend bool operator<=(const BigInt& a, const BigInt& b) { return cmp(a, b) <= 0; }
  friend bool operator>(const BigInt& a, const BigInt& b) { return cmp(a, b) > 0; }
  friend bool operator>=(const BigInt& a, const BigInt& b) { return cmp(a, b) >= 0; }
  friend bool operator==(const BigInt& a, long b) { return mpz_cmp_si(a.z_, b) == 0; }
  friend bool operator!=(const BigInt& a, long b) { return mpz_cmp_si(a.z_, b) != 0; }

  bool fits_long() const { return mpz_fits_slong_p(z_); }
  long to_long() const {
    assert(fits_long());
    return mpz_get_si(z_);
  }
  double to_double() const { return mpz_get_d(z_); }

  std::string str() const {
    std::string s(mpz_sizeinbase(z_, 10) + 2, '\0');
    mpz_get_str(s.data(), 10, z_);
    s.resize(s.find('\0'));
    return s;
  }

  // Number of bits of |x|; bits(0) = 0.
  std::size_t bits() const { return is_zero() ? 0 : mpz_sizeinbase(z_, 2); }

  friend std::ostream& operator<<(std::ostream& os, const BigInt& v);

  mpz_srcptr raw() const { return z_; }

 private:
  [[noreturn]] static void throw_parse(std::string_view s);
  mpz_t z_;
};

// complexity(n) = ceil(log2(|n| + 1)): bits needed to write |n|.
inline std::size_t complexity(const BigInt& n) { return n.bits(); }
inline std::size_t complexity(long n) { return BigInt(n).bits(); }

std::size_t complexity(const std::vector<BigInt>& v);
std::size_t complexity(const std::vector<std::vector<BigInt>>& m);

enum class IntervalOrder { Less, Greater, Incomparable };

// Half-open integer interval [lo, hi), non-empty (lo < hi).
class Interval {
 public:
  Interval(BigInt lo, BigInt hi) : lo_(std::move(lo)), hi_(std::move(hi)) {
    assert(lo_ < hi_);
  }
  // Singleton {x} = [x, x+1).
  static Interval singleton(BigInt x) {
    BigInt hi = x + BigInt(1);
    return Interval(std::move(x), std::move(hi));
  }

  const BigInt& lo() const { return lo_; }
  const BigInt& hi() const { return hi_; }
  BigInt width() const { return hi_ - lo_; }
  bool is_singleton() const { return hi_ == lo_ + BigInt(1); }
  bool contains(const BigInt& x) const { return lo_ <= x && x < hi_; }

  friend bool operator==(const Interval& a, const Interval& b) {
    return a.lo_ == b.lo_ && a.hi_ == b.hi_;
  }

  // [p,q) < [p',q') iff q <= p'.
  friend IntervalOrder interval_lt(const Interval& a, const Interval& b) {
    if (a.hi_ <= b.lo_) return IntervalOrder::Less;
    if (b.hi_ <= a.lo_) return IntervalOrder::Greater;
    return IntervalOrder::Incomparable;
  }

  friend Interval operator+(const Interval& a, const Interval& b) {
    return Interval(a.lo_ + b.lo_, a.hi_ + b.hi_ - BigInt(1));
  }
  friend Interval operator-(const Interval& a, const Interval& b) {
    return Interval(a.lo_ - b.hi_ + BigInt(1), a.hi_ - b.lo_);
  }
  friend Interval operator*(const Interval& a, const Interval& b);

  // c * I, smallest enclosing half-open interval.
  friend Interval scale(const BigInt& c, const Interval& i) {
    if (c.sign() >= 0) return Interval(c * i.lo_, c * (i.hi_ - BigInt(1)) + BigInt(1));
    return Interval(c * (i.hi_ - BigInt(1)), c * i.lo_ + BigInt(1));
  }

  // shift(I, k) = [lo fdiv 2^k, hi cdiv 2^k).
  Interval shift(unsigned long k) const {
    return Interval(lo_.fdiv2exp(k), hi_.cdiv2exp(k));
  }

  std::size_t complexity() const { return tt::complexity(lo_) + tt::complexity(hi_); }
  // Complexity bound ⌈I⌉ = complexity(hi - 1).
  std::size_t complexity_bound() const { return tt::complexity(hi_ - BigInt(1)); }
  // Uncertainty ε(I) = complexity(width - 1); 0 exactly for singletons.
  std::size_t uncertainty() const { return tt::complexity(hi_ - lo_ - BigInt(1)); }

  std::string str() const;

 private:
  BigInt lo_, hi_;
};

// Largest n >= 0 with n·J < I in the interval order. Requires J < I and J.lo >= 1.
// Throws NotComparable (std::invalid_argument) if J < I fails.
BigInt interval_fdiv(const Interval& i, const Interval& j);

// x fdiv y when it is the same for every x in I, y in J; nullopt otherwise.
// Requires J.lo >= 1 and I.lo >= 0.
std::optional<BigInt> interval_fdiv_determined(const Interval& i, const Interval& j);

}  // namespace tt
