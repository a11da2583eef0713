#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "tt/numerics.hpp"

using namespace tt;

namespace {

std::mt19937_64 rng(20240811);

BigInt random_bigint(int max_bits) {
  std::uniform_int_distribution<int> bitd(0, max_bits);
  int bits = bitd(rng);
  BigInt x(0);
  for (int i = 0; i < bits; ++i) {
    x = x.mul2exp(1);
    if (rng() & 1) x += BigInt(1);
  }
  return x;
}

Interval random_interval(long span, long offset) {
  std::uniform_int_distribution<long> lo_d(-offset, offset);
  std::uniform_int_distribution<long> w_d(1, span);
  long lo = lo_d(rng);
  return Interval(BigInt(lo), BigInt(lo + w_d(rng)));
}

// Enumeration oracle: smallest half-open interval containing {x op y}.
Interval brute_arith(const Interval& a, const Interval& b, char op) {
  bool first = true;
  BigInt mn(0), mx(0);
  for (BigInt x = a.lo(); x < a.hi(); x += BigInt(1))
    for (BigInt y = b.lo(); y < b.hi(); y += BigInt(1)) {
      BigInt v = op == '+' ? x + y : op == '-' ? x - y : x * y;
      if (first || v < mn) mn = v;
      if (first || v > mx) mx = v;
      first = false;
    }
  return Interval(mn, mx + BigInt(1));
}

}  // namespace

TEST_CASE("complexity of integers") {
  CHECK(complexity(BigInt(0)) == 0);
  CHECK(complexity(BigInt(1)) == 1);
  CHECK(complexity(BigInt(5)) == 3);
  CHECK(complexity(BigInt(-8)) == 4);
  CHECK(complexity(BigInt(1023)) == 10);
  CHECK(complexity(BigInt(1024)) == 11);
  CHECK(complexity(std::vector<BigInt>{BigInt(-8), BigInt(1)}) == 5);
}

TEST_CASE("complexity is subadditive over products") {
  for (int it = 0; it < 200; ++it) {
    BigInt a = random_bigint(200), b = random_bigint(200);
    CHECK(complexity(a * b) <= complexity(a) + complexity(b));
  }
}

TEST_CASE("interval order") {
  CHECK(interval_lt(Interval(3, 5), Interval(5, 9)) == IntervalOrder::Less);
  CHECK(interval_lt(Interval(3, 6), Interval(5, 9)) == IntervalOrder::Incomparable);
  CHECK(interval_lt(Interval(9, 10), Interval(2, 9)) == IntervalOrder::Greater);
}

TEST_CASE("interval arithmetic matches the enumeration oracle") {
  CHECK(Interval(1, 2) + Interval(10, 12) == Interval(11, 13));
  CHECK(Interval::singleton(3) * Interval::singleton(4) == Interval::singleton(12));
  CHECK(Interval(2, 4) - Interval(1, 3) == Interval(0, 3));
  for (int it = 0; it < 300; ++it) {
    Interval a = random_interval(6, 20), b = random_interval(6, 20);
    for (char op : {'+', '-', '*'}) {
      Interval got = op == '+' ? a + b : op == '-' ? a - b : a * b;
      CHECK(got == brute_arith(a, b, op));
    }
  }
}

TEST_CASE("scale by possibly-negative constants") {
  for (int it = 0; it < 200; ++it) {
    Interval a = random_interval(8, 30);
    std::uniform_int_distribution<long> cd(-9, 9);
    BigInt c(cd(rng));
    Interval got = scale(c, a);
    bool first = true;
    BigInt mn(0), mx(0);
    for (BigInt x = a.lo(); x < a.hi(); x += BigInt(1)) {
      BigInt v = c * x;
      if (first || v < mn) mn = v;
      if (first || v > mx) mx = v;
      first = false;
    }
    CHECK(got == Interval(mn, mx + BigInt(1)));
  }
}

TEST_CASE("interval_fdiv against the definition") {
  CHECK(interval_fdiv(Interval(10, 20), Interval(1, 2)) == BigInt(9));
  CHECK(interval_fdiv(Interval(10, 20), Interval::singleton(2)) == BigInt(4));
  CHECK(interval_fdiv(Interval::singleton(7), Interval::singleton(3)) == BigInt(2));
  CHECK_THROWS(interval_fdiv(Interval(3, 6), Interval(5, 9)));

  // Enumeration oracle over the interval order.
  for (int it = 0; it < 200; ++it) {
    std::uniform_int_distribution<long> d(1, 30);
    long jlo = d(rng), jw = 1 + d(rng) % 4;
    long ilo = jlo + jw + d(rng), iw = 1 + d(rng) % 6;
    Interval i(BigInt(ilo), BigInt(ilo + iw)), j(BigInt(jlo), BigInt(jlo + jw));
    if (interval_lt(j, i) != IntervalOrder::Less) continue;
    long best = -1;
    for (long n = 0; n < 400; ++n) {
      Interval nj = n == 0 ? Interval(0, 1) : Interval(BigInt(n * jlo), BigInt(n * (jlo + jw - 1) + 1));
      if (interval_lt(nj, i) == IntervalOrder::Less)
        best = n;
      else
        break;
    }
    CHECK(interval_fdiv(i, j) == BigInt(best));
  }
}

TEST_CASE("interval_fdiv on exhaustive singletons") {
  // Under the interval order, {n*b} < {a} iff n*b < a: at exact multiples the
  // answer is one less than floor division, elsewhere it coincides.
  for (long a = 2; a <= 120; ++a)
    for (long b = 1; b < a; ++b) {
      CHECK(interval_fdiv(Interval::singleton(a), Interval::singleton(b)) ==
            BigInt((a - 1) / b));
    }
}

TEST_CASE("interval_fdiv_determined equals fdiv on singletons, detects fuzz") {
  for (long a = 1; a <= 80; ++a)
    for (long b = 1; b <= a; ++b) {
      auto n = interval_fdiv_determined(Interval::singleton(a), Interval::singleton(b));
      REQUIRE(n.has_value());
      CHECK(*n == BigInt(a / b));
    }
  CHECK_FALSE(interval_fdiv_determined(Interval(10, 20), Interval(1, 3)).has_value());
  CHECK_FALSE(interval_fdiv_determined(Interval(100, 104), Interval(10, 12)).has_value());
  auto n = interval_fdiv_determined(Interval(100, 104), Interval::singleton(10));
  REQUIRE(n.has_value());
  CHECK(*n == BigInt(10));
}

TEST_CASE("shift basics and containment") {
  CHECK(Interval(5, 12).shift(2) == Interval(1, 3));
  CHECK(Interval::singleton(9).shift(0) == Interval::singleton(9));
  CHECK(Interval(-7, 3).shift(1) == Interval(-4, 2));
  for (int it = 0; it < 300; ++it) {
    Interval a = random_interval(40, 500);
    std::uniform_int_distribution<int> kd(0, 10);
    unsigned long k = kd(rng);
    Interval s = a.shift(k);
    // I ⊆ 2^k · shift(I,k) as integer sets.
    CHECK(s.lo().mul2exp(k) <= a.lo());
    CHECK(a.hi() <= s.hi().mul2exp(k));
    std::size_t eu = s.uncertainty();
    std::size_t bound = std::max<std::size_t>(a.uncertainty() > k ? a.uncertainty() - k : 0, 1) + 1;
    CHECK(eu <= bound);
  }
}

TEST_CASE("interval statistics") {
  Interval zero = Interval::singleton(0);
  CHECK(zero.complexity() == 1);
  CHECK(zero.complexity_bound() == 0);
  CHECK(zero.uncertainty() == 0);

  Interval i35(3, 5);
  CHECK(i35.complexity() == 5);
  CHECK(i35.complexity_bound() == 3);
  CHECK(i35.uncertainty() == 1);

  Interval big(0, 1024);
  CHECK(big.complexity() == 11);
  CHECK(big.complexity_bound() == 10);
  CHECK(big.uncertainty() == 10);
}

TEST_CASE("fuzz: x op y lands in interval_arith(I, J, op)") {
  for (int it = 0; it < 300; ++it) {
    Interval a = random_interval(5, 15), b = random_interval(5, 15);
    std::uniform_int_distribution<long> xd(0, 100);
    BigInt x = a.lo() + BigInt(xd(rng) % (a.width().to_long()));
    BigInt y = b.lo() + BigInt(xd(rng) % (b.width().to_long()));
    CHECK((a + b).contains(x + y));
    CHECK((a - b).contains(x - y));
    CHECK((a * b).contains(x * y));
  }
}
