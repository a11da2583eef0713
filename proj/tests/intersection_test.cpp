#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "tt/coordinates.hpp"
#include "tt/intersection.hpp"

using namespace tt;

namespace {

const Surface kS04(0, 4);

DeltaVector dv(const BigInt& a, const BigInt& b, const BigInt& c) {
  return DeltaVector{{a, b, c}};
}

DeltaVector slope_delta(const BigInt& p, const BigInt& q) {
  return dv(BigInt(2) * q, BigInt(2) * p.abs(), BigInt(2) * (p - BigInt(2) * q).abs());
}

BigInt rand_big(std::mt19937& rng, int bits) {
  BigInt x(0);
  for (int i = 0; i < bits; ++i) {
    x = x.mul2exp(1);
    if (rng() & 1) x += BigInt(1);
  }
  return x;
}

BigInt slope_iota(const BigInt& p1, const BigInt& q1, const BigInt& p2, const BigInt& q2) {
  return BigInt(2) * (p1 * q2 - p2 * q1).abs();
}

}  // namespace

TEST_CASE("fast equals naive on the published example values") {
  IntersectionOptions opt;
  opt.check_invariants = true;
  opt.naive_cutover = 0;  // force the coarse rounds even on small instances
  DeltaVector alpha = dv(0, 2, 2), beta = dv(2, 0, 4), gamma = dv(2, 4, 0);
  CHECK(fast_intersection(standard_pair_from_delta(kS04, alpha, beta), opt) == BigInt(2));
  CHECK(fast_intersection(standard_pair_from_delta(kS04, beta, gamma), opt) == BigInt(4));
  CHECK(fast_intersection(standard_pair_from_delta(kS04, beta, beta), opt) == BigInt(0));
}

TEST_CASE("twist family: iota(beta, T_alpha^k beta) = 4k") {
  IntersectionOptions opt;
  DeltaVector beta = dv(2, 0, 4);
  for (long k : {1L, 10L, 1000L, 1000000L}) {
    // Column beta of the twist table: (2, 4k, 4k-4).
    DeltaVector tkb = dv(2, 4 * k, 4 * k - 4);
    CHECK(intersection_from_delta(kS04, beta, tkb, false, opt) == BigInt(4) * BigInt(k));
  }
  // k = 10^12 exercises genuinely large winding weights.
  BigInt big("1000000000000");
  DeltaVector tkb = dv(BigInt(2), BigInt(4) * big, BigInt(4) * big - BigInt(4));
  CHECK(intersection_from_delta(kS04, beta, tkb, false, opt) == BigInt(4) * big);
}

TEST_CASE("oracle equivalence: fast == naive == slope formula, random instances") {
  std::mt19937 rng(2024);
  IntersectionOptions fast_opt;
  fast_opt.naive_cutover = 64;
  IntersectionOptions naive_opt;
  int checked = 0;
  for (int it = 0; it < 120; ++it) {
    int bits = 1 + static_cast<int>(rng() % 48);
    BigInt p1 = rand_big(rng, bits), p2 = rand_big(rng, bits);
    BigInt q1(1 + static_cast<long>(rng() % 7)), q2(1 + static_cast<long>(rng() % 7));
    if (rng() % 5 == 0) p1 = -p1;
    if (rng() % 5 == 0) p2 = -p2;
    if (rng() % 7 == 0) q1 = BigInt(0), p1 = p1.abs();
    DeltaVector a = slope_delta(p1, q1), b = slope_delta(p2, q2);
    BigInt expected = slope_iota(p1, q1, p2, q2);
    WeightedPair wp = standard_pair_from_delta(kS04, a, b);
    CHECK(fast_intersection(wp, fast_opt) == expected);
    CHECK(naive_intersection(wp, naive_opt) == expected);
    ++checked;
  }
  CHECK(checked == 120);
}

TEST_CASE("big weights go through the fast path only") {
  // Quadratic-size instances would take far too long through the naive
  // loop; the fast path must handle them via the divide and conquer.
  std::mt19937 rng(7);
  IntersectionOptions opt;
  for (int it = 0; it < 3; ++it) {
    BigInt p1 = rand_big(rng, 300) + BigInt(5);
    BigInt p2 = rand_big(rng, 280) + BigInt(3);
    DeltaVector a = slope_delta(p1, BigInt(1)), b = slope_delta(p2, BigInt(2));
    BigInt expected = slope_iota(p1, BigInt(1), p2, BigInt(2));
    CHECK(intersection_from_delta(kS04, a, b, false, opt) == expected);
  }
}

TEST_CASE("intersection is symmetric") {
  std::mt19937 rng(3);
  IntersectionOptions opt;
  for (int it = 0; it < 20; ++it) {
    BigInt p1 = rand_big(rng, 20), p2 = rand_big(rng, 20);
    DeltaVector a = slope_delta(p1, BigInt(1 + static_cast<long>(rng() % 4)));
    DeltaVector b = slope_delta(p2, BigInt(1 + static_cast<long>(rng() % 4)));
    CHECK(intersection_from_delta(kS04, a, b, false, opt) ==
          intersection_from_delta(kS04, b, a, false, opt));
  }
}

TEST_CASE("shorten_curve returns a crossing carrier and a faithful rule") {
  IntersectionOptions opt;
  BigInt big("123456789123456789");
  DeltaVector curve = slope_delta(big, BigInt(3));
  ShortenResult res = shorten_curve(kS04, curve, opt);
  CHECK(res.terminal.pair.is_crossing());
  CHECK(crossing_pairing(res.terminal) == BigInt(0));  // a curve against itself
  // The tracked rule reproduces the terminal weights from the originals.
  WeightedPair start = standard_pair_from_delta(kS04, curve, curve);
  WeightedPair replay = apply_rule(res.rule, start);
  CHECK(replay.mu == res.terminal.mu);
  CHECK(replay.nu == res.terminal.nu);
  // Terminal weights stay polynomially small: complexity O(log of input).
  std::size_t total = complexity(res.terminal.mu) + complexity(res.terminal.nu);
  CHECK(total <= 40 * (complexity(big) + 8));
  // Already-crossing diagonal: identity rule, zero rounds.
  ShortenResult flat = shorten_curve(kS04, dv(0, 2, 2), opt);
  CHECK(flat.rounds == 0);
}
