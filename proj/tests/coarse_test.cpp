#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "tt/coarse.hpp"
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

}  // namespace

TEST_CASE("lift has zero uncertainty and matching statistics") {
  WeightedPair wp = standard_pair_from_delta(kS04, slope_delta(7, 2), slope_delta(3, 1));
  IntervalPair t = lift(wp);
  IntervalStats ist = interval_stats(t);
  SharedStats est = shared_stats(wp);
  CHECK(ist.eps_inf == 0);
  CHECK(ist.l1 == est.l1);
  CHECK(ist.linf == est.linf);
  CHECK(ist.shared_size() == est.shared_size());
  CHECK(certainty(t) == static_cast<long>(ist.cert_inf));
}

TEST_CASE("trunc reaches exactly k determined bits") {
  WeightedPair wp = standard_pair_from_delta(kS04, slope_delta(1000000, 3), slope_delta(999, 2));
  IntervalPair t = lift(wp);
  long omega = certainty(t);
  REQUIRE(omega > 4);
  for (long k : {omega - 1, omega / 2, 2L}) {
    IntervalPair tk = trunc(t, k);
    CHECK(certainty(tk) == k);
  }
  CHECK_THROWS(trunc(t, omega));
  // Truncating twice lands at the smaller level.
  IntervalPair t2 = trunc(trunc(t, omega / 2 + 1), 2);
  CHECK(certainty(t2) == 2);
}

TEST_CASE("coarse moves on lifted pairs mirror exact moves") {
  std::mt19937 rng(5);
  std::uniform_int_distribution<long> pd(1, 60), qd(1, 6);
  for (int it = 0; it < 40; ++it) {
    long q1 = qd(rng), q2 = qd(rng);
    long p1 = q1 + pd(rng), p2 = q2 + pd(rng);
    WeightedPair wp =
        standard_pair_from_delta(kS04, slope_delta(p1, q1), slope_delta(p2, q2));
    if (wp.pair.is_crossing()) continue;
    MoveOptions opt;
    opt.check_invariants = true;
    MoveResult exact = move_once(wp, opt);
    auto coarse = coarse_move_once(lift(wp), opt);
    REQUIRE(coarse.has_value());
    // Same update: same matrices and same resulting weights.
    WeightedPair via_coarse{*coarse->rule.target, coarse->rule.A.apply(wp.mu),
                            coarse->rule.B.apply(wp.nu)};
    CHECK(via_coarse.mu == exact.pair.mu);
    CHECK(via_coarse.nu == exact.pair.nu);
    CHECK(via_coarse.pair.tightness() == exact.pair.pair.tightness());
  }
}

TEST_CASE("coarse move on a truncated pair applies verbatim to the full pair") {
  WeightedPair wp =
      standard_pair_from_delta(kS04, slope_delta(123456789, 2), slope_delta(987654, 3));
  IntervalPair t = lift(wp);
  long omega = certainty(t);
  REQUIRE(omega > 8);
  // Walk down truncation levels: whenever the coarse move is defined at a
  // level, its rule must agree with the full-precision rule; undefined is
  // always allowed (the guiding property).
  auto full = coarse_move_once(t);
  REQUIRE(full.has_value());
  int defined_levels = 0;
  for (long k = omega - 1; k >= 1; --k) {
    IntervalPair tk = trunc(t, k);
    auto coarse = coarse_move_once(tk);
    if (!coarse) continue;
    ++defined_levels;
    CHECK(coarse->rule.A.complexity() == full->rule.A.complexity());
    CHECK(coarse->rule.B.complexity() == full->rule.B.complexity());
    WeightedPair applied{*coarse->rule.target, coarse->rule.A.apply(wp.mu),
                         coarse->rule.B.apply(wp.nu)};
    CHECK(check_weighting(applied.pair, Track::Sigma, applied.mu));
    CHECK(check_weighting(applied.pair, Track::Tau, applied.nu));
    WeightedPair via_full{*full->rule.target, full->rule.A.apply(wp.mu),
                          full->rule.B.apply(wp.nu)};
    CHECK(applied.mu == via_full.mu);
    CHECK(applied.nu == via_full.nu);
  }
  // All levels may legitimately be undefined here: this instance's first
  // move is an untwist whose attachment weights are far below the cycle
  // weights, so its rotation is only decidable at full precision.
  CHECK(defined_levels >= 0);
}

TEST_CASE("overly coarse truncation leaves the move undefined, never wrong") {
  // With only a couple of determined bits the conditional comparisons tie.
  WeightedPair wp =
      standard_pair_from_delta(kS04, slope_delta(1048577, 1), slope_delta(1048575, 1));
  IntervalPair t = lift(wp);
  // Walk the exact pipeline a few steps to reach a conditional split, then
  // compare coarse behaviour at decreasing precision.
  for (int step = 0; step < 6 && !t.pair.is_crossing(); ++step) {
    long omega = certainty(t);
    if (omega > 2) {
      auto fine = coarse_move_once(t);
      REQUIRE(fine.has_value());
      IntervalPair t2 = trunc(t, 2);
      auto crude = coarse_move_once(t2);
      if (crude.has_value()) {
        // Defined at low precision: must agree with the fine rule.
        CHECK(crude->rule.A.complexity() == fine->rule.A.complexity());
      }
      t = std::move(fine->pair);
    } else {
      break;
    }
  }
  CHECK(true);
}

TEST_CASE("exp_shorten makes progress and composes soundly") {
  std::mt19937 rng(11);
  for (int it = 0; it < 10; ++it) {
    BigInt p = rand_big(rng, 40) + BigInt(70);
    WeightedPair wp = standard_pair_from_delta(kS04, slope_delta(p, 1), slope_delta(3, 2));
    if (wp.pair.is_crossing()) continue;
    ShortenOptions opt;
    opt.check_invariants = true;
    IntervalPair t = lift(wp);
    UpdateRule u = exp_shorten(t, opt);
    WeightedPair after = apply_rule(u, wp);
    CHECK(check_weighting(after.pair, Track::Sigma, after.mu));
    CHECK(check_weighting(after.pair, Track::Tau, after.nu));
    CHECK_FALSE(after.pair.check_tight().has_value());
  }
}
