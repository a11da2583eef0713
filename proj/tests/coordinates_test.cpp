#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <sstream>

#include "tt/coordinates.hpp"
#include "tt/intersection.hpp"

using namespace tt;

namespace {

const Surface kS04(0, 4);

DeltaVector dv(long a, long b, long c) { return DeltaVector{{BigInt(a), BigInt(b), BigInt(c)}}; }

DeltaMatrix mat(std::vector<std::vector<long>> rows) {
  DeltaMatrix m;
  for (auto& r : rows) {
    std::vector<BigInt> row;
    for (long x : r) row.push_back(BigInt(x));
    m.push_back(std::move(row));
  }
  return m;
}

}  // namespace

TEST_CASE("S04 identity matrix matches the published table") {
  CHECK(matrix_equal(delta_identity(kS04), mat({{0, 2, 2}, {2, 0, 4}, {2, 4, 0}})));
}

TEST_CASE("S04 twist matrices match the published tables") {
  for (long k : {1L, 2L, 5L}) {
    DeltaMatrix ta = twist_power_delta(kS04, "Ta", BigInt(k));
    CHECK(matrix_equal(
        ta, mat({{0, 2, 2}, {2, 4 * k, 4 * k + 4}, {2, 4 * k - 4, 4 * k}})));
    DeltaMatrix tb = twist_power_delta(kS04, "Tb", BigInt(k));
    CHECK(matrix_equal(
        tb, mat({{4 * k, 2, 8 * k - 2}, {2, 0, 4}, {8 * k + 2, 4, 16 * k}})));
  }
  CHECK(matrix_equal(twist_power_delta(kS04, "Ta", BigInt(0)), delta_identity(kS04)));
}

TEST_CASE("transpose law for negative twist powers") {
  for (long k : {1L, 3L, 7L}) {
    CHECK(matrix_equal(twist_power_delta(kS04, "Ta", BigInt(-k)),
                       matrix_transpose(twist_power_delta(kS04, "Ta", BigInt(k)))));
    CHECK(matrix_equal(twist_power_delta(kS04, "Tb", BigInt(-k)),
                       matrix_transpose(twist_power_delta(kS04, "Tb", BigInt(k)))));
  }
}

TEST_CASE("validate_delta on S04") {
  CHECK(validate_delta(kS04, dv(0, 2, 2)));
  CHECK(validate_delta(kS04, dv(2, 0, 4)));
  CHECK(validate_delta(kS04, dv(2, 4, 0)));
  CHECK(validate_delta(kS04, dv(0, 0, 0)));
  CHECK_FALSE(validate_delta(kS04, dv(0, 0, 0), /*allow_empty=*/false));
  CHECK_FALSE(validate_delta(kS04, dv(1, 0, 0)));  // odd cuff parity
  CHECK(validate_delta(kS04, dv(2, 2, 2)));        // the (1,1) diagonal curve
  CHECK_FALSE(validate_delta(kS04, dv(2, 2, 8)));  // no slope fits
  CHECK_FALSE(validate_delta(kS04, dv(0, 2, 4)));
}

TEST_CASE("delta_to_mst conventions") {
  auto mst_a = delta_to_mst(kS04, dv(0, 2, 2));
  CHECK(mst_a[0].m == BigInt(0));
  CHECK(mst_a[0].s == BigInt(1));

  auto mst_b = delta_to_mst(kS04, dv(2, 0, 4));
  CHECK(mst_b[0].m == BigInt(2));
  CHECK(mst_b[0].t == BigInt(0));

  auto mst_g = delta_to_mst(kS04, dv(2, 4, 0));  // T_alpha(beta)
  CHECK(mst_g[0].m == BigInt(2));
  CHECK(mst_g[0].t == BigInt(1));
}

TEST_CASE("standard pairs are tight, clean and realizable") {
  std::vector<DeltaVector> curves = {dv(0, 2, 2), dv(2, 0, 4), dv(2, 4, 0),
                                     dv(4, 4, 4),  // 2 copies of the (1,1) curve
                                     dv(2, 12, 8), dv(0, 0, 0), dv(6, 2, 14)};
  for (const auto& a : curves)
    for (const auto& b : curves) {
      WeightedPair wp = standard_pair_from_delta(kS04, a, b);
      CHECK_FALSE(wp.pair.check_tight().has_value());
      CHECK(wp.pair.is_clean());
      CHECK(check_weighting(wp.pair, Track::Sigma, wp.mu));
      CHECK(check_weighting(wp.pair, Track::Tau, wp.nu));
    }
}

TEST_CASE("naive intersection reproduces the published values") {
  IntersectionOptions opt;
  opt.check_invariants = true;
  // iota(alpha, beta) = 2 via a crossing pair.
  CHECK(naive_intersection(standard_pair_from_delta(kS04, dv(0, 2, 2), dv(2, 0, 4)), opt) ==
        BigInt(2));
  // iota(beta, gamma) = 4.
  CHECK(naive_intersection(standard_pair_from_delta(kS04, dv(2, 0, 4), dv(2, 4, 0)), opt) ==
        BigInt(4));
  // Self-intersections vanish.
  CHECK(naive_intersection(standard_pair_from_delta(kS04, dv(2, 0, 4), dv(2, 0, 4)), opt) ==
        BigInt(0));
  // iota(beta, T_alpha^3 beta) = 12 (the k = 3 column of the twist table).
  CHECK(naive_intersection(standard_pair_from_delta(kS04, dv(2, 0, 4), dv(2, 12, 8)), opt) ==
        BigInt(12));
}

TEST_CASE("naive intersection agrees with the slope oracle on random slopes") {
  const auto& sys = system_for(kS04);
  std::mt19937 rng(42);
  std::uniform_int_distribution<long> pd(-30, 30), qd(0, 12);
  IntersectionOptions opt;
  opt.check_invariants = true;
  int done = 0;
  while (done < 60) {
    long p1 = pd(rng), q1 = qd(rng), p2 = pd(rng), q2 = qd(rng);
    if (q1 == 0) p1 = std::abs(p1) % 5;
    if (q2 == 0) p2 = std::abs(p2) % 5;
    DeltaVector a{{BigInt(2 * q1), BigInt(2 * std::abs(p1)), BigInt(2 * std::abs(p1 - 2 * q1))}};
    DeltaVector b{{BigInt(2 * q2), BigInt(2 * std::abs(p2)), BigInt(2 * std::abs(p2 - 2 * q2))}};
    auto oracle = sys.intersection_oracle(a, b);
    REQUIRE(oracle.has_value());
    BigInt got = naive_intersection(standard_pair_from_delta(kS04, a, b), opt);
    CHECK(got == *oracle);
    if (got != *oracle) {
      MESSAGE("slopes (", p1, ",", q1, ") vs (", p2, ",", q2, ")");
      break;
    }
    ++done;
  }
}

TEST_CASE("curve file parsing") {
  std::istringstream in("surface 0 4\n0 2 2\n2 0 4\n");
  CurveFile f = parse_curve_file(in);
  CHECK(f.surface == kS04);
  REQUIRE(f.curves.size() == 2);
  CHECK(f.curves[0] == dv(0, 2, 2));
  std::istringstream bad("surface 0 4\n1 2\n");
  CHECK_THROWS(parse_curve_file(bad));
}
