#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "tt/mcg.hpp"

using namespace tt;

namespace {

const Surface kS04(0, 4);

DeltaMatrix mat(std::vector<std::vector<long>> rows) {
  DeltaMatrix m;
  for (auto& r : rows) {
    std::vector<BigInt> row;
    for (long x : r) row.push_back(BigInt(x));
    m.push_back(std::move(row));
  }
  return m;
}

// Independent oracle for S04 words: the slope action of Ta, Tb as 2x2
// matrices, with entries read off by the slope intersection form.
struct Slope2 {
  BigInt p, q;
};
Slope2 apply_word(const Word& w, Slope2 v) {
  for (std::size_t i = w.size(); i-- > 0;) {  // rightmost acts first
    const WordToken& t = w[i];
    if (t.gen == "Ta")
      v.p += BigInt(2) * t.exponent * v.q;
    else
      v.q -= BigInt(2) * t.exponent * v.p;
  }
  return v;
}
DeltaMatrix slope_word_matrix(const Word& w) {
  const Slope2 curves[3] = {{BigInt(1), BigInt(0)}, {BigInt(0), BigInt(1)},
                            {BigInt(2), BigInt(1)}};
  DeltaMatrix m(3, std::vector<BigInt>(3, BigInt(0)));
  for (int j = 0; j < 3; ++j) {
    Slope2 v = apply_word(w, curves[j]);
    for (int i = 0; i < 3; ++i) {
      const Slope2& d = curves[i];
      m[i][j] = BigInt(2) * (d.p * v.q - v.p * d.q).abs();
    }
  }
  return m;
}

}  // namespace

TEST_CASE("word parsing round-trips") {
  Word w = parse_word("Ta Tb^-1 Tc^123456");
  REQUIRE(w.size() == 3);
  CHECK(w[0].gen == "Ta");
  CHECK(w[0].exponent == BigInt(1));
  CHECK(w[1].exponent == BigInt(-1));
  CHECK(w[2].exponent == BigInt(123456));
  CHECK(word_str(w) == "Ta Tb^-1 Tc^123456");
}

TEST_CASE("zeckendorf expansions") {
  CHECK(zeckendorf(BigInt(1)) == std::vector<int>{2});
  CHECK(zeckendorf(BigInt(100)) == std::vector<int>{11, 6, 4});  // 89 + 8 + 3
  std::mt19937 rng(9);
  for (int it = 0; it < 200; ++it) {
    BigInt p(1 + static_cast<long>(rng() % 1000000));
    auto zs = zeckendorf(p);
    BigInt sum(0);
    for (std::size_t i = 0; i < zs.size(); ++i) {
      sum += fibonacci(zs[i]);
      if (i) CHECK(zs[i - 1] >= zs[i] + 2);  // non-consecutive
    }
    CHECK(sum == p);
  }
}

TEST_CASE("elementary_product equals the sequential product") {
  CHECK(int_matrix_equal(elementary_product(3, {}), identity_int_matrix(3)));
  IntMatrix e12 = identity_int_matrix(2);
  e12[0][1] = BigInt(1);
  IntMatrix sq = elementary_product(2, {e12, e12});
  CHECK(sq[0][1] == BigInt(2));
  CHECK(sq[0][0] == BigInt(1));

  std::mt19937 rng(13);
  for (int it = 0; it < 30; ++it) {
    std::vector<IntMatrix> ms;
    IntMatrix seq = identity_int_matrix(3);
    int n = 1 + static_cast<int>(rng() % 40);
    for (int i = 0; i < n; ++i) {
      int a = static_cast<int>(rng() % 3), b = static_cast<int>(rng() % 3);
      if (a == b) b = (b + 1) % 3;
      IntMatrix e = identity_int_matrix(3);
      e[a][b] = BigInt(static_cast<long>(rng() % 5) - 2);
      seq = matmul(seq, e);
      ms.push_back(std::move(e));
    }
    CHECK(int_matrix_equal(elementary_product(3, ms), seq));
  }
}

TEST_CASE("elementary_power expands to short generator words") {
  IntMatrix e = identity_int_matrix(3);
  e[0][1] = BigInt(1);
  CHECK(elementary_power(3, e, BigInt(0)).empty());
  auto one = elementary_power(3, e, BigInt(1));
  REQUIRE(one.size() == 1);
  CHECK(int_matrix_equal(one[0], e));
  CHECK_THROWS(elementary_power(2, identity_int_matrix(2), BigInt(3)));

  std::mt19937 rng(17);
  for (int it = 0; it < 60; ++it) {
    int d = 3 + static_cast<int>(rng() % 2);
    int a = static_cast<int>(rng() % d), b = static_cast<int>(rng() % d);
    if (a == b) b = (b + 1) % d;
    IntMatrix gen = identity_int_matrix(d);
    gen[a][b] = BigInt(rng() % 2 ? 1 : -1);
    BigInt p(0);
    int bits = 1 + static_cast<int>(rng() % 40);
    for (int i = 0; i < bits; ++i) {
      p = p.mul2exp(1);
      if (rng() & 1) p += BigInt(1);
    }
    if (p.is_zero()) p = BigInt(1);
    if (rng() & 1) p = -p;
    auto seq = elementary_power(d, gen, p);
    CHECK(seq.size() <= 27 * complexity(p));
    IntMatrix prod = elementary_product(d, seq);
    IntMatrix expect = identity_int_matrix(d);
    expect[a][b] = gen[a][b] * p;
    CHECK(int_matrix_equal(prod, expect));
    for (const auto& m : seq) {
      // Every factor is elementary: exactly one off-diagonal entry.
      int off = 0;
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
          if (i != j && !m[i][j].is_zero()) ++off;
      CHECK(off <= 1);
    }
  }
}

TEST_CASE("dcoord base cases and golden powers") {
  CHECK(matrix_equal(dcoord(kS04, {}), delta_identity(kS04)));
  CHECK(matrix_equal(dcoord(kS04, parse_word("Ta")),
                     twist_power_delta(kS04, "Ta", BigInt(1))));
  // Two twists compose to the k = 2 table.
  CHECK(matrix_equal(dcoord(kS04, parse_word("Ta Ta")),
                     mat({{0, 2, 2}, {2, 8, 12}, {2, 4, 8}})));
}

TEST_CASE("dcoord agrees with the slope-action oracle on random words") {
  std::mt19937 rng(23);
  for (int it = 0; it < 12; ++it) {
    Word w;
    int n = 1 + static_cast<int>(rng() % 5);
    for (int i = 0; i < n; ++i) {
      WordToken t;
      t.gen = rng() % 2 ? "Ta" : "Tb";
      t.exponent = BigInt(static_cast<long>(rng() % 5) - 2);
      if (t.exponent.is_zero()) t.exponent = BigInt(1);
      w.push_back(std::move(t));
    }
    CHECK(matrix_equal(dcoord(kS04, w), slope_word_matrix(w)));
  }
}

TEST_CASE("word problem decisions") {
  IntersectionOptions opt;
  CHECK(is_identity(kS04, {}));
  CHECK_FALSE(is_identity(kS04, parse_word("Ta")));
  CHECK_FALSE(is_identity(kS04, parse_word("Tb^3")));
  CHECK(is_identity(kS04, parse_word("Ta Ta^-1")));
  CHECK(is_identity(kS04, parse_word("Ta Tb Tb^-1 Ta^-1")));
  CHECK(is_identity(kS04, parse_word("Tb^-2 Ta Ta^-1 Tb^2")));
  CHECK(exponent_is_identity(kS04, parse_word("Ta^100000 Ta^-100000")));
  CHECK_FALSE(exponent_is_identity(kS04, parse_word("Ta^1000000")));
}
