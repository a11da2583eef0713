#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "tt/legality.hpp"
#include "tt/verifier.hpp"

using namespace tt;

TEST_CASE("boundary word parsing and stats") {
  auto w = BoundaryWord::parse("gVgV");
  CHECK(index4(w) == 0);
  CHECK(is_bigon(w));
  CHECK(colour_changes(w) == 0);
  CHECK_THROWS(BoundaryWord::parse("rx"));
  CHECK_THROWS(BoundaryWord::parse("r-g"));
}

TEST_CASE("reference boundary stats match the frozen examples") {
  auto s = verifier::boundary_stats("gVgV");
  CHECK(s.index4 == 0);
  CHECK(s.colour_changes == 0);
  CHECK(s.is_bigon);
  CHECK(s.is_monochromatic);

  auto s2 = verifier::boundary_stats("r-g-b-g-");
  CHECK(s2.colour_changes == 2);  // one direct, one wrapped

  auto s3 = verifier::boundary_stats("rLb-g-bL");
  CHECK(s3.index4 == 4 - 0 - 2);
}

TEST_CASE("legality on known regions") {
  CHECK_FALSE(is_legal(BoundaryWord::parse("rVrV")));  // monochromatic cusped bigon
  CHECK_FALSE(is_legal(BoundaryWord::parse("rVbV")));  // curve bigon: removable, illegal
  CHECK(is_legal(BoundaryWord::parse("r-g-b-gVgV")));  // bigon, one change on a smooth side
  CHECK(is_legal(BoundaryWord::parse("rVgVgVgVgV")));  // index < 0
  CHECK_FALSE(is_legal(BoundaryWord::parse("r-")));    // smooth monochromatic circle
  CHECK(is_legal(BoundaryWord::parse("r-g-b-g-r-g-b-g-")));  // 4 changes, index 4
}

TEST_CASE("index4 with Euler characteristic correction") {
  auto w = BoundaryWord::parse("r-");
  CHECK(index4(w, 1) == 4);
  CHECK(index4(w, 0) == 0);  // annulus side
}

TEST_CASE("general and reference counts agree on single-g-separated words") {
  // Valid words here = the enumeration grammar: coloured letters separated by
  // single g's on smooth runs, no smooth r-b adjacency, no g-g adjacency.
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> len_d(1, 9), pick(0, 5);
  for (int it = 0; it < 10000; ++it) {
    std::string word;
    int n = len_d(rng);
    char prev_colour = 0;
    bool prev_smooth = false;
    for (int i = 0; i < n; ++i) {
      char colour = "rbg"[pick(rng) % 3];
      if (prev_smooth && colour != 'g' && prev_colour != 'g' && colour != prev_colour)
        colour = 'g';
      if (prev_smooth && colour == 'g' && prev_colour == 'g') colour = pick(rng) % 2 ? 'r' : 'b';
      char trans = "-LV"[pick(rng) % 3];
      word += colour;
      word += trans;
      prev_colour = colour;
      prev_smooth = trans == '-';
    }
    // Repair the wrap seam the same way.
    char first_colour = word[0];
    char last_colour = word[word.size() - 2];
    char last_trans = word.back();
    if (last_trans == '-' &&
        ((first_colour != 'g' && last_colour != 'g' && first_colour != last_colour) ||
         (first_colour == 'g' && last_colour == 'g')))
      word.back() = 'V';
    auto w = BoundaryWord::parse(word);
    auto ref = verifier::boundary_stats(word);
    CHECK(index4(w) == ref.index4);
    CHECK(colour_changes(w) == ref.colour_changes);
    CHECK(is_bigon(w) == ref.is_bigon);
    CHECK(is_legal(w) == wordref::is_legal(word));
  }
}

TEST_CASE("cut disk enumeration reports zero violations") {
  auto report = verifier::enumerate_cut_disks();
  CHECK(verifier::kSeeds.size() == 4);
  CHECK(report.violations == 0);
  CHECK(report.regions_checked > 0);
  MESSAGE("cut disks: ", report.nodes_explored, " nodes, ", report.regions_checked,
          " regions, max depth ", report.max_depth);
}

TEST_CASE("standard region enumeration reports zero violations") {
  auto report = verifier::enumerate_standard_regions();
  CHECK(verifier::kAnnuli.size() == 5);
  std::size_t expected = 0;
  for (const auto& pants : verifier::kPants) {
    std::size_t combos = 1;
    for (std::size_t i = 0; i < pants.size(); ++i) combos *= verifier::kAnnuli.size();
    expected += combos;
  }
  CHECK(report.regions_checked == expected);
  CHECK(report.regions_checked == 200);
  CHECK(report.violations == 0);
}
