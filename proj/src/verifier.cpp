#include "tt/verifier.hpp"

#include <algorithm>
#include <functional>

#include "tt/legality.hpp"

namespace tt::verifier {

using namespace tt::wordref;

const std::vector<std::pair<std::string, std::string>> kSeeds = {
    {"rLb-g-bL", "rLb-g-bL"},  // I
    {"rLb-g-", "rVg-bL"},      // J
    {"rVgV", "r-g-"},          // C
    {"rVg-", "rVg-"},          // S
};

const std::vector<std::string> kAnnuli = {"gV", "g-b-g-r-", "g-r-g-b-", "g-bLr-", "g-rLb-"};

const std::vector<std::vector<std::string>> kPants = {
    {"", "", ""},
    {"gVrV"},
    {"g-r-g-b-", ""},
    {"gVgV"},
    {"gV", ""},
    {"gVrV"},
    {"gVbV"},
    {"g-b-g-r-g-r-g-b-"},
};

BoundaryStats boundary_stats(const std::string& word) {
  // Validates via the strict parser, then reports the reference counts.
  (void)BoundaryWord::parse(word);
  return {index4(word), num_colour_changes(word), is_bigon(word), is_monochromatic(word)};
}

namespace {

// Substituting into the first g: each rule is inserted before it.
std::vector<std::string> substitutes(const std::string& boundary) {
  static const std::vector<std::string> rules = {"g-rLb-", "g-bLr-", "gV", "g-r-", "g-b-"};
  std::vector<std::string> out;
  const std::size_t i = boundary.find('g');
  if (i == std::string::npos) return out;
  for (const auto& rule : rules) {
    std::string next = boundary.substr(0, i) + rule + boundary.substr(i);
    if (next.find("r-g-r") == std::string::npos && next.find("b-g-b") == std::string::npos)
      out.push_back(std::move(next));
  }
  return out;
}

std::string chop(const std::string& s) {
  return s.size() <= 4 ? std::string() : s.substr(2, s.size() - 4);
}

void tree(const std::string& left, const std::string& right, std::size_t depth,
          EnumReport& report) {
  ++report.nodes_explored;
  report.max_depth = std::max(report.max_depth, depth);
  const std::string whole = chop(left) + chop(right);
  if (!is_legal(left) || is_monochromatic_bigon(whole)) {
    for (const auto& next : substitutes(left)) tree(next, right, depth + 1, report);
  } else if (!is_legal(right) || is_monochromatic_bigon(whole)) {
    for (const auto& next : substitutes(right)) tree(left, next, depth + 1, report);
  } else {
    ++report.regions_checked;
    if (!is_legal(whole)) {
      ++report.violations;
      if (report.violating_words.size() < 16) report.violating_words.push_back(whole);
    }
  }
}

}  // namespace

EnumReport enumerate_cut_disks() {
  EnumReport report;
  for (const auto& [left, right] : kSeeds) tree(left, right, 0, report);
  return report;
}

EnumReport enumerate_standard_regions() {
  EnumReport report;
  for (const auto& pants : kPants) {
    // Cartesian product of annulus words over the pants slots.
    std::vector<std::size_t> choice(pants.size(), 0);
    while (true) {
      std::string boundary;
      for (std::size_t i = 0; i < pants.size(); ++i) boundary += pants[i] + kAnnuli[choice[i]];
      ++report.regions_checked;
      if (!is_legal(boundary)) {
        ++report.violations;
        if (report.violating_words.size() < 16) report.violating_words.push_back(boundary);
      }
      std::size_t d = 0;
      while (d < choice.size() && ++choice[d] == kAnnuli.size()) choice[d++] = 0;
      if (d == choice.size()) break;
    }
    ++report.nodes_explored;
  }
  return report;
}

}  // namespace tt::verifier
