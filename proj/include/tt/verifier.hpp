#pragma once

#include <cstddef>
#include <string>
#include <tuple>
#include <vector>

namespace tt::verifier {

// boundary_stats over the {r,b,g} x {-,L,V} alphabet, reference semantics
// (3-character wraparound for colour changes).
struct BoundaryStats {
  int index4;
  std::size_t colour_changes;
  bool is_bigon;
  bool is_monochromatic;
};
BoundaryStats boundary_stats(const std::string& word);

struct EnumReport {
  std::size_t nodes_explored = 0;
  std::size_t regions_checked = 0;
  std::size_t violations = 0;
  std::size_t max_depth = 0;
  std::vector<std::string> violating_words;
};

// Explores the cut-disk substitution tree from the I/J/C/S seeds, checking
// that every reachable whole boundary is legal.
EnumReport enumerate_cut_disks();

// Checks every combination of annulus words attached to the pants templates.
EnumReport enumerate_standard_regions();

extern const std::vector<std::pair<std::string, std::string>> kSeeds;
extern const std::vector<std::string> kAnnuli;
extern const std::vector<std::vector<std::string>> kPants;

}  // namespace tt::verifier
