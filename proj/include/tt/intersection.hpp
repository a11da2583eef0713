#pragma once

#include "tt/coordinates.hpp"
#include "tt/moves.hpp"

namespace tt {

struct IntersectionOptions {
  bool check_invariants = false;
  std::vector<MoveLog>* log = nullptr;
  // Below this shared size the fast path reverts to the naive loop.
  std::size_t naive_cutover = 256;
  // Skip the second half of a shortening round once the first half already
  // met the progress target (off by default).
  bool early_exit = false;
};

// Quadratic oracle: applies move_until_drop until the pair is crossing,
// then evaluates the pairing.
BigInt naive_intersection(const WeightedPair& wp, const IntersectionOptions& opt = {});

// Quasi-linear route: interval shortening rounds + exact cleanup.
BigInt fast_intersection(const WeightedPair& wp, const IntersectionOptions& opt = {});

// Builds the standard tight pair for the two multicurves and intersects.
BigInt intersection_from_delta(const Surface& s, const DeltaVector& a, const DeltaVector& b,
                               bool naive = false, const IntersectionOptions& opt = {});

// Runs the fast pipeline on the diagonal pair, returning the terminal
// crossing pair and the full composed update rule.
struct ShortenResult {
  WeightedPair terminal;
  UpdateRule rule;
  std::size_t rounds = 0;
};
ShortenResult shorten_curve(const Surface& s, const DeltaVector& dv,
                            const IntersectionOptions& opt = {});

}  // namespace tt
