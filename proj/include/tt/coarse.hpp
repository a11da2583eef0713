#pragma once

#include "tt/moves.hpp"

namespace tt {

// Interval lift {tau}: singleton weight intervals.
IntervalPair lift(const WeightedPair& wp);

// Certainty omega(T): determined leading bits of the shared weights.
long certainty(const IntervalPair& t);

// Coarsen every weight interval to k determined bits (shift by
// cert_inf - k). Requires k < omega(T).
IntervalPair trunc(const IntervalPair& t, long k);

struct ShortenOptions {
  bool check_invariants = false;
  std::vector<MoveLog>* log = nullptr;
  bool early_exit = false;  // skip the second half-round when possible
};

// Divide-and-conquer shortening: returns a composed update rule that either
// reduces the interval shared size by omega/E or leaves the coarse move
// undefined.
UpdateRule exp_shorten(const IntervalPair& t, const ShortenOptions& opt = {});

}  // namespace tt
