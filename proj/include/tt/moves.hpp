#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "tt/numerics.hpp"
#include "tt/traintrack.hpp"

namespace tt {

// Sparse integer matrix acting on branch weight vectors (rows: target
// branches, cols: source branches). Unstored entries are zero.
class SparseMatrix {
 public:
  SparseMatrix() = default;
  SparseMatrix(int rows, int cols) : rows_(rows), cols_(cols), data_(rows) {}
  static SparseMatrix identity(int n);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  std::vector<std::pair<int, BigInt>>& row(int i) { return data_[i]; }
  const std::vector<std::pair<int, BigInt>>& row(int i) const { return data_[i]; }

  // this * other (apply other first).
  SparseMatrix compose(const SparseMatrix& other) const;

  std::vector<BigInt> apply(const std::vector<BigInt>& v) const;
  std::vector<Interval> apply(const std::vector<Interval>& v) const;

  // Sum of entry complexities over the whole matrix (zeros contribute 0).
  std::size_t complexity() const;

 private:
  int rows_ = 0, cols_ = 0;
  std::vector<std::vector<std::pair<int, BigInt>>> data_;
};

// Update rule U = (sigma', tau', A, B): the target pair plus the two linear
// transports of weights. Composable; |U| = |A| + |B|.
struct UpdateRule {
  std::shared_ptr<const TrackPair> target;
  SparseMatrix A, B;

  std::size_t complexity() const { return A.complexity() + B.complexity(); }
};

UpdateRule identity_rule(std::shared_ptr<const TrackPair> pair);
UpdateRule compose(const UpdateRule& u2, const UpdateRule& u1);
WeightedPair apply_rule(const UpdateRule& u, const WeightedPair& wp);

// Interval-weighted pair (the coarse engine's currency). `scale` counts the
// accumulated truncation shift: each stored interval [p, q) stands for true
// weights in [p << scale, q << scale). Comparisons in the strict interval
// order are sound at any scale; equalities are only decidable at scale 0.
using IntervalWeighting = std::vector<Interval>;
struct IntervalPair {
  TrackPair pair;
  IntervalWeighting u;  // sigma branches
  IntervalWeighting v;  // tau branches
  long scale = 0;
};
IntervalPair apply_rule(const UpdateRule& u, const IntervalPair& t);

// Exact shared-size statistics of a clean pair.
struct SharedStats {
  long tightness = 0;
  std::size_t l1 = 0;         // sum over shared branches of c(mu)+c(nu)
  std::size_t linf = 0;       // max of the same
  std::size_t shared_size() const { return l1 + 2 * static_cast<std::size_t>(tightness) * linf; }
};
SharedStats shared_stats(const WeightedPair& wp);

// Interval versions use complexity bounds of the weight intervals.
struct IntervalStats {
  long tightness = 0;
  std::size_t l1 = 0;
  std::size_t linf = 0;        // max over shared branches of bound(u)+bound(v)
  std::size_t cert_inf = 0;    // max over shared branches of max(bound(u), bound(v))
  std::size_t eps_inf = 0;     // max over shared branches of max uncertainty
  std::size_t shared_size() const { return l1 + 2 * static_cast<std::size_t>(tightness) * linf; }
  // omega: leading determined bits; negative when uncertainty swamps.
  long certainty() const { return static_cast<long>(cert_inf) - static_cast<long>(eps_inf); }
};
IntervalStats interval_stats(const IntervalPair& t);

// A train cycle in the shared part, with its combing classification.
struct SharedCycle {
  std::vector<int> segments;  // cyclic order; oriented
  std::vector<int> vertices;  // vertices[i] follows segments[i]
  bool switch_free = false;
  bool compatible = false;    // combed with one handedness for both tracks
  bool incompatible = false;  // sigma and tau combed with opposite handedness

  bool contains(int segment) const;
};

// All embedded combed train cycles of the shared part.
std::vector<SharedCycle> find_combed_cycles(const TrackPair& pair);

enum class MoveKind { Separate, Untwist, Split };

struct MoveLog {
  MoveKind kind;
  int branch_or_cycle;  // split segment id, or first cycle segment
  long tightness_after;
  std::size_t shared_size_after;
};

struct MoveOptions {
  bool check_invariants = false;        // re-validate tightness etc. per move
  std::vector<MoveLog>* log = nullptr;  // optional trace
};

// Rotation number of a compatibly combed cycle (exact weights).
BigInt rotation_number(const WeightedPair& wp, const SharedCycle& c);

// Deletes all branches of weight zero (demoting or dissolving the touched
// vertices) and returns the pruned pair with reindexed weights.
WeightedPair prune_zero_branches(const WeightedPair& wp);

// As prune_zero_branches, but also returns the weight projection as an
// update rule onto the pruned pair. Moves prune eagerly: untwisting can
// zero out branches, and the shortening calculus needs the shared part free
// of weightless structure to make progress.
struct PruneResult {
  WeightedPair pair;
  UpdateRule rule;
  bool changed = false;
};
PruneResult prune_zero_branches_rule(const WeightedPair& wp);

// Single moves. Each returns the update rule; the resulting pair is
// rule.target with transported weights (= apply_rule(rule, input)).
UpdateRule split(const WeightedPair& wp, int shared_segment);
UpdateRule untwist(const WeightedPair& wp, const SharedCycle& c, const BigInt& r);
UpdateRule separate(const WeightedPair& wp, const SharedCycle& c);

// Move / Move_< drivers (exact engine). move_once applies the prioritized
// move at a branch of lambda; move_until_drop iterates until the shared size
// strictly decreases (at most 2B^2 iterations).
struct MoveResult {
  UpdateRule rule;
  WeightedPair pair;
};
MoveResult move_once(const WeightedPair& wp, const MoveOptions& opt = {});
MoveResult move_until_drop(const WeightedPair& wp, const MoveOptions& opt = {});

// Coarse engine: mirrors the exact moves on interval weights; returns
// nullopt when the governing comparisons are not determined or the untwist
// rotation exceeds the certainty budget.
struct CoarseResult {
  UpdateRule rule;
  IntervalPair pair;
  // The move budget ran out without an interval-size drop (wide intervals
  // can hide the exact progress of unconditional split cascades); treated
  // like an undefined move by callers.
  bool stalled = false;
};
std::optional<CoarseResult> coarse_move_once(const IntervalPair& t, const MoveOptions& opt = {});
// Applies coarse moves until the interval shared size drops or a move is
// undefined; the rule is the identity if the first move is undefined.
CoarseResult coarse_move_until_drop(const IntervalPair& t, const MoveOptions& opt = {});

}  // namespace tt
