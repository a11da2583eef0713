#include "tt/intersection.hpp"

#include <stdexcept>

#include "tt/coarse.hpp"

namespace tt {

namespace {

MoveOptions move_options(const IntersectionOptions& opt) {
  MoveOptions m;
  m.check_invariants = opt.check_invariants;
  m.log = opt.log;
  return m;
}

}  // namespace

BigInt naive_intersection(const WeightedPair& wp, const IntersectionOptions& opt) {
  WeightedPair cur = wp;
  const MoveOptions mopt = move_options(opt);
  while (!cur.pair.is_crossing()) {
    cur = move_until_drop(cur, mopt).pair;
  }
  return crossing_pairing(cur);
}

BigInt fast_intersection(const WeightedPair& wp, const IntersectionOptions& opt) {
  WeightedPair cur = wp;
  const MoveOptions mopt = move_options(opt);
  ShortenOptions sopt;
  sopt.check_invariants = opt.check_invariants;
  sopt.log = opt.log;
  sopt.early_exit = opt.early_exit;
  const long f = wp.pair.surface().const_F();
  while (!cur.pair.is_crossing()) {
    const std::size_t size1 = shared_stats(cur).shared_size();
    if (size1 <= opt.naive_cutover) return naive_intersection(cur, opt);
    UpdateRule u = exp_shorten(lift(cur), sopt);
    WeightedPair next = apply_rule(u, cur);
    if (!next.pair.is_crossing()) next = move_until_drop(next, mopt).pair;
    if (opt.check_invariants && !next.pair.is_crossing()) {
      const std::size_t size3 = shared_stats(next).shared_size();
      const std::size_t target = (size1 + f - 1) / f;
      if (size3 + target > size1)
        throw std::logic_error("fast_intersection: round fell short of the 1 - 1/F factor");
    }
    cur = std::move(next);
  }
  return crossing_pairing(cur);
}

BigInt intersection_from_delta(const Surface& s, const DeltaVector& a, const DeltaVector& b,
                               bool naive, const IntersectionOptions& opt) {
  WeightedPair wp = standard_pair_from_delta(s, a, b);
  return naive ? naive_intersection(wp, opt) : fast_intersection(wp, opt);
}

ShortenResult shorten_curve(const Surface& s, const DeltaVector& dv,
                            const IntersectionOptions& opt) {
  WeightedPair cur = standard_pair_from_delta(s, dv, dv);
  const MoveOptions mopt = move_options(opt);
  ShortenOptions sopt;
  sopt.check_invariants = opt.check_invariants;
  sopt.log = opt.log;
  sopt.early_exit = opt.early_exit;
  UpdateRule total = identity_rule(std::make_shared<TrackPair>(cur.pair));
  std::size_t rounds = 0;
  while (!cur.pair.is_crossing()) {
    ++rounds;
    if (shared_stats(cur).shared_size() <= opt.naive_cutover) {
      MoveResult r = move_until_drop(cur, mopt);
      total = compose(r.rule, total);
      cur = std::move(r.pair);
      continue;
    }
    UpdateRule u = exp_shorten(lift(cur), sopt);
    total = compose(u, total);
    cur = apply_rule(u, cur);
    if (!cur.pair.is_crossing()) {
      MoveResult r = move_until_drop(cur, mopt);
      total = compose(r.rule, total);
      cur = std::move(r.pair);
    }
  }
  return {std::move(cur), std::move(total), rounds};
}

}  // namespace tt
