#include "tt/coarse.hpp"

#include <stdexcept>

namespace tt {

IntervalPair lift(const WeightedPair& wp) {
  IntervalPair t{wp.pair, {}, {}, 0};
  t.u.reserve(wp.mu.size());
  for (const auto& x : wp.mu) t.u.push_back(Interval::singleton(x));
  t.v.reserve(wp.nu.size());
  for (const auto& x : wp.nu) t.v.push_back(Interval::singleton(x));
  return t;
}

long certainty(const IntervalPair& t) { return interval_stats(t).certainty(); }

IntervalPair trunc(const IntervalPair& t, long k) {
  IntervalStats st = interval_stats(t);
  if (k >= st.certainty())
    throw std::invalid_argument("trunc: insufficient certainty (k >= omega)");
  const long d = static_cast<long>(st.cert_inf) - k;
  if (d <= 0) return t;
  IntervalPair out{t.pair, {}, {}, t.scale + d};
  out.u.reserve(t.u.size());
  for (const auto& i : t.u) out.u.push_back(i.shift(static_cast<unsigned long>(d)));
  out.v.reserve(t.v.size());
  for (const auto& i : t.v) out.v.push_back(i.shift(static_cast<unsigned long>(d)));
  return out;
}

namespace {

UpdateRule exp_shorten_impl(const IntervalPair& t1, const ShortenOptions& opt, int depth) {
  auto id = [&] { return identity_rule(std::make_shared<TrackPair>(t1.pair)); };
  if (t1.pair.is_crossing()) return id();
  // Recursion depth is bounded by log2(omega) + 1.
  if (depth > 64 + 2) throw std::logic_error("exp_shorten: recursion too deep");

  MoveOptions mopt;
  mopt.check_invariants = opt.check_invariants;
  mopt.log = opt.log;

  const IntervalStats st1 = interval_stats(t1);
  const long omega1 = st1.certainty();
  if (omega1 <= 1) return coarse_move_until_drop(t1, mopt).rule;

  const long k = (omega1 + 1) / 2;  // omega cdiv 2
  const UpdateRule u1 = exp_shorten_impl(trunc(t1, k), opt, depth + 1);
  const IntervalPair t2 = apply_rule(u1, t1);
  if (t2.pair.is_crossing()) return u1;
  CoarseResult r2 = coarse_move_until_drop(t2, mopt);
  UpdateRule u21 = compose(r2.rule, u1);
  if (r2.stalled) return u21;
  IntervalPair t3 = std::move(r2.pair);
  if (t3.pair.is_crossing()) return u21;

  if (opt.early_exit) {
    const long target = (omega1 + static_cast<long>(t1.pair.surface().const_E()) - 1) /
                        t1.pair.surface().const_E();
    const IntervalStats st3 = interval_stats(t3);
    if (st1.shared_size() >= st3.shared_size() &&
        static_cast<long>(st1.shared_size() - st3.shared_size()) >= target)
      return u21;
  }

  // Second half-round; the truncation level reuses omega(T1). When the
  // remaining certainty is too small for that level we truncate as deep as
  // still valid (the guiding property holds at any level).
  const long omega3 = certainty(t3);
  const long k2 = std::min(k, omega3 - 1);
  UpdateRule u3 = k2 >= 1 ? exp_shorten_impl(trunc(t3, k2), opt, depth + 1)
                          : identity_rule(std::make_shared<TrackPair>(t3.pair));
  const IntervalPair t4 = apply_rule(u3, t3);
  UpdateRule u321 = compose(u3, u21);
  if (t4.pair.is_crossing()) return u321;
  CoarseResult r4 = coarse_move_until_drop(t4, mopt);
  return compose(r4.rule, u321);
}

// Whether further coarse work on T could still lower the interval size.
bool coarse_can_progress(const IntervalPair& t) {
  if (t.pair.is_crossing()) return false;
  MoveOptions probe;
  CoarseResult r = coarse_move_until_drop(t, probe);
  if (r.stalled) return false;
  return interval_stats(r.pair).shared_size() < interval_stats(t).shared_size();
}

}  // namespace

UpdateRule exp_shorten(const IntervalPair& t, const ShortenOptions& opt) {
  UpdateRule u = exp_shorten_impl(t, opt, 0);
  if (opt.check_invariants) {
    // Progress or stuck: either the shared size dropped by omega/E, or the
    // coarse move is undefined at the end.
    IntervalStats before = interval_stats(t);
    IntervalPair after = apply_rule(u, t);
    IntervalStats sa = interval_stats(after);
    const long omega = before.certainty();
    if (omega > 0 && !after.pair.is_crossing()) {
      const long e = t.pair.surface().const_E();
      const long target = (omega + e - 1) / e;
      const bool progressed =
          before.shared_size() >= sa.shared_size() &&
          static_cast<long>(before.shared_size() - sa.shared_size()) >= target;
      if (!progressed && coarse_can_progress(after))
        throw std::logic_error("exp_shorten: neither progress nor a stuck coarse move");
      // Certainty loss bound: omega(T) - omega(U(T)) <= D * drop.
      if (before.shared_size() > sa.shared_size()) {
        long drop = static_cast<long>(before.shared_size() - sa.shared_size());
        long loss = before.certainty() - sa.certainty();
        if (loss > t.pair.surface().const_D() * drop)
          throw std::logic_error("exp_shorten: certainty fell faster than D * drop");
        if (static_cast<long>(u.complexity()) > t.pair.surface().const_C() * drop)
          throw std::logic_error("exp_shorten: |U| exceeded C * drop");
      }
    }
  }
  return u;
}

}  // namespace tt
