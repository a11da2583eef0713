#include "tt/moves.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace tt {

// --- sparse matrices -------------------------------------------------------

SparseMatrix SparseMatrix::identity(int n) {
  SparseMatrix m(n, n);
  for (int i = 0; i < n; ++i) m.data_[i].push_back({i, BigInt(1)});
  return m;
}

SparseMatrix SparseMatrix::compose(const SparseMatrix& other) const {
  if (cols_ != other.rows_) throw std::invalid_argument("matrix shape mismatch in compose");
  SparseMatrix out(rows_, other.cols_);
  for (int i = 0; i < rows_; ++i) {
    std::map<int, BigInt> acc;
    for (const auto& [k, c] : data_[i])
      for (const auto& [j, d] : other.data_[k]) {
        auto it = acc.find(j);
        if (it == acc.end())
          acc.emplace(j, c * d);
        else
          it->second += c * d;
      }
    for (auto& [j, val] : acc)
      if (!val.is_zero()) out.data_[i].push_back({j, std::move(val)});
  }
  return out;
}

std::vector<BigInt> SparseMatrix::apply(const std::vector<BigInt>& v) const {
  if (static_cast<int>(v.size()) != cols_)
    throw std::invalid_argument("matrix/vector shape mismatch");
  std::vector<BigInt> out(rows_, BigInt(0));
  for (int i = 0; i < rows_; ++i)
    for (const auto& [j, c] : data_[i]) out[i] += c * v[j];
  return out;
}

std::vector<Interval> SparseMatrix::apply(const std::vector<Interval>& v) const {
  if (static_cast<int>(v.size()) != cols_)
    throw std::invalid_argument("matrix/vector shape mismatch");
  std::vector<Interval> out;
  out.reserve(rows_);
  for (int i = 0; i < rows_; ++i) {
    Interval acc = Interval::singleton(0);
    for (const auto& [j, c] : data_[i]) acc = acc + scale(c, v[j]);
    out.push_back(acc);
  }
  return out;
}

std::size_t SparseMatrix::complexity() const {
  std::size_t total = 0;
  for (const auto& row : data_)
    for (const auto& [j, c] : row) total += tt::complexity(c);
  return total;
}

UpdateRule identity_rule(std::shared_ptr<const TrackPair> pair) {
  UpdateRule u;
  u.A = SparseMatrix::identity(pair->branch_count(Track::Sigma));
  u.B = SparseMatrix::identity(pair->branch_count(Track::Tau));
  u.target = std::move(pair);
  return u;
}

UpdateRule compose(const UpdateRule& u2, const UpdateRule& u1) {
  UpdateRule out;
  out.target = u2.target;
  out.A = u2.A.compose(u1.A);
  out.B = u2.B.compose(u1.B);
  return out;
}

WeightedPair apply_rule(const UpdateRule& u, const WeightedPair& wp) {
  return WeightedPair{*u.target, u.A.apply(wp.mu), u.B.apply(wp.nu)};
}

IntervalPair apply_rule(const UpdateRule& u, const IntervalPair& t) {
  return IntervalPair{*u.target, u.A.apply(t.u), u.B.apply(t.v), t.scale};
}

// --- statistics ------------------------------------------------------------

SharedStats shared_stats(const WeightedPair& wp) {
  if (wp.pair.has_isolated_shared()) throw std::invalid_argument("shared_stats: pair not clean");
  SharedStats st;
  st.tightness = wp.pair.tightness();
  for (int e : wp.pair.shared_segments()) {
    std::size_t size = complexity(wp.mu[wp.pair.branch_of(e, Track::Sigma)]) +
                       complexity(wp.nu[wp.pair.branch_of(e, Track::Tau)]);
    st.l1 += size;
    st.linf = std::max(st.linf, size);
  }
  return st;
}

IntervalStats interval_stats(const IntervalPair& t) {
  IntervalStats st;
  st.tightness = t.pair.tightness();
  for (int e : t.pair.shared_segments()) {
    const Interval& iu = t.u[t.pair.branch_of(e, Track::Sigma)];
    const Interval& iv = t.v[t.pair.branch_of(e, Track::Tau)];
    std::size_t bu = iu.complexity_bound(), bv = iv.complexity_bound();
    st.l1 += bu + bv;
    st.linf = std::max(st.linf, bu + bv);
    st.cert_inf = std::max(st.cert_inf, std::max(bu, bv));
    st.eps_inf = std::max(st.eps_inf, std::max(iu.uncertainty(), iv.uncertainty()));
  }
  return st;
}

// --- combed cycles -----------------------------------------------------------

bool SharedCycle::contains(int segment) const {
  return std::find(segments.begin(), segments.end(), segment) != segments.end();
}

namespace {

struct CombPattern {
  bool sigma_left;
  bool tau_left;
};

std::optional<SharedCycle> trace_cycle(const TrackPair& pair, int seg0, int dir0,
                                       CombPattern pat) {
  SharedCycle cycle;
  std::set<int> used;
  int seg = seg0, dir = dir0;
  while (true) {
    if (used.count(seg)) return std::nullopt;
    used.insert(seg);
    cycle.segments.push_back(seg);
    const Segment& s = pair.segments()[seg];
    if (s.is_free_loop()) {
      if (cycle.segments.size() != 1) return std::nullopt;
      cycle.switch_free = true;
      cycle.incompatible = true;  // separates into two disjoint cycles
      cycle.compatible = true;    // vacuously combed
      return cycle;
    }
    const SegmentEnd& end = s.ends[dir];
    const Vertex& v = pair.vertices()[end.vertex];
    cycle.vertices.push_back(end.vertex);
    if (v.kind != VertexKind::SigmaSwitch && v.kind != VertexKind::TauSwitch &&
        v.kind != VertexKind::SharedSwitch)
      return std::nullopt;
    int out_slot;
    if (end.slot == kSlotLarge) {
      int exit_slot;
      if (v.kind == VertexKind::SharedSwitch) {
        if (pat.sigma_left != pat.tau_left) return std::nullopt;
        exit_slot = pat.sigma_left ? kSlotLeft : kSlotRight;
      } else {
        int shared_slot =
            pair.segments()[v.germ[kSlotLeft]].colour == Colour::Shared ? kSlotLeft : kSlotRight;
        bool want_left =
            v.kind == VertexKind::SigmaSwitch ? pat.sigma_left : pat.tau_left;
        if ((shared_slot == kSlotLeft) != want_left) return std::nullopt;
        exit_slot = shared_slot;
      }
      if (pair.segments()[v.germ[exit_slot]].colour != Colour::Shared) return std::nullopt;
      out_slot = exit_slot;
    } else {
      out_slot = kSlotLarge;
    }
    int out_seg = v.germ[out_slot];
    int out_end = pair.end_at(out_seg, end.vertex, out_slot);
    seg = out_seg;
    dir = 1 - out_end;
    if (seg == seg0 && dir == dir0) {
      cycle.compatible = pat.sigma_left == pat.tau_left;
      cycle.incompatible = pat.sigma_left != pat.tau_left;
      return cycle;
    }
  }
}

std::string cycle_key(const SharedCycle& c) {
  std::vector<int> segs = c.segments;
  std::sort(segs.begin(), segs.end());
  std::ostringstream os;
  for (int s : segs) os << s << ',';
  return os.str();
}

}  // namespace

std::vector<SharedCycle> find_combed_cycles(const TrackPair& pair) {
  std::vector<SharedCycle> cycles;
  std::map<std::string, std::size_t> seen;
  const CombPattern patterns[] = {{true, true}, {false, false}, {true, false}, {false, true}};
  for (const CombPattern& pat : patterns) {
    for (int seg : pair.shared_segments()) {
      for (int dir = 0; dir < 2; ++dir) {
        auto c = trace_cycle(pair, seg, dir, pat);
        if (!c) continue;
        auto key = cycle_key(*c);
        auto it = seen.find(key);
        if (it == seen.end()) {
          seen.emplace(key, cycles.size());
          cycles.push_back(std::move(*c));
        } else {
          cycles[it->second].compatible |= c->compatible;
          cycles[it->second].incompatible |= c->incompatible;
        }
        if (pair.segments()[seg].is_free_loop()) break;
      }
    }
  }
  return cycles;
}

// --- cycle flow (untwisting support) ------------------------------------------

namespace {

struct CycleFlow {
  std::vector<int> on_cycle;                 // branch ids contained in c
  std::vector<std::pair<int, int>> hanging;  // (branch id, +1 entry / -1 exit)
};

struct CycleVertexSlots {
  int in_slot, out_slot, hang_slot;
};

CycleVertexSlots cycle_vertex_slots(const TrackPair& pair, const SharedCycle& c, std::size_t i) {
  const Vertex& v = pair.vertices()[c.vertices[i]];
  int in_seg = c.segments[i];
  int out_seg = c.segments[(i + 1) % c.segments.size()];
  int in_slot = -1, out_slot = -1;
  for (int k = 0; k < 3; ++k)
    if (v.germ[k] == in_seg && in_slot < 0) in_slot = k;
  for (int k = 0; k < 3; ++k)
    if (v.germ[k] == out_seg && k != in_slot && out_slot < 0) out_slot = k;
  if (in_slot < 0 || out_slot < 0) throw std::logic_error("cycle does not fit its vertex");
  return {in_slot, out_slot, 3 - in_slot - out_slot};
}

CycleFlow cycle_flow(const TrackPair& pair, const SharedCycle& c, Track t) {
  CycleFlow flow;
  std::set<int> on;
  for (int seg : c.segments) on.insert(pair.branch_of(seg, t));
  flow.on_cycle.assign(on.begin(), on.end());
  for (std::size_t i = 0; i < c.vertices.size(); ++i) {
    const Vertex& v = pair.vertices()[c.vertices[i]];
    bool track_branches = v.kind == VertexKind::SharedSwitch ||
                          (v.kind == VertexKind::SigmaSwitch && t == Track::Sigma) ||
                          (v.kind == VertexKind::TauSwitch && t == Track::Tau);
    if (!track_branches) continue;
    auto slots = cycle_vertex_slots(pair, c, i);
    bool entry = slots.out_slot == kSlotLarge;
    flow.hanging.push_back({pair.branch_of(v.germ[slots.hang_slot], t), entry ? 1 : -1});
  }
  return flow;
}

const BigInt& min_big(const BigInt& a, const BigInt& b) { return a < b ? a : b; }

}  // namespace

BigInt rotation_number(const WeightedPair& wp, const SharedCycle& c) {
  if (!c.compatible) throw std::invalid_argument("rotation_number: cycle not compatibly combed");
  auto side = [&](Track t, const Weighting& w) -> std::optional<BigInt> {
    CycleFlow flow = cycle_flow(wp.pair, c, t);
    BigInt s(0), in(0), out(0);
    for (const auto& [b, dir] : flow.hanging) {
      s += w[b];
      (dir > 0 ? in : out) += w[b];
    }
    if (s.is_zero()) return std::nullopt;
    if (in != out) throw std::logic_error("rotation_number: unbalanced cycle flow");
    BigInt mn = w[flow.on_cycle.front()];
    for (int b : flow.on_cycle) mn = min_big(mn, w[b]);
    return fdiv(BigInt(2) * mn, s);
  };
  auto p = side(Track::Sigma, wp.mu);
  auto q = side(Track::Tau, wp.nu);
  // No weighted attachments on either side: both tracks just carry closed
  // components around the cycle, and there is nothing to unwind.
  if (!p && !q) return BigInt(0);
  if (!p) return *q;
  if (!q) return *p;
  return min_big(*p, *q);
}

// --- surgery helper ------------------------------------------------------------

namespace {

constexpr int kUnknownRegion = -1;

class Surgery {
 public:
  explicit Surgery(const TrackPair& src) : out_(src) {
    mark_sigma_.resize(src.segments().size(), -1);
    mark_tau_.resize(src.segments().size(), -1);
    for (std::size_t i = 0; i < src.segments().size(); ++i) {
      mark_sigma_[i] = src.segments()[i].sigma_branch;
      mark_tau_[i] = src.segments()[i].tau_branch;
    }
    n_old_sigma_ = src.branch_count(Track::Sigma);
    n_old_tau_ = src.branch_count(Track::Tau);
  }

  TrackPair& pair() { return out_; }

  int new_segment(Colour colour) {
    int id = out_.add_segment(colour, kUnknownRegion, kUnknownRegion);
    mark_sigma_.resize(out_.segments().size(), -1);
    mark_tau_.resize(out_.segments().size(), -1);
    return id;
  }

  // Combine provenance marks of `from` into `into` (used when two old
  // segments end up in one new segment or branch).
  void combine_marks(int into, int from) {
    for (auto* marks : {&mark_sigma_, &mark_tau_}) {
      int m = (*marks)[from];
      int& tgt = (*marks)[into];
      if (tgt < 0)
        tgt = m;
      else if (m >= 0)
        tgt = std::min(tgt, m);
    }
  }

  void set_formula(Track t, int segment, std::vector<std::pair<int, BigInt>> row) {
    formulas_[{t, segment}] = std::move(row);
  }

  void allow_merge(Track t) { (t == Track::Sigma ? merge_sigma_ : merge_tau_) = true; }

  void region_merge(int ra, int rb) {
    ra = find(ra);
    rb = find(rb);
    if (ra == rb) {
      out_.regions()[ra].chi -= 1;
      return;
    }
    int chi = out_.regions()[ra].chi + out_.regions()[rb].chi - 1;
    out_.merge_regions(ra, rb, chi);
    parent_[rb] = ra;
  }

  int find(int r) {
    while (parent_.count(r)) r = parent_[r];
    return r;
  }

  // Unify sides across a smooth junction: walking segment a toward end ta
  // continues as walking segment b away from end tb's opposite... i.e. the
  // side data of (a facing ta) must match (b facing tb).
  void unify_sides(int a, int ta, int b, int tb) {
    for (bool left : {true, false}) {
      int ra = out_.side_region(a, ta, left);
      int rb = out_.side_region(b, tb, left);
      if (ra == rb) continue;
      if (ra == kUnknownRegion)
        out_.set_side_region(a, ta, left, rb);
      else if (rb == kUnknownRegion)
        out_.set_side_region(b, tb, left, ra);
      else
        region_merge(ra, rb);
    }
  }

  void settle_regions() {
    bool changed = true;
    while (changed) {
      changed = false;
      for (std::size_t vi = 0; vi < out_.vertices().size(); ++vi) {
        const Vertex& v = out_.vertices()[vi];
        if (!v.alive) continue;
        const int count = germ_count(v.kind);
        for (int j = 0; j < count; ++j) {
          int in_seg = v.germ[j];
          int in_end = out_.end_at(in_seg, static_cast<int>(vi), j);
          int out_slot = (j + count - 1) % count;
          int out_seg = v.germ[out_slot];
          int out_end = out_.end_at(out_seg, static_cast<int>(vi), out_slot);
          int r1 = canon_side(in_seg, in_end, true);
          int r2 = canon_side(out_seg, 1 - out_end, true);
          if (r1 == r2) continue;
          changed = true;
          if (r1 == kUnknownRegion)
            out_.set_side_region(in_seg, in_end, true, r2);
          else if (r2 == kUnknownRegion)
            out_.set_side_region(out_seg, 1 - out_end, true, r1);
          else
            region_merge(r1, r2);
        }
      }
    }
    for (auto& w : out_.face_walks()) {
      bool unknown = false;
      for (const WalkStep& st : w.steps)
        if (out_.side_region(st.segment, st.toward_end, true) == kUnknownRegion) unknown = true;
      if (!unknown) continue;
      int fresh = out_.add_region(1, 0);
      for (const WalkStep& st : w.steps)
        out_.set_side_region(st.segment, st.toward_end, true, fresh);
    }
  }

  UpdateRule finalize() {
    settle_regions();
    out_.recompute_branches();
    UpdateRule rule;
    rule.A = assemble(Track::Sigma);
    rule.B = assemble(Track::Tau);
    rule.target = std::make_shared<TrackPair>(out_);
    return rule;
  }

 private:
  int canon_side(int seg, int toward, bool left) {
    int r = out_.side_region(seg, toward, left);
    if (r == kUnknownRegion) return r;
    int root = find(r);
    if (root != r) out_.set_side_region(seg, toward, left, root);
    return root;
  }

  SparseMatrix assemble(Track t) {
    const auto& marks = t == Track::Sigma ? mark_sigma_ : mark_tau_;
    const int n_old = t == Track::Sigma ? n_old_sigma_ : n_old_tau_;
    const int n_new = out_.branch_count(t);
    SparseMatrix m(n_new, n_old);
    std::vector<int> source(n_new, -2);  // -2 unseen, -1 formula, >=0 old id
    std::vector<std::vector<std::pair<int, BigInt>>> rows(n_new);
    const bool merging = t == Track::Sigma ? merge_sigma_ : merge_tau_;
    for (std::size_t si = 0; si < out_.segments().size(); ++si) {
      const Segment& s = out_.segments()[si];
      if (!s.alive || !in_track(s.colour, t)) continue;
      int nb = out_.branch_of(static_cast<int>(si), t);
      auto fit = formulas_.find({t, static_cast<int>(si)});
      if (fit != formulas_.end()) {
        if (source[nb] >= 0 && !merging)
          throw std::logic_error("surgery: formula on a surviving branch");
        source[nb] = -1;
        rows[nb] = fit->second;
        continue;
      }
      if (source[nb] == -1) continue;  // formula wins
      int mark = marks[si];
      if (mark < 0) continue;
      if (source[nb] == -2)
        source[nb] = mark;
      else if (source[nb] != mark) {
        if (!merging) throw std::logic_error("surgery: conflicting provenance");
        source[nb] = std::min(source[nb], mark);
      }
    }
    for (int b = 0; b < n_new; ++b) {
      if (source[b] == -2) throw std::logic_error("surgery: branch with no provenance");
      if (source[b] >= 0)
        m.row(b).push_back({source[b], BigInt(1)});
      else
        m.row(b) = rows[b];
    }
    return m;
  }

  TrackPair out_;
  std::vector<int> mark_sigma_, mark_tau_;
  int n_old_sigma_ = 0, n_old_tau_ = 0;
  bool merge_sigma_ = false, merge_tau_ = false;
  std::map<std::pair<Track, int>, std::vector<std::pair<int, BigInt>>> formulas_;
  std::map<int, int> parent_;
};

}  // namespace

// --- splitting -------------------------------------------------------------------

namespace {

struct SplitPlan {
  bool tt = false, dd = false, uu = false, bb = false;
  Colour tt_col = Colour::Red, dd_col = Colour::Red, uu_col = Colour::Red, bb_col = Colour::Red;
  int sigma_sign = 2, tau_sign = 2;  // 2 = not conditional
};

void plan_track(SplitPlan& plan, Track t, bool nw, bool sw, bool ne, bool se, int sign) {
  auto add = [&](bool& flag, Colour& col) {
    Colour mine = t == Track::Sigma ? Colour::Red : Colour::Blue;
    col = flag ? Colour::Shared : mine;
    flag = true;
  };
  const bool west_branch = nw && sw, east_branch = ne && se;
  if (west_branch && east_branch) {
    (t == Track::Sigma ? plan.sigma_sign : plan.tau_sign) = sign;
    add(plan.tt, plan.tt_col);
    add(plan.bb, plan.bb_col);
    if (sign > 0) add(plan.dd, plan.dd_col);
    if (sign < 0) add(plan.uu, plan.uu_col);
  } else if (west_branch) {
    if (ne) {
      add(plan.tt, plan.tt_col);
      add(plan.uu, plan.uu_col);
    } else {
      add(plan.dd, plan.dd_col);
      add(plan.bb, plan.bb_col);
    }
  } else if (east_branch) {
    if (nw) {
      add(plan.tt, plan.tt_col);
      add(plan.dd, plan.dd_col);
    } else {
      add(plan.uu, plan.uu_col);
      add(plan.bb, plan.bb_col);
    }
  } else {
    if (nw && ne) add(plan.tt, plan.tt_col);
    if (nw && se) add(plan.dd, plan.dd_col);
    if (sw && ne) add(plan.uu, plan.uu_col);
    if (sw && se) add(plan.bb, plan.bb_col);
  }
}

VertexKind junction_kind(Colour large, Colour path1, Colour path2) {
  const bool sigma_branches = has_sigma(path1) && has_sigma(path2);
  const bool tau_branches = has_tau(path1) && has_tau(path2);
  if (sigma_branches && tau_branches) return VertexKind::SharedSwitch;
  if (sigma_branches) return has_tau(large) ? VertexKind::SigmaSwitch : VertexKind::RedSwitch;
  if (tau_branches) return has_sigma(large) ? VertexKind::TauSwitch : VertexKind::BlueSwitch;
  return VertexKind::Divergence;
}

struct SplitDecision {
  std::optional<int> sigma_sign;
  std::optional<int> tau_sign;
};

// Attachment spec for one end of a path.
struct PathEnd {
  enum Kind { Junction, Cross, Fuse } kind;
  int vertex = -1, slot = -1;  // Junction / Cross
  int port_seg = -1, port_end = -1;  // Fuse
};

UpdateRule build_split(const TrackPair& src, int e, const SplitDecision& dec) {
  const Segment& es = src.segments()[e];
  if (es.colour != Colour::Shared || es.is_free_loop() || es.ends[0].slot != kSlotLarge ||
      es.ends[1].slot != kSlotLarge)
    throw std::invalid_argument("split: branch is not splittable");
  const int v0 = es.ends[0].vertex, v1 = es.ends[1].vertex;

  Surgery sg(src);
  TrackPair& P = sg.pair();

  struct Port {
    int seg, end;
    bool used = false;  // becomes part of a junction (stays) vs fuses
  };
  auto mk_port = [&](int v, int slot) -> Port {
    int seg = P.segment_at(v, slot);
    return {seg, P.end_at(seg, v, slot), false};
  };
  // North = the side of e's region_left (walking end0 -> end1): at v0 that
  // is the right small, at v1 the left small.
  Port NW = mk_port(v0, kSlotRight), SW = mk_port(v0, kSlotLeft);
  Port NE = mk_port(v1, kSlotLeft), SE = mk_port(v1, kSlotRight);

  auto present = [&](const Port& p, Track t) {
    return in_track(P.segments()[p.seg].colour, t);
  };

  SplitPlan plan;
  for (Track t : {Track::Sigma, Track::Tau}) {
    bool nw = present(NW, t), sw = present(SW, t), ne = present(NE, t), se = present(SE, t);
    int sign = 0;
    if (nw && sw && ne && se) {
      const auto& d = t == Track::Sigma ? dec.sigma_sign : dec.tau_sign;
      if (!d) throw std::logic_error("split: conditional split without a comparison");
      sign = *d;
    }
    plan_track(plan, t, nw, sw, ne, se, sign);
  }
  const bool crossing = plan.dd && plan.uu;

  // Old branch ids of the ports for weight formulas.
  const int bNW_s = src.branch_of(NW.seg, Track::Sigma), bNE_s = src.branch_of(NE.seg, Track::Sigma);
  const int bNW_t = src.branch_of(NW.seg, Track::Tau), bNE_t = src.branch_of(NE.seg, Track::Tau);

  // Dissolve the old structure.
  for (Port* p : {&NW, &SW, &NE, &SE}) P.detach(p->seg, p->end);
  P.kill_vertex(v0);
  P.kill_vertex(v1);
  P.kill_segment(e);

  // Junction vertices where a port feeds two paths.
  // Port -> its paths (west ports feed; east ports collect).
  auto paths_of = [&](bool north, bool west) {
    std::vector<char> r;
    if (north && west) {
      if (plan.tt) r.push_back('t');
      if (plan.dd) r.push_back('d');
    } else if (!north && west) {
      if (plan.uu) r.push_back('u');
      if (plan.bb) r.push_back('b');
    } else if (north && !west) {
      if (plan.tt) r.push_back('t');
      if (plan.uu) r.push_back('u');
    } else {
      if (plan.bb) r.push_back('b');
      if (plan.dd) r.push_back('d');
    }
    return r;
  };

  // Path colour lookup.
  auto col_of = [&](char p) {
    switch (p) {
      case 't':
        return plan.tt_col;
      case 'd':
        return plan.dd_col;
      case 'u':
        return plan.uu_col;
      default:
        return plan.bb_col;
    }
  };

  // PathEnd for path p at a port corner; creates junction vertices lazily.
  // Junction slot convention (diverging from the large into the smalls):
  //   NW: left = tt, right = dd        NE: left = uu, right = tt
  //   SW: left = uu, right = bb        SE: left = bb, right = dd
  std::map<int, int> junction_at;  // port seg*2+end -> vertex
  auto end_for = [&](char p, bool west) -> PathEnd {
    Port* port;
    bool north = p == 't' || (p == 'd' && west) || (p == 'u' && !west);
    port = west ? (north ? &NW : &SW) : (north ? &NE : &SE);
    auto paths = paths_of(north, west);
    if (paths.size() == 2) {
      int key = port->seg * 2 + port->end;
      auto it = junction_at.find(key);
      int j;
      if (it == junction_at.end()) {
        j = P.add_vertex(junction_kind(P.segments()[port->seg].colour, col_of(paths[0]),
                                       col_of(paths[1])));
        P.attach(port->seg, port->end, j, kSlotLarge);
        junction_at.emplace(key, j);
        port->used = true;
      } else {
        j = it->second;
      }
      // Which small is this path?
      int slot;
      if (west && north) slot = p == 't' ? kSlotLeft : kSlotRight;
      else if (west && !north) slot = p == 'u' ? kSlotLeft : kSlotRight;
      else if (!west && north) slot = p == 'u' ? kSlotLeft : kSlotRight;
      else slot = p == 'b' ? kSlotLeft : kSlotRight;
      return {PathEnd::Junction, j, slot, -1, -1};
    }
    return {PathEnd::Fuse, -1, -1, port->seg, port->end};
  };

  // Crossing vertex when both diagonals run.
  int xver = -1;
  int slot_dd_w = -1, slot_dd_e = -1, slot_uu_w = -1, slot_uu_e = -1;
  if (crossing) {
    xver = P.add_vertex(VertexKind::Crossing);
    const bool dd_red = plan.dd_col == Colour::Red;
    slot_dd_w = dd_red ? 0 : 3;
    slot_dd_e = dd_red ? 2 : 1;
    slot_uu_w = dd_red ? 1 : 0;
    slot_uu_e = dd_red ? 3 : 2;
  }

  // Build the final segment for a path piece between two ends.
  // Returns the final segment id (for formula registration).
  auto build_piece = [&](Colour col, PathEnd w, PathEnd ee) -> int {
    auto attach_end = [&](int seg, int se_, const PathEnd& pe) {
      P.attach(seg, se_, pe.vertex, pe.slot);
    };
    if (w.kind == PathEnd::Fuse && ee.kind == PathEnd::Fuse) {
      if (w.port_seg == ee.port_seg) {
        // Closes into a free loop.
        int s = w.port_seg;
        // Sides facing the two dissolved ends must agree.
        sg.unify_sides(s, w.port_end, s, 1 - ee.port_end);
        P.detach(s, 0);
        P.detach(s, 1);
        return s;
      }
      int a = w.port_seg, b = ee.port_seg;
      sg.unify_sides(a, w.port_end, b, 1 - ee.port_end);
      SegmentEnd far = P.segments()[b].ends[1 - ee.port_end];
      P.detach(b, 0);
      P.detach(b, 1);
      P.segments()[b].alive = false;
      sg.combine_marks(a, b);
      if (far.attached())
        P.attach(a, w.port_end, far.vertex, far.slot);
      else
        P.detach(a, w.port_end);
      return a;
    }
    if (w.kind == PathEnd::Fuse) {
      int a = w.port_seg;
      attach_end(a, w.port_end, ee);
      return a;
    }
    if (ee.kind == PathEnd::Fuse) {
      int a = ee.port_seg;
      attach_end(a, ee.port_end, w);
      return a;
    }
    int s = sg.new_segment(col);
    attach_end(s, 0, w);
    attach_end(s, 1, ee);
    return s;
  };

  int seg_tt = -1, seg_bb = -1, seg_dd = -1, seg_uu = -1;
  if (plan.tt) seg_tt = build_piece(plan.tt_col, end_for('t', true), end_for('t', false));
  if (plan.bb) seg_bb = build_piece(plan.bb_col, end_for('b', true), end_for('b', false));
  if (plan.dd) {
    if (crossing) {
      seg_dd = build_piece(plan.dd_col, end_for('d', true),
                           {PathEnd::Cross, xver, slot_dd_w, -1, -1});
      build_piece(plan.dd_col, {PathEnd::Cross, xver, slot_dd_e, -1, -1}, end_for('d', false));
    } else {
      seg_dd = build_piece(plan.dd_col, end_for('d', true), end_for('d', false));
    }
  }
  if (plan.uu) {
    if (crossing) {
      seg_uu = build_piece(plan.uu_col, end_for('u', true),
                           {PathEnd::Cross, xver, slot_uu_w, -1, -1});
      build_piece(plan.uu_col, {PathEnd::Cross, xver, slot_uu_e, -1, -1}, end_for('u', false));
    } else {
      seg_uu = build_piece(plan.uu_col, end_for('u', true), end_for('u', false));
    }
  }
  (void)seg_tt;
  (void)seg_bb;

  // Weight formulas for the conditional diagonals; zero-sign tracks merge.
  if (plan.sigma_sign != 2) {
    if (plan.sigma_sign == 0) sg.allow_merge(Track::Sigma);
    if (plan.sigma_sign > 0)
      sg.set_formula(Track::Sigma, seg_dd, {{bNW_s, BigInt(1)}, {bNE_s, BigInt(-1)}});
    if (plan.sigma_sign < 0)
      sg.set_formula(Track::Sigma, seg_uu, {{bNE_s, BigInt(1)}, {bNW_s, BigInt(-1)}});
  }
  if (plan.tau_sign != 2) {
    if (plan.tau_sign == 0) sg.allow_merge(Track::Tau);
    if (plan.tau_sign > 0)
      sg.set_formula(Track::Tau, seg_dd, {{bNW_t, BigInt(1)}, {bNE_t, BigInt(-1)}});
    if (plan.tau_sign < 0)
      sg.set_formula(Track::Tau, seg_uu, {{bNE_t, BigInt(1)}, {bNW_t, BigInt(-1)}});
  }

  return sg.finalize();
}

}  // namespace

UpdateRule split(const WeightedPair& wp, int shared_segment) {
  const TrackPair& P = wp.pair;
  const Segment& es = P.segments()[shared_segment];
  if (es.colour != Colour::Shared || es.is_free_loop() || es.ends[0].slot != kSlotLarge ||
      es.ends[1].slot != kSlotLarge)
    throw std::invalid_argument("split: branch not splittable");
  SplitDecision dec;
  const int v0 = es.ends[0].vertex, v1 = es.ends[1].vertex;
  for (Track t : {Track::Sigma, Track::Tau}) {
    auto have = [&](int v, int slot) {
      return in_track(P.segments()[P.segment_at(v, slot)].colour, t);
    };
    if (have(v0, kSlotLeft) && have(v0, kSlotRight) && have(v1, kSlotLeft) &&
        have(v1, kSlotRight)) {
      const Weighting& w = t == Track::Sigma ? wp.mu : wp.nu;
      const BigInt& wt = w[P.branch_of(P.segment_at(v0, kSlotRight), t)];
      const BigInt& et = w[P.branch_of(P.segment_at(v1, kSlotLeft), t)];
      int sign = cmp(wt, et);
      (t == Track::Sigma ? dec.sigma_sign : dec.tau_sign) = sign > 0 ? 1 : sign < 0 ? -1 : 0;
    }
  }
  return build_split(P, shared_segment, dec);
}

// --- untwisting --------------------------------------------------------------

namespace {

UpdateRule build_untwist(const TrackPair& src, const SharedCycle& c, const BigInt& r) {
  UpdateRule rule;
  rule.target = std::make_shared<TrackPair>(src);
  auto matrix = [&](Track t) {
    CycleFlow flow = cycle_flow(src, c, t);
    SparseMatrix m = SparseMatrix::identity(src.branch_count(t));
    for (int a : flow.on_cycle) {
      std::map<int, BigInt> acc;
      for (const auto& [y, dir] : flow.hanging)
        if (dir > 0) {
          auto it = acc.find(y);
          if (it == acc.end())
            acc.emplace(y, -r);
          else
            it->second += -r;
        }
      for (auto& [y, coeff] : acc)
        if (!coeff.is_zero()) m.row(a).push_back({y, std::move(coeff)});
    }
    return m;
  };
  rule.A = matrix(Track::Sigma);
  rule.B = matrix(Track::Tau);
  return rule;
}

}  // namespace

UpdateRule untwist(const WeightedPair& wp, const SharedCycle& c, const BigInt& r) {
  if (r.sign() < 0) throw std::invalid_argument("untwist: negative rotation");
  if (!r.is_zero() && r > rotation_number(wp, c))
    throw std::invalid_argument("untwist: rotation exceeds the rotation number");
  return build_untwist(wp.pair, c, r);
}

// --- separating ---------------------------------------------------------------

namespace {

UpdateRule build_separate(const TrackPair& src, const SharedCycle& c) {
  Surgery sg(src);
  TrackPair& P = sg.pair();
  const std::size_t n = c.segments.size();

  if (c.switch_free) {
    int e = c.segments[0];
    const Segment& s = P.segments()[e];
    int red = sg.new_segment(Colour::Red);
    int blue = sg.new_segment(Colour::Blue);
    int corridor = P.add_region(0, 0);
    P.segments()[red].region_left = s.region_left;
    P.segments()[red].region_right = corridor;
    P.segments()[blue].region_left = corridor;
    P.segments()[blue].region_right = s.region_right;
    sg.set_formula(Track::Sigma, red, {{src.branch_of(e, Track::Sigma), BigInt(1)}});
    sg.set_formula(Track::Tau, blue, {{src.branch_of(e, Track::Tau), BigInt(1)}});
    P.kill_segment(e);
    return sg.finalize();
  }

  // Determine sigma's combing hand from a constrained vertex (default left).
  bool sigma_left = true;
  for (std::size_t i = 0; i < n; ++i) {
    const Vertex& v = src.vertices()[c.vertices[i]];
    auto slots = cycle_vertex_slots(src, c, i);
    if (slots.in_slot != kSlotLarge) continue;  // only large-entries constrain
    bool exit_left = slots.out_slot == kSlotLeft;
    if (v.kind == VertexKind::SigmaSwitch) {
      sigma_left = exit_left;
      break;
    }
    if (v.kind == VertexKind::TauSwitch) {
      sigma_left = !exit_left;
      break;
    }
  }

  // Per-vertex data.
  struct VertexPlan {
    VertexKind kind;
    bool entry;      // cycle passes small -> large
    bool hang_left;  // hanging germ on the left of travel
    int hang_seg, hang_end;
    bool cut;  // a strand crosses the corridor here
  };
  std::vector<VertexPlan> vp(n);
  int total_cuts = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const Vertex& v = src.vertices()[c.vertices[i]];
    auto slots = cycle_vertex_slots(src, c, i);
    VertexPlan& p = vp[i];
    p.kind = v.kind;
    p.entry = slots.out_slot == kSlotLarge;
    p.hang_left = slots.in_slot == kSlotLarge ? slots.hang_slot == kSlotLeft
                                              : slots.hang_slot != kSlotLeft;
    p.hang_seg = v.germ[slots.hang_slot];
    p.hang_end = src.end_at(p.hang_seg, c.vertices[i], slots.hang_slot);
    if (v.kind == VertexKind::SigmaSwitch)
      p.cut = p.hang_left != sigma_left;
    else if (v.kind == VertexKind::TauSwitch)
      p.cut = p.hang_left == sigma_left;
    else if (v.kind == VertexKind::SharedSwitch)
      p.cut = true;
    else
      throw std::logic_error("separate: unexpected vertex kind on cycle");
    total_cuts += p.cut ? 1 : 0;
  }

  // Events per copy, in travel order. Each event owns a vertex with in/out
  // germ slots for the copy.
  struct Event {
    int vertex;
    int in_slot, out_slot;
    std::size_t at;  // original vertex index
  };
  std::vector<Event> red_events, blue_events;

  // Helpers for slot layouts.
  auto switch_slots = [&](bool entry, bool hang_left) {
    // Returns (in_slot, out_slot, hang_slot) of a copy switch.
    int hang = entry ? (hang_left ? kSlotRight : kSlotLeft)
                     : (hang_left ? kSlotLeft : kSlotRight);
    int in, out;
    if (entry) {
      out = kSlotLarge;
      in = 3 - out - hang;
    } else {
      in = kSlotLarge;
      out = 3 - in - hang;
    }
    return std::array<int, 3>{in, out, hang};
  };
  auto cross_slots = [&](bool copy_red, bool from_left) {
    // Returns (copy_in, copy_out, strand_in, strand_out).
    if (copy_red) return std::array<int, 4>{0, 2, from_left ? 3 : 1, from_left ? 1 : 3};
    return std::array<int, 4>{1, 3, from_left ? 0 : 2, from_left ? 2 : 0};
  };

  for (std::size_t i = 0; i < n; ++i) {
    const VertexPlan& p = vp[i];
    if (p.kind == VertexKind::SigmaSwitch || p.kind == VertexKind::TauSwitch) {
      const bool is_red = p.kind == VertexKind::SigmaSwitch;
      auto ss = switch_slots(p.entry, p.hang_left);
      int sw = P.add_vertex(is_red ? VertexKind::RedSwitch : VertexKind::BlueSwitch);
      if (!p.cut) {
        // Hanger attaches directly to its copy's switch.
        P.attach(p.hang_seg, p.hang_end, sw, ss[2]);
        (is_red ? red_events : blue_events).push_back({sw, ss[0], ss[1], i});
      } else {
        // Hanger crosses the other copy, then a stub reaches the switch.
        int stub = sg.new_segment(is_red ? Colour::Red : Colour::Blue);
        int x = P.add_vertex(VertexKind::Crossing);
        auto cs = cross_slots(!is_red, p.hang_left);
        P.attach(p.hang_seg, p.hang_end, x, cs[2]);
        P.attach(stub, 0, x, cs[3]);
        P.attach(stub, 1, sw, ss[2]);
        (is_red ? red_events : blue_events).push_back({sw, ss[0], ss[1], i});
        (is_red ? blue_events : red_events).push_back({x, cs[0], cs[1], i});
      }
    } else {
      // Shared switch: fork into both copies; far stub crosses the near copy.
      const bool red_near = p.hang_left == sigma_left;
      int fork = P.add_vertex(VertexKind::Divergence);
      int red_stub = sg.new_segment(Colour::Red);
      int blue_stub = sg.new_segment(Colour::Blue);
      int near_stub = red_near ? red_stub : blue_stub;
      int far_stub = red_near ? blue_stub : red_stub;
      P.attach(p.hang_seg, p.hang_end, fork, kSlotLarge);
      int near_slot = (p.hang_left == p.entry) ? kSlotLeft : kSlotRight;
      P.attach(near_stub, 0, fork, near_slot);
      P.attach(far_stub, 0, fork, near_slot == kSlotLeft ? kSlotRight : kSlotLeft);

      // Near copy: crossing then switch (entry) or switch then crossing.
      int x = P.add_vertex(VertexKind::Crossing);
      auto cs = cross_slots(red_near, p.hang_left);
      int far_stub2 = sg.new_segment(red_near ? Colour::Blue : Colour::Red);
      P.attach(far_stub, 1, x, cs[2]);
      P.attach(far_stub2, 0, x, cs[3]);

      auto nss = switch_slots(p.entry, p.hang_left);
      int nsw = P.add_vertex(red_near ? VertexKind::RedSwitch : VertexKind::BlueSwitch);
      P.attach(near_stub, 1, nsw, nss[2]);

      auto fss = switch_slots(p.entry, p.hang_left);
      int fsw = P.add_vertex(red_near ? VertexKind::BlueSwitch : VertexKind::RedSwitch);
      P.attach(far_stub2, 1, fsw, fss[2]);

      auto& near_events = red_near ? red_events : blue_events;
      auto& far_events = red_near ? blue_events : red_events;
      if (p.entry) {
        near_events.push_back({x, cs[0], cs[1], i});
        near_events.push_back({nsw, nss[0], nss[1], i});
      } else {
        near_events.push_back({nsw, nss[0], nss[1], i});
        near_events.push_back({x, cs[0], cs[1], i});
      }
      far_events.push_back({fsw, fss[0], fss[1], i});
    }
  }

  // Outer side regions of the copies along each arc.
  auto arc_side = [&](std::size_t i, bool left_of_travel) {
    int seg = c.segments[i];
    auto slots = cycle_vertex_slots(src, c, i);
    int toward = src.end_at(seg, c.vertices[i], slots.in_slot);
    return src.side_region(seg, toward, left_of_travel);
  };

  int corridor_annulus = total_cuts == 0 ? P.add_region(0, 0) : kUnknownRegion;

  // Chain each copy's events into segments.
  auto build_copy = [&](bool red, std::vector<Event>& ev) {
    Colour col = red ? Colour::Red : Colour::Blue;
    Track trk = red ? Track::Sigma : Track::Tau;
    const bool outer_left = red ? sigma_left : !sigma_left;
    if (ev.empty()) {
      int loop = sg.new_segment(col);
      sg.set_formula(trk, loop, {{src.branch_of(c.segments[0], trk), BigInt(1)}});
      int outer = arc_side(0, outer_left);
      P.segments()[loop].region_left = outer_left ? outer : corridor_annulus;
      P.segments()[loop].region_right = outer_left ? corridor_annulus : outer;
      return;
    }
    for (std::size_t k = 0; k < ev.size(); ++k) {
      const Event& a = ev[k];
      const Event& b = ev[(k + 1) % ev.size()];
      int seg = sg.new_segment(col);
      // The arc following event a starts at original arc index a.at + 1 (the
      // next cycle segment), whose branch gives the provenance.
      std::size_t arc = (a.at + 1) % n;
      sg.set_formula(trk, seg, {{src.branch_of(c.segments[arc], trk), BigInt(1)}});
      P.attach(seg, 0, a.vertex, a.out_slot);
      P.attach(seg, 1, b.vertex, b.in_slot);
      int outer = arc_side(arc, outer_left);
      if (outer_left) {
        P.segments()[seg].region_left = outer;
        P.segments()[seg].region_right = corridor_annulus;
      } else {
        P.segments()[seg].region_left = corridor_annulus;
        P.segments()[seg].region_right = outer;
      }
    }
  };
  build_copy(true, red_events);
  build_copy(false, blue_events);

  for (std::size_t i = 0; i < n; ++i) P.kill_vertex(c.vertices[i]);
  for (int seg : c.segments) P.kill_segment(seg);

  return sg.finalize();
}

}  // namespace

UpdateRule separate(const WeightedPair& wp, const SharedCycle& c) {
  if (!c.incompatible) throw std::invalid_argument("separate: cycle not incompatibly combed");
  return build_separate(wp.pair, c);
}

// --- zero-weight pruning ---------------------------------------------------------

PruneResult prune_zero_branches_rule(const WeightedPair& wp) {
  TrackPair P = wp.pair;
  std::map<int, int> parent;
  std::function<int(int)> find = [&](int r) {
    while (parent.count(r)) r = parent[r];
    return r;
  };
  // Gluing two regions along an arc (chi - 1) or a circle (chi adds).
  auto merge_regions = [&](int ra, int rb, bool along_arc) {
    ra = find(ra);
    rb = find(rb);
    if (ra == rb) {
      if (along_arc) P.regions()[ra].chi -= 1;
      return;
    }
    int chi = P.regions()[ra].chi + P.regions()[rb].chi - (along_arc ? 1 : 0);
    P.merge_regions(ra, rb, chi);
    parent[rb] = ra;
  };

  // 1. Dead branches per track.
  auto dead_branch = [&](Track t, int b) {
    if (b < 0) return false;
    const Weighting& w = t == Track::Sigma ? wp.mu : wp.nu;
    return w[b].is_zero();
  };

  // 2. Colour demotion and segment deaths, with region gluing.
  for (std::size_t si = 0; si < P.segments().size(); ++si) {
    Segment& s = P.segments()[si];
    if (!s.alive) continue;
    bool drop_sigma = has_sigma(s.colour) && dead_branch(Track::Sigma, s.sigma_branch);
    bool drop_tau = has_tau(s.colour) && dead_branch(Track::Tau, s.tau_branch);
    bool had_sigma = has_sigma(s.colour), had_tau = has_tau(s.colour);
    bool keep_sigma = had_sigma && !drop_sigma, keep_tau = had_tau && !drop_tau;
    if (keep_sigma && keep_tau) continue;
    if (keep_sigma) {
      s.colour = Colour::Red;
      continue;
    }
    if (keep_tau) {
      s.colour = Colour::Blue;
      continue;
    }
    // Segment dies entirely.
    merge_regions(s.region_left, s.region_right, !s.is_free_loop());
    P.kill_segment(static_cast<int>(si));
  }

  // 3. Vertex repair.
  for (std::size_t vi = 0; vi < P.vertices().size(); ++vi) {
    Vertex& v = P.vertices()[vi];
    if (!v.alive) continue;
    const int count = germ_count(v.kind);
    std::vector<int> alive_slots;
    for (int k = 0; k < count; ++k) {
      int g = v.germ[k];
      if (g >= 0 && P.segments()[g].alive) alive_slots.push_back(k);
    }
    auto fuse_through = [&](int slot_a, int slot_b) {
      int sa = v.germ[slot_a], sb = v.germ[slot_b];
      int ea = P.end_at(sa, static_cast<int>(vi), slot_a);
      int eb = P.end_at(sb, static_cast<int>(vi), slot_b);
      if (sa == sb) {
        // Closes into a free loop.
        for (bool left : {true, false}) {
          int r1 = P.side_region(sa, ea, left);
          int r2 = P.side_region(sa, 1 - eb, left);
          r1 = find(r1);
          r2 = find(r2);
          if (r1 != r2) merge_regions(r1, r2, true);
        }
        P.detach(sa, 0);
        P.detach(sa, 1);
      } else {
        for (bool left : {true, false}) {
          int r1 = find(P.side_region(sa, ea, left));
          int r2 = find(P.side_region(sb, 1 - eb, left));
          if (r1 != r2) merge_regions(r1, r2, true);
          P.set_side_region(sa, ea, left, find(r1));
        }
        SegmentEnd far = P.segments()[sb].ends[1 - eb];
        P.detach(sb, 0);
        P.detach(sb, 1);
        P.segments()[sb].alive = false;
        if (far.attached())
          P.attach(sa, ea, far.vertex, far.slot);
        else
          P.detach(sa, ea);
      }
      P.kill_vertex(static_cast<int>(vi));
    };
    if (v.kind == VertexKind::Crossing) {
      if (alive_slots.size() == 4) continue;
      if (alive_slots.empty()) {
        P.kill_vertex(static_cast<int>(vi));
        continue;
      }
      if (alive_slots.size() != 2)
        throw std::logic_error("prune: crossing with a half-dead strand");
      fuse_through(alive_slots[0], alive_slots[1]);
      continue;
    }
    // Switch vertex.
    if (alive_slots.empty() ||
        std::find(alive_slots.begin(), alive_slots.end(), kSlotLarge) == alive_slots.end()) {
      if (!alive_slots.empty()) throw std::logic_error("prune: smalls outlive their large");
      P.kill_vertex(static_cast<int>(vi));
      continue;
    }
    if (alive_slots.size() == 2) {
      fuse_through(alive_slots[0], alive_slots[1]);
      continue;
    }
    // All three alive: recompute the kind from the demoted colours.
    Colour cl = P.segments()[v.germ[kSlotLarge]].colour;
    Colour left = P.segments()[v.germ[kSlotLeft]].colour;
    Colour right = P.segments()[v.germ[kSlotRight]].colour;
    VertexKind kind;
    bool sigma_branches = has_sigma(left) && has_sigma(right);
    bool tau_branches = has_tau(left) && has_tau(right);
    if (sigma_branches && tau_branches)
      kind = VertexKind::SharedSwitch;
    else if (sigma_branches)
      kind = has_tau(cl) ? VertexKind::SigmaSwitch : VertexKind::RedSwitch;
    else if (tau_branches)
      kind = has_sigma(cl) ? VertexKind::TauSwitch : VertexKind::BlueSwitch;
    else
      kind = VertexKind::Divergence;
    v.kind = kind;
  }

  P.recompute_branches();
  // 4. Reindex weights by surviving representatives; record the projection.
  Weighting mu(P.branch_count(Track::Sigma), BigInt(0));
  Weighting nu(P.branch_count(Track::Tau), BigInt(0));
  SparseMatrix A(P.branch_count(Track::Sigma), wp.pair.branch_count(Track::Sigma));
  SparseMatrix B(P.branch_count(Track::Tau), wp.pair.branch_count(Track::Tau));
  std::vector<bool> mu_set(mu.size(), false), nu_set(nu.size(), false);
  for (std::size_t si = 0; si < P.segments().size(); ++si) {
    const Segment& s = P.segments()[si];
    if (!s.alive) continue;
    const Segment& old = wp.pair.segments()[si];
    if (has_sigma(s.colour)) {
      int nb = s.sigma_branch;
      const BigInt& val = wp.mu[old.sigma_branch];
      if (mu_set[nb] && mu[nb] != val) throw std::logic_error("prune: inconsistent mu");
      if (!mu_set[nb]) A.row(nb).push_back({old.sigma_branch, BigInt(1)});
      mu[nb] = val;
      mu_set[nb] = true;
    }
    if (has_tau(s.colour)) {
      int nb = s.tau_branch;
      const BigInt& val = wp.nu[old.tau_branch];
      if (nu_set[nb] && nu[nb] != val) throw std::logic_error("prune: inconsistent nu");
      if (!nu_set[nb]) B.row(nb).push_back({old.tau_branch, BigInt(1)});
      nu[nb] = val;
      nu_set[nb] = true;
    }
  }
  PruneResult out{WeightedPair{std::move(P), std::move(mu), std::move(nu)}, UpdateRule{}, true};
  out.rule.A = std::move(A);
  out.rule.B = std::move(B);
  out.rule.target = std::make_shared<TrackPair>(out.pair.pair);
  return out;
}

WeightedPair prune_zero_branches(const WeightedPair& wp) {
  return prune_zero_branches_rule(wp).pair;
}

// --- move drivers --------------------------------------------------------------

namespace {

constexpr long kInfiniteLen = std::numeric_limits<long>::max();

template <class SizeFn>
std::vector<int> lambda_branches(const TrackPair& pair, SizeFn size) {
  std::vector<int> shared = pair.shared_segments();
  if (shared.empty()) return {};
  std::size_t best = 0;
  for (int s : shared) best = std::max(best, size(s));
  std::set<int> lam;
  for (int s : shared)
    if (size(s) == best) lam.insert(s);

  auto in_lambda = [&](int seg) { return lam.count(seg) > 0; };
  std::map<int, long> ell_vertex;
  for (std::size_t vi = 0; vi < pair.vertices().size(); ++vi) {
    const Vertex& v = pair.vertices()[vi];
    if (!v.alive || !is_switch_kind(v.kind)) continue;
    int large = v.germ[kSlotLarge];
    if (!in_lambda(large)) continue;
    int target;  // 0 = either, 1 = stop on a left exit, 2 = stop on a right exit
    const bool l_in = in_lambda(v.germ[kSlotLeft]), r_in = in_lambda(v.germ[kSlotRight]);
    if (l_in && !r_in)
      target = 2;  // left small in Lambda: walk until a *right* exit... see below
    else if (r_in && !l_in)
      target = 1;
    else
      target = 0;
    // Calibration note: with smalls named relative to large->smalls travel,
    // the walk out of the large stops when it exits on the side named by the
    // *other* small of s (the figure's ell(s) = 8 example fixes this).
    long count = 0;
    int seg = large;
    int dir = 1 - pair.end_at(large, static_cast<int>(vi), kSlotLarge);
    std::set<std::pair<int, int>> seen;
    long result = kInfiniteLen;
    while (true) {
      if (seen.count({seg, dir})) break;
      seen.insert({seg, dir});
      ++count;
      const Segment& s = pair.segments()[seg];
      if (s.is_free_loop()) break;
      const SegmentEnd& end = s.ends[dir];
      const Vertex& u = pair.vertices()[end.vertex];
      if (!is_switch_kind(u.kind)) {
        result = count;
        break;
      }
      if (end.slot == kSlotLarge) {
        if (target == 0) {
          result = count;
          break;
        }
        int want = target == 1 ? kSlotLeft : kSlotRight;
        if (in_lambda(u.germ[want])) {
          result = count;
          break;
        }
        int other = want == kSlotLeft ? kSlotRight : kSlotLeft;
        if (!in_lambda(u.germ[other])) {
          result = count;
          break;
        }
        int out_seg = u.germ[other];
        int oe = pair.end_at(out_seg, end.vertex, other);
        seg = out_seg;
        dir = 1 - oe;
      } else {
        int out_seg = u.germ[kSlotLarge];
        if (!in_lambda(out_seg)) {
          result = count;
          break;
        }
        int oe = pair.end_at(out_seg, end.vertex, kSlotLarge);
        seg = out_seg;
        dir = 1 - oe;
      }
    }
    ell_vertex[static_cast<int>(vi)] = result;
  }

  auto ell_branch = [&](int seg) -> long {
    const Segment& s = pair.segments()[seg];
    long best_l = kInfiniteLen;
    if (!s.is_free_loop())
      for (int e = 0; e < 2; ++e) {
        auto it = ell_vertex.find(s.ends[e].vertex);
        if (it != ell_vertex.end()) best_l = std::min(best_l, it->second);
      }
    return best_l;
  };

  long best_ell = kInfiniteLen;
  for (int s : lam) best_ell = std::min(best_ell, ell_branch(s));
  std::vector<int> out;
  for (int s : lam)
    if (ell_branch(s) == best_ell) out.push_back(s);
  return out;
}

bool splittable(const TrackPair& pair, int seg) {
  const Segment& s = pair.segments()[seg];
  return s.colour == Colour::Shared && !s.is_free_loop() && s.ends[0].slot == kSlotLarge &&
         s.ends[1].slot == kSlotLarge;
}

int splittable_representative(const TrackPair& pair, int seg) {
  int cur = seg;
  for (long guard = 0; guard <= 4 * pair.surface().branch_bound(); ++guard) {
    if (splittable(pair, cur)) return cur;
    const Segment& s = pair.segments()[cur];
    if (s.is_free_loop()) break;
    int e = s.ends[0].slot != kSlotLarge ? 0 : 1;
    cur = pair.segment_at(s.ends[e].vertex, kSlotLarge);
  }
  throw std::logic_error("move: no splittable branch reachable from lambda");
}

// Finds an isolated shared branch, if any.
int find_isolated(const TrackPair& pair) {
  for (int s : pair.shared_segments()) {
    const Segment& seg = pair.segments()[s];
    if (seg.is_free_loop()) continue;
    bool both = true;
    for (int en = 0; en < 2; ++en)
      if (pair.vertices()[seg.ends[en].vertex].kind != VertexKind::Divergence) both = false;
    if (both) return s;
  }
  return -1;
}

}  // namespace

MoveResult move_once(const WeightedPair& wp, const MoveOptions& opt) {
  if (wp.pair.is_crossing()) throw std::invalid_argument("move: pair is crossing");
  if (wp.pair.has_isolated_shared()) throw std::invalid_argument("move: pair not clean");

  auto size = [&](int s) {
    return complexity(wp.mu[wp.pair.branch_of(s, Track::Sigma)]) +
           complexity(wp.nu[wp.pair.branch_of(s, Track::Tau)]);
  };
  auto lam = lambda_branches(wp.pair, size);
  if (lam.empty()) throw std::logic_error("move: no shared branches");
  int e = *std::min_element(lam.begin(), lam.end());

  auto cycles = find_combed_cycles(wp.pair);
  const SharedCycle* chosen = nullptr;
  MoveKind kind = MoveKind::Split;
  for (const auto& c : cycles)
    if (c.incompatible && c.contains(e)) {
      chosen = &c;
      kind = MoveKind::Separate;
      break;
    }
  BigInt r(0);
  if (!chosen) {
    for (const auto& c : cycles)
      if (c.compatible && !c.switch_free && c.contains(e)) {
        BigInt rot = rotation_number(wp, c);
        if (rot >= BigInt(1)) {
          chosen = &c;
          kind = MoveKind::Untwist;
          r = rot;
          break;
        }
      }
  }

  UpdateRule rule;
  if (kind == MoveKind::Separate) {
    rule = separate(wp, *chosen);
  } else if (kind == MoveKind::Untwist) {
    rule = untwist(wp, *chosen, r);
  } else {
    rule = split(wp, splittable_representative(wp.pair, e));
  }
  // Split any isolated shared branches produced by the move.
  while (true) {
    int iso = find_isolated(*rule.target);
    if (iso < 0) break;
    WeightedPair cur = apply_rule(rule, wp);
    rule = compose(split(cur, iso), rule);
  }

  MoveResult res{rule, apply_rule(rule, wp)};
  // Untwists and central splits can zero out branches; the calculus needs
  // the weightless structure gone before the next selection. Pruning can in
  // turn expose removable tangencies, which get split away, and so on.
  for (int guard = 0; guard < 64; ++guard) {
    bool has_zero = false;
    for (const auto& x : res.pair.mu) has_zero |= x.is_zero();
    for (const auto& x : res.pair.nu) has_zero |= x.is_zero();
    if (has_zero) {
      PruneResult pr = prune_zero_branches_rule(res.pair);
      res.rule = compose(pr.rule, res.rule);
      res.pair = std::move(pr.pair);
      continue;
    }
    int iso = find_isolated(res.pair.pair);
    if (iso < 0) break;
    UpdateRule next = split(res.pair, iso);
    res.rule = compose(next, res.rule);
    res.pair = apply_rule(next, res.pair);
  }
  if (opt.log) {
    SharedStats st = shared_stats(res.pair);
    opt.log->push_back({kind, kind == MoveKind::Split ? e : chosen->segments.front(),
                        st.tightness, st.shared_size()});
  }
  if (opt.check_invariants) {
    if (auto err = res.pair.pair.check_tight())
      throw std::logic_error("move broke tightness: " + *err);
    if (!check_weighting(res.pair.pair, Track::Sigma, res.pair.mu) ||
        !check_weighting(res.pair.pair, Track::Tau, res.pair.nu))
      throw std::logic_error("move broke realizability");
    if (res.pair.pair.tightness() > wp.pair.tightness())
      throw std::logic_error("move increased tightness");
    if (res.pair.pair.tightness() == wp.pair.tightness() && kind == MoveKind::Separate)
      throw std::logic_error("separation kept tightness constant");
    if (shared_stats(res.pair).shared_size() > shared_stats(wp).shared_size())
      throw std::logic_error("move increased shared size");
  }
  return res;
}

MoveResult move_until_drop(const WeightedPair& wp, const MoveOptions& opt) {
  const std::size_t start = shared_stats(wp).shared_size();
  if (start == 0) throw std::invalid_argument("move_until_drop: pair is crossing");
  const long bound = 2 * wp.pair.surface().branch_bound() * wp.pair.surface().branch_bound();
  WeightedPair cur = wp;
  UpdateRule rule;
  bool first = true;
  for (long i = 0; i <= bound; ++i) {
    if (!first && (cur.pair.is_crossing() || shared_stats(cur).shared_size() < start))
      return {rule, cur};
    MoveResult step = move_once(cur, opt);
    rule = first ? step.rule : compose(step.rule, rule);
    first = false;
    cur = std::move(step.pair);
  }
  throw std::logic_error("move_until_drop: exceeded 2B^2 moves without a drop");
}

// --- coarse move drivers --------------------------------------------------------

namespace {

std::optional<int> coarse_compare(const Interval& a, const Interval& b, long scale) {
  switch (interval_lt(a, b)) {
    case IntervalOrder::Less:
      return -1;
    case IntervalOrder::Greater:
      return 1;
    case IntervalOrder::Incomparable:
      // Equality is a real value statement: only exact (unscaled singleton)
      // intervals can make it.
      if (scale == 0 && a.is_singleton() && b.is_singleton() && a.lo() == b.lo()) return 0;
      return std::nullopt;
  }
  return std::nullopt;
}

std::optional<BigInt> coarse_rotation(const IntervalPair& t, const SharedCycle& c) {
  struct Side {
    bool determined;
    std::optional<BigInt> value;  // nullopt inside: no winding on this side
  };
  auto side = [&](Track tr, const IntervalWeighting& w) -> Side {
    CycleFlow flow = cycle_flow(t.pair, c, tr);
    Interval s = Interval::singleton(0);
    for (const auto& [b, dir] : flow.hanging) s = s + w[b];
    // Exactly-zero attachment weight is only knowable at full precision.
    if (s.lo().is_zero() && s.hi() == BigInt(1) && t.scale == 0) return {true, std::nullopt};
    if (s.lo().sign() <= 0) return {false, std::nullopt};
    Interval mn = w[flow.on_cycle.front()];
    for (int b : flow.on_cycle)
      mn = Interval(min_big(mn.lo(), w[b].lo()), min_big(mn.hi(), w[b].hi()));
    // Rotation must be the floor quotient of the *true* values: widen the
    // stored intervals back to value ranges before testing determination.
    const auto ul = static_cast<unsigned long>(t.scale);
    Interval mn_true(mn.lo().mul2exp(ul), mn.hi().mul2exp(ul));
    Interval s_true(s.lo().mul2exp(ul), s.hi().mul2exp(ul));
    auto r = interval_fdiv_determined(scale(BigInt(2), mn_true), s_true);
    if (!r) return {false, std::nullopt};
    return {true, std::move(*r)};
  };
  Side p = side(Track::Sigma, t.u);
  Side q = side(Track::Tau, t.v);
  if (!p.determined || !q.determined) return std::nullopt;
  if (!p.value && !q.value) return BigInt(0);
  if (!p.value) return *q.value;
  if (!q.value) return *p.value;
  return min_big(*p.value, *q.value);
}

}  // namespace

namespace {
IntervalPair lift_pruned(const WeightedPair& wp) {
  IntervalPair t{wp.pair, {}, {}, 0};
  for (const auto& x : wp.mu) t.u.push_back(Interval::singleton(x));
  for (const auto& x : wp.nu) t.v.push_back(Interval::singleton(x));
  return t;
}
}  // namespace

std::optional<CoarseResult> coarse_move_once(const IntervalPair& t, const MoveOptions& opt) {
  if (t.pair.is_crossing()) throw std::invalid_argument("coarse move: pair is crossing");

  auto size = [&](int s) {
    return t.u[t.pair.branch_of(s, Track::Sigma)].complexity_bound() +
           t.v[t.pair.branch_of(s, Track::Tau)].complexity_bound();
  };
  auto lam = lambda_branches(t.pair, size);
  int e = *std::min_element(lam.begin(), lam.end());

  auto cycles = find_combed_cycles(t.pair);
  const SharedCycle* chosen = nullptr;
  MoveKind kind = MoveKind::Split;
  for (const auto& c : cycles)
    if (c.incompatible && c.contains(e)) {
      chosen = &c;
      kind = MoveKind::Separate;
      break;
    }
  BigInt r(0);
  if (!chosen) {
    for (const auto& c : cycles)
      if (c.compatible && !c.switch_free && c.contains(e)) {
        auto rot = coarse_rotation(t, c);
        if (!rot) return std::nullopt;
        if (*rot >= BigInt(1)) {
          long omega = interval_stats(t).certainty();
          if (static_cast<long>(complexity(*rot)) > omega) return std::nullopt;
          chosen = &c;
          kind = MoveKind::Untwist;
          r = *rot;
          break;
        }
      }
  }

  UpdateRule rule;
  if (kind == MoveKind::Separate) {
    rule = build_separate(t.pair, *chosen);
  } else if (kind == MoveKind::Untwist) {
    rule = build_untwist(t.pair, *chosen, r);
  } else {
    int target = splittable_representative(t.pair, e);
    SplitDecision dec;
    const Segment& es = t.pair.segments()[target];
    const int v0 = es.ends[0].vertex, v1 = es.ends[1].vertex;
    for (Track tr : {Track::Sigma, Track::Tau}) {
      auto have = [&](int v, int slot) {
        return in_track(t.pair.segments()[t.pair.segment_at(v, slot)].colour, tr);
      };
      if (have(v0, kSlotLeft) && have(v0, kSlotRight) && have(v1, kSlotLeft) &&
          have(v1, kSlotRight)) {
        const IntervalWeighting& w = tr == Track::Sigma ? t.u : t.v;
        auto sign = coarse_compare(w[t.pair.branch_of(t.pair.segment_at(v0, kSlotRight), tr)],
                                   w[t.pair.branch_of(t.pair.segment_at(v1, kSlotLeft), tr)],
                                   t.scale);
        if (!sign) return std::nullopt;  // not coarsely splittable
        (tr == Track::Sigma ? dec.sigma_sign : dec.tau_sign) = *sign;
      }
    }
    rule = build_split(t.pair, target, dec);
  }
  while (true) {
    int iso = find_isolated(*rule.target);
    if (iso < 0) break;
    IntervalPair cur = apply_rule(rule, t);
    rule = compose(build_split(cur.pair, iso, SplitDecision{}), rule);
  }

  CoarseResult res{rule, apply_rule(rule, t)};
  res.pair.scale = t.scale;
  // At full precision singleton-zero weights are known exactly: prune them
  // just like the exact engine does.
  if (t.scale == 0) {
    auto is_zero_singleton = [](const Interval& i) {
      return i.lo().is_zero() && i.hi() == BigInt(1);
    };
    for (int guard = 0; guard < 64; ++guard) {
      bool zero = false;
      for (const auto& i : res.pair.u) zero |= is_zero_singleton(i);
      for (const auto& i : res.pair.v) zero |= is_zero_singleton(i);
      bool all_exact = true;
      for (const auto& i : res.pair.u) all_exact &= i.is_singleton();
      for (const auto& i : res.pair.v) all_exact &= i.is_singleton();
      if (!all_exact) break;
      if (zero) {
        WeightedPair exact{res.pair.pair, {}, {}};
        for (const auto& i : res.pair.u) exact.mu.push_back(i.lo());
        for (const auto& i : res.pair.v) exact.nu.push_back(i.lo());
        PruneResult pr = prune_zero_branches_rule(exact);
        res.rule = compose(pr.rule, res.rule);
        res.pair = lift_pruned(pr.pair);
        continue;
      }
      int iso = find_isolated(res.pair.pair);
      if (iso < 0) break;
      UpdateRule next = build_split(res.pair.pair, iso, SplitDecision{});
      res.rule = compose(next, res.rule);
      res.pair = apply_rule(next, res.pair);
    }
  }
  if (opt.log) {
    IntervalStats st = interval_stats(res.pair);
    opt.log->push_back({kind, kind == MoveKind::Split ? e : chosen->segments.front(),
                        st.tightness, st.shared_size()});
  }
  if (opt.check_invariants) {
    if (auto err = res.pair.pair.check_tight())
      throw std::logic_error("coarse move broke tightness: " + *err);
    IntervalStats before = interval_stats(t), after = interval_stats(res.pair);
    if (after.eps_inf > before.eps_inf && after.eps_inf - before.eps_inf > rule.complexity())
      throw std::logic_error("coarse move: uncertainty grew faster than |U|");
  }
  return res;
}

CoarseResult coarse_move_until_drop(const IntervalPair& t, const MoveOptions& opt) {
  const std::size_t start = interval_stats(t).shared_size();
  IntervalPair cur = t;
  UpdateRule rule = identity_rule(std::make_shared<TrackPair>(t.pair));
  if (start == 0) return {rule, cur, false};
  const long bound = 2 * t.pair.surface().branch_bound() * t.pair.surface().branch_bound();
  for (long i = 0; i <= bound; ++i) {
    if (cur.pair.is_crossing() || interval_stats(cur).shared_size() < start)
      return {rule, cur, false};
    auto step = coarse_move_once(cur, opt);
    if (!step) return {rule, cur, false};
    rule = compose(step->rule, rule);
    cur = std::move(step->pair);
  }
  // Out of budget with no drop in the interval bounds: give up this round
  // without keeping the unhelpful moves.
  return {identity_rule(std::make_shared<TrackPair>(t.pair)), t, true};
}

}  // namespace tt
