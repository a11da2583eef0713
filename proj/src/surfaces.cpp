// Standard weighted track pairs on surfaces assembled from pants glued
// along cuff annuli, plus coordinate systems for S_{0,5}, S_{1,2}, S_{2,0}.
//
// Per pair of pants (slots 0,1,2, drawn with slot 0 as the outer circle,
// slot 1 the west hole, slot 2 the east hole):
//  - arcs per track follow the triangle/dominant dichotomy; the u-turn of a
//    track dominant at slot j runs between the other two slots (both stubs
//    on slot j), separating slot j+1 from slot j+2; walking the u from its
//    U_in stub to U_out, slot j+1 lies on the left;
//  - connectors to a slot of weight zero never exist (x_ab <= min m);
//  - stub fan order along slot i: C_{i,i+2}, U_in, C_{i,i+1}, U_out.
// Both tracks share one spine wherever parallel; crossings join pure red
// and pure blue only: a pure u at slot j crosses the other track's pure
// C_{j+1,j+2} once; pure u's at different slots cross twice; a cuff core
// crosses the other track's spiral port once.
//
// Cuff annuli: merge cascade over the west stubs, the winding spiral
// (loaded arc + return arc), split cascade to the east stubs. Winding
// weights are pre-normalized to a common chirality by a power of the cuff
// twist, which changes no intersection numbers.

#include <algorithm>
#include <array>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <iostream>
#include <cstdlib>
#include <stdexcept>

#include "tt/coordinates.hpp"
#include "tt/intersection.hpp"
#include "tt/moves.hpp"

namespace tt {
namespace {

struct CuffData {
  BigInt m = BigInt(0);
  BigInt c = BigInt(0);  // winding weight; may be negative until normalized
  BigInt s = BigInt(0);
};

struct TrackData {
  std::vector<CuffData> cuff;
};

struct Layout {
  Surface surface;
  std::vector<std::array<int, 3>> pants;  // slot -> cuff id, or -1 for dS
};

struct PantsModel {
  BigInt x[3][3];
  BigInt u = BigInt(0);
  int dom = -1;
  const BigInt& conn(int i, int j) const { return x[std::min(i, j)][std::max(i, j)]; }
};

std::optional<PantsModel> pants_model(const BigInt m[3]) {
  const BigInt two(2);
  BigInt sum = m[0] + m[1] + m[2];
  if (fdiv(sum, two) * two != sum) return std::nullopt;
  PantsModel pm;
  for (auto& row : pm.x)
    for (auto& v : row) v = BigInt(0);
  auto half = [](const BigInt& v) { return fdiv(v, BigInt(2)); };
  for (int i = 0; i < 3; ++i) {
    int j = (i + 1) % 3, k = (i + 2) % 3;
    if (m[i] > m[j] + m[k]) {
      pm.dom = i;
      pm.u = half(m[i] - m[j] - m[k]);
      pm.x[std::min(i, j)][std::max(i, j)] = m[j];
      pm.x[std::min(i, k)][std::max(i, k)] = m[k];
      return pm;
    }
  }
  pm.x[0][1] = half(m[0] + m[1] - m[2]);
  pm.x[0][2] = half(m[0] + m[2] - m[1]);
  pm.x[1][2] = half(m[1] + m[2] - m[0]);
  return pm;
}

struct Stub {
  int seg = -1;
  int end = -1;
  bool valid() const { return seg >= 0; }
};

class Assembler {
 public:
  Assembler(const Layout& lay, TrackData a, TrackData b)
      : lay_(lay), a_(std::move(a)), b_(std::move(b)), P_(lay.surface) {
    amb_ = P_.add_region(lay.surface.chi(), lay.surface.boundary);
  }

  WeightedPair build();

 private:
  Colour colour_of(const BigInt& va, const BigInt& vb) const {
    if (va.sign() > 0 && vb.sign() > 0) return Colour::Shared;
    if (va.sign() > 0) return Colour::Red;
    return Colour::Blue;
  }
  int new_seg(const BigInt& va, const BigInt& vb) {
    int s = P_.add_segment(colour_of(va, vb), amb_, amb_);
    if (va.sign() > 0) wa_[s] = va;
    if (vb.sign() > 0) wb_[s] = vb;
    return s;
  }
  const BigInt& wa_of(int s) const {
    static const BigInt zero(0);
    auto it = wa_.find(s);
    return it == wa_.end() ? zero : it->second;
  }
  const BigInt& wb_of(int s) const {
    static const BigInt zero(0);
    auto it = wb_.find(s);
    return it == wb_.end() ? zero : it->second;
  }

  int find_region(int r) {
    while (parent_.count(r)) r = parent_[r];
    return r;
  }
  void merge_region(int a, int b, bool along_arc) {
    a = find_region(a);
    b = find_region(b);
    if (a == b) {
      if (along_arc) P_.regions()[a].chi -= 1;
      return;
    }
    int chi = P_.regions()[a].chi + P_.regions()[b].chi - (along_arc ? 1 : 0);
    P_.merge_regions(a, b, chi);
    parent_[b] = a;
  }

  struct CrossHeads {
    int red, blue;
  };
  // Extends two arcs across a new crossing; both heads have end 1 free.
  // layout_a: ccw germ order (red-in, blue-in, red-out, blue-out).
  CrossHeads cross(int red, int blue, bool layout_a) {
    int x = P_.add_vertex(VertexKind::Crossing);
    int red2 = new_seg(wa_of(red), BigInt(0));
    int blue2 = new_seg(BigInt(0), wb_of(blue));
    P_.attach(red, 1, x, 0);
    P_.attach(red2, 0, x, 2);
    if (layout_a) {
      P_.attach(blue, 1, x, 1);
      P_.attach(blue2, 0, x, 3);
    } else {
      P_.attach(blue, 1, x, 3);
      P_.attach(blue2, 0, x, 1);
    }
    return {red2, blue2};
  }

  void build_pants(int p);
  void build_annulus(int c);
  void settle();

  const Layout& lay_;
  TrackData a_, b_;
  TrackPair P_;
  std::vector<PantsModel> model_a_, model_b_;
  std::map<int, BigInt> wa_, wb_;
  std::map<std::pair<int, int>, std::vector<Stub>> stubs_;
  std::map<int, int> parent_;
  int amb_ = -1;
};

WeightedPair Assembler::build() {
  bool any = false;
  for (const auto& cd : a_.cuff) any |= cd.m.sign() > 0 || cd.s.sign() > 0;
  for (const auto& cd : b_.cuff) any |= cd.m.sign() > 0 || cd.s.sign() > 0;
  if (!any) {
    P_.recompute_branches();
    P_.set_regions_authoritative(false);
    return WeightedPair{std::move(P_), {}, {}};
  }

  for (const auto& pants : lay_.pants) {
    BigInt ma[3], mb[3];
    for (int i = 0; i < 3; ++i) {
      ma[i] = pants[i] < 0 ? BigInt(0) : a_.cuff[pants[i]].m;
      mb[i] = pants[i] < 0 ? BigInt(0) : b_.cuff[pants[i]].m;
    }
    auto A = pants_model(ma), B = pants_model(mb);
    if (!A || !B) throw std::invalid_argument("pants parity violated");
    model_a_.push_back(*A);
    model_b_.push_back(*B);
  }
  for (std::size_t p = 0; p < lay_.pants.size(); ++p) build_pants(static_cast<int>(p));
  for (int c = 0; c < lay_.surface.cuffs(); ++c) build_annulus(c);

  P_.recompute_branches();
  Weighting mu(P_.branch_count(Track::Sigma), BigInt(0));
  Weighting nu(P_.branch_count(Track::Tau), BigInt(0));
  for (auto& [s, w] : wa_)
    if (P_.segments()[s].alive && has_sigma(P_.segments()[s].colour))
      mu[P_.branch_of(s, Track::Sigma)] = w;
  for (auto& [s, w] : wb_)
    if (P_.segments()[s].alive && has_tau(P_.segments()[s].colour))
      nu[P_.branch_of(s, Track::Tau)] = w;

  settle();
  WeightedPair wp{std::move(P_), std::move(mu), std::move(nu)};
  return prune_zero_branches(wp);
}

void Assembler::build_pants(int p) {
  const auto& slots = lay_.pants[p];
  const PantsModel& A = model_a_[p];
  const PantsModel& B = model_b_[p];
  BigInt ma[3], mb[3];
  for (int i = 0; i < 3; ++i) {
    ma[i] = slots[i] < 0 ? BigInt(0) : a_.cuff[slots[i]].m;
    mb[i] = slots[i] < 0 ? BigInt(0) : b_.cuff[slots[i]].m;
  }

  // U-turn arcs (at most one per track; shared when both dominate a slot).
  struct U {
    int slot = -1;
    BigInt va, vb;
    int tail = -1, head = -1;  // first / last segment of the chain
  };
  std::vector<U> us;
  if (A.dom >= 0 && A.u.sign() > 0 && B.dom == A.dom && B.u.sign() > 0)
    us.push_back({A.dom, A.u, B.u, -1, -1});
  else {
    if (A.dom >= 0 && A.u.sign() > 0) us.push_back({A.dom, A.u, BigInt(0), -1, -1});
    if (B.dom >= 0 && B.u.sign() > 0) us.push_back({B.dom, BigInt(0), B.u, -1, -1});
  }
  auto u_at = [&](int slot) -> U* {
    for (auto& u : us)
      if (u.slot == slot) return &u;
    return nullptr;
  };
  (void)u_at;

  // Connector arcs.
  int conn_seg[3][3];
  for (auto& row : conn_seg)
    for (auto& v : row) v = -1;
  std::map<std::pair<int, int>, std::vector<int>> chain;
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j) {
      const BigInt &va = A.conn(i, j), &vb = B.conn(i, j);
      if (va.sign() <= 0 && vb.sign() <= 0) continue;
      int s = new_seg(va, vb);
      conn_seg[i][j] = conn_seg[j][i] = s;
      chain[{i, j}] = {s};
    }

  for (auto& u : us) {
    u.tail = new_seg(u.va, u.vb);
    u.head = u.tail;
  }

  // Crossings. A pure u at slot j crosses the other track's C_{j+1,j+2}
  // once; the chain runs j+1 -> j+2, and walking the u tail->head slot j+1
  // lies left, so the connector passes left-to-right: layout (red-in,
  // blue-in, red-out, blue-out) when the u is red.
  auto cross_u_conn = [&](U& u) {
    int j1 = (u.slot + 1) % 3, j2 = (u.slot + 2) % 3;
    int lo = std::min(j1, j2), hi = std::max(j1, j2);
    if (conn_seg[lo][hi] < 0) return;
    auto& ch = chain[{lo, hi}];
    const bool u_red = u.va.sign() > 0;
    const bool conn_forward = lo == j1;  // chain orientation lo->hi vs j1->j2
    // With the u red and the connector walking j1 -> j2, the layout is A;
    // reversing either flips it.
    bool layout = conn_forward;
    if (!u_red) layout = !layout;
    if (u_red) {
      CrossHeads h = cross(u.head, ch.back(), layout);
      u.head = h.red;
      ch.push_back(h.blue);
    } else {
      CrossHeads h = cross(ch.back(), u.head, layout);
      ch.push_back(h.red);
      u.head = h.blue;
    }
  };

  if (us.size() == 1) {
    if ((us[0].va.sign() > 0) != (us[0].vb.sign() > 0)) cross_u_conn(us[0]);
  } else if (us.size() == 2) {
    U& u1 = us[0];
    U& u2 = us[1];
    const bool u1_red = u1.va.sign() > 0;
    auto cross_uu = [&](bool layout) {
      if (u1_red) {
        CrossHeads h = cross(u1.head, u2.head, layout);
        u1.head = h.red;
        u2.head = h.blue;
      } else {
        CrossHeads h = cross(u2.head, u1.head, layout);
        u2.head = h.red;
        u1.head = h.blue;
      }
    };
    cross_uu(true);
    cross_u_conn(u1);
    cross_u_conn(u2);
    cross_uu(false);
  }

  // Stub fans: order along the circle at slot i is
  // (C_{i,i+2}, U_in, C_{i,i+1}, U_out).
  for (int i = 0; i < 3; ++i) {
    if (slots[i] < 0) continue;
    std::vector<Stub> fan;
    int j = (i + 1) % 3, k = (i + 2) % 3;
    auto conn_stub = [&](int other) -> Stub {
      int lo = std::min(i, other), hi = std::max(i, other);
      if (conn_seg[lo][hi] < 0) return {};
      auto& ch = chain[{lo, hi}];
      if (i == lo) return {ch.front(), 0};
      return {ch.back(), 1};
    };
    Stub c_ik = conn_stub(k);
    Stub c_ij = conn_stub(j);
    U* u = u_at(i);
    if (c_ik.valid()) fan.push_back(c_ik);
    if (u) fan.push_back({u->tail, 0});
    if (c_ij.valid()) fan.push_back(c_ij);
    if (u) fan.push_back({u->head, 1});
    stubs_[{p, i}] = std::move(fan);
  }
}

void Assembler::build_annulus(int c) {
  int pw = -1, sw = -1, pe = -1, se = -1;
  for (std::size_t p = 0; p < lay_.pants.size(); ++p)
    for (int sl = 0; sl < 3; ++sl)
      if (lay_.pants[p][sl] == c) {
        if (pw < 0) {
          pw = static_cast<int>(p);
          sw = sl;
        } else {
          pe = static_cast<int>(p);
          se = sl;
        }
      }
  if (pe < 0) throw std::logic_error("cuff attached fewer than twice");

  const CuffData& da = a_.cuff[c];
  const CuffData& db = b_.cuff[c];
  const bool a_cross = da.m.sign() > 0, b_cross = db.m.sign() > 0;

  if (!a_cross && !b_cross) {
    if (da.s.sign() > 0) new_seg(da.s, BigInt(0));
    if (db.s.sign() > 0) new_seg(BigInt(0), db.s);
    return;
  }

  // Merge cascades.
  auto cascade = [&](std::vector<Stub> fan) -> Stub {
    if (fan.empty()) throw std::logic_error("crossing cuff with no stubs");
    while (fan.size() > 1) {
      Stub s2 = fan.back();
      fan.pop_back();
      Stub s1 = fan.back();
      fan.pop_back();
      BigInt va = wa_of(s1.seg) + wa_of(s2.seg);
      BigInt vb = wb_of(s1.seg) + wb_of(s2.seg);
      const bool a_both = wa_of(s1.seg).sign() > 0 && wa_of(s2.seg).sign() > 0;
      const bool b_both = wb_of(s1.seg).sign() > 0 && wb_of(s2.seg).sign() > 0;
      VertexKind kind;
      if (a_both && b_both)
        kind = VertexKind::SharedSwitch;
      else if (a_both)
        kind = vb.sign() > 0 ? VertexKind::SigmaSwitch : VertexKind::RedSwitch;
      else if (b_both)
        kind = va.sign() > 0 ? VertexKind::TauSwitch : VertexKind::BlueSwitch;
      else
        kind = VertexKind::Divergence;
      int merged = new_seg(va, vb);
      int v = P_.add_vertex(kind);
      P_.attach(merged, 0, v, kSlotLarge);
      P_.attach(s1.seg, s1.end, v, kSlotRight);
      P_.attach(s2.seg, s2.end, v, kSlotLeft);
      fan.push_back({merged, 1});
    }
    return fan[0];
  };
  Stub W = cascade(stubs_[{pw, sw}]);
  Stub E = cascade(stubs_[{pe, se}]);

  // Cores of a non-crossing track ride beside the circle and cross the
  // other track's east port once.
  auto add_core = [&](bool red_core, const BigInt& count, Stub& port) {
    int x = P_.add_vertex(VertexKind::Crossing);
    int port2 = new_seg(wa_of(port.seg), wb_of(port.seg));
    if (red_core) {
      int core = new_seg(count, BigInt(0));
      P_.attach(core, 0, x, 0);
      P_.attach(core, 1, x, 2);
      P_.attach(port.seg, port.end, x, 1);
      P_.attach(port2, 0, x, 3);
    } else {
      int core = new_seg(BigInt(0), count);
      P_.attach(core, 0, x, 1);
      P_.attach(core, 1, x, 3);
      P_.attach(port.seg, port.end, x, 0);
      P_.attach(port2, 0, x, 2);
    }
    port = {port2, 1};
  };
  Stub Ep = E;
  if (da.s.sign() > 0) add_core(true, da.s, Ep);
  if (db.s.sign() > 0) add_core(false, db.s, Ep);

  const BigInt& ca = da.c;
  const BigInt& cb = db.c;
  if (ca.sign() <= 0 && cb.sign() <= 0) {
    // Straight cuff: splice the two ports into one segment.
    if (wa_of(Ep.seg) != wa_of(W.seg) || wb_of(Ep.seg) != wb_of(W.seg))
      throw std::logic_error("port weights disagree across a straight cuff");
    int esg = Ep.seg;
    int efar = 1 - Ep.end;
    SegmentEnd far = P_.segments()[esg].ends[efar];
    P_.detach(esg, 0);
    P_.detach(esg, 1);
    P_.segments()[esg].alive = false;
    if (far.attached()) P_.attach(W.seg, W.end, far.vertex, far.slot);
    // Any stub fan still pointing at the dead east segment now lives on the
    // surviving west segment's (possibly dangling) end.
    for (auto& [key, fan] : stubs_)
      for (auto& st : fan)
        if (st.seg == esg) st = {W.seg, W.end};
    return;
  }

  // Wound spiral between the ports. A track branches at the spiral joints
  // only when it actually winds; a crossing track with zero winding runs
  // through them smoothly, and the joints demote accordingly.
  const bool a_winds = a_cross && ca.sign() > 0;
  const bool b_winds = b_cross && cb.sign() > 0;
  VertexKind kind;
  if (a_winds && b_winds)
    kind = VertexKind::SharedSwitch;
  else if (a_winds)
    kind = b_cross ? VertexKind::SigmaSwitch : VertexKind::RedSwitch;
  else
    kind = a_cross ? VertexKind::TauSwitch : VertexKind::BlueSwitch;
  int va = P_.add_vertex(kind);
  int vb = P_.add_vertex(kind);
  int top = new_seg(a_cross ? da.m + ca : BigInt(0), b_cross ? db.m + cb : BigInt(0));
  int bot = new_seg(a_cross ? ca : BigInt(0), b_cross ? cb : BigInt(0));
  P_.attach(top, 0, va, kSlotLarge);
  P_.attach(top, 1, vb, kSlotLarge);
  P_.attach(bot, 0, vb, kSlotLeft);
  P_.attach(bot, 1, va, kSlotLeft);
  P_.attach(W.seg, W.end, va, kSlotRight);
  P_.attach(Ep.seg, Ep.end, vb, kSlotRight);
}

void Assembler::settle() {
  // Region topology is not tracked by this assembler: every side joins one
  // catch-all region and the pair is marked non-authoritative.
  for (auto& s : P_.segments()) {
    if (!s.alive) continue;
    s.region_left = amb_;
    s.region_right = amb_;
  }
  P_.set_regions_authoritative(false);
}

// --- multi-pants coordinate systems -------------------------------------------

// The curve system Delta: cuffs alpha_i, duals beta_i, double duals
// gamma_i = T_{alpha_i}(beta_i). Realization data of alpha and beta is
// authored; everything else (identity matrix, twist tables) is computed by
// the intersection engine and validated in tests.
class PantsSystem : public SurfaceSystem {
 public:
  PantsSystem(Layout lay, std::vector<TrackData> beta)
      : lay_(std::move(lay)), beta_(std::move(beta)) {}

  Surface surface() const override { return lay_.surface; }

  WeightedPair pair_from_data(const TrackData& a, const TrackData& b) const {
    TrackData na = a, nb = b;
    normalize(na, nb);
    Assembler asmb(lay_, na, nb);
    WeightedPair wp = asmb.build();
    // The port cascades may leave removable tangencies (a shared branch
    // between two divergences); split them away, as the move calculus does.
    while (wp.pair.has_isolated_shared()) {
      int iso = -1;
      for (int s : wp.pair.shared_segments()) {
        const Segment& seg = wp.pair.segments()[s];
        if (seg.is_free_loop()) continue;
        bool both = true;
        for (int e2 = 0; e2 < 2; ++e2)
          if (wp.pair.vertices()[seg.ends[e2].vertex].kind != VertexKind::Divergence)
            both = false;
        if (both) {
          iso = s;
          break;
        }
      }
      if (iso < 0) {
        if (getenv("TT_DEBUG_ASM")) std::cerr << "no isolated found yet unclean:\n" << wp.pair.dump();
        break;
      }
      UpdateRule rule = split(wp, iso);
      wp = apply_rule(rule, wp);
    }
    if (auto err = wp.pair.check_tight()) {
      if (getenv("TT_DEBUG_ASM")) {
        std::cerr << "data A:";
        for (auto& cd : na.cuff) std::cerr << " (" << cd.m << "," << cd.c << "," << cd.s << ")";
        std::cerr << "  data B:";
        for (auto& cd : nb.cuff) std::cerr << " (" << cd.m << "," << cd.c << "," << cd.s << ")";
        std::cerr << "\n" << wp.pair.dump();
      }
      throw std::logic_error("assembled pair not tight: " + *err);
    }
    if (!wp.pair.is_clean()) throw std::logic_error("assembled pair not clean");
    return wp;
  }

  BigInt iota(const TrackData& a, const TrackData& b) const {
    return fast_intersection(pair_from_data(a, b));
  }

  TrackData alpha_data(int i) const {
    TrackData t = empty_data();
    t.cuff[i].s = BigInt(1);
    return t;
  }
  const TrackData& beta_data(int i) const { return beta_[i]; }
  TrackData gamma_data(int i) const {
    TrackData t = beta_[i];
    t.cuff[i].c += t.cuff[i].m;  // one full right twist about alpha_i
    return t;
  }
  TrackData empty_data() const {
    TrackData t;
    t.cuff.resize(lay_.surface.cuffs());
    return t;
  }

  // Delta coordinates of a realized curve.
  DeltaVector delta_of(const TrackData& t) const {
    DeltaVector dv;
    const int n = lay_.surface.cuffs();
    dv.e.reserve(3 * n);
    for (int i = 0; i < n; ++i) dv.e.push_back(iota(alpha_data(i), t));
    for (int i = 0; i < n; ++i) dv.e.push_back(iota(beta_data(i), t));
    for (int i = 0; i < n; ++i) dv.e.push_back(iota(gamma_data(i), t));
    return dv;
  }

  // Solves realization data matching a Delta vector; nullopt with reason in
  // the string when unrealizable.
  std::pair<std::optional<TrackData>, std::string> data_of(const DeltaVector& dv) const;

  DeltaMatrix identity_matrix() const override {
    if (identity_.empty()) {
      const int n = lay_.surface.cuffs();
      std::vector<TrackData> curves;
      for (int i = 0; i < n; ++i) curves.push_back(alpha_data(i));
      for (int i = 0; i < n; ++i) curves.push_back(beta_data(i));
      for (int i = 0; i < n; ++i) curves.push_back(gamma_data(i));
      DeltaMatrix m(3 * n, std::vector<BigInt>(3 * n, BigInt(0)));
      for (int j = 0; j < 3 * n; ++j) {
        DeltaVector col = delta_of(curves[j]);
        for (int i = 0; i < 3 * n; ++i) m[i][j] = col.e[i];
      }
      identity_ = std::move(m);
    }
    return identity_;
  }

  std::optional<std::string> validate(const DeltaVector& dv, bool allow_empty) const override {
    if (static_cast<int>(dv.e.size()) != delta_size()) return "wrong arity";
    for (const auto& x : dv.e)
      if (x.sign() < 0) return "negative intersection number";
    bool zero = true;
    for (const auto& x : dv.e) zero &= x.is_zero();
    if (zero) return allow_empty ? std::nullopt : std::optional<std::string>("empty multicurve");
    auto [data, reason] = data_of(dv);
    if (!data) return reason;
    return std::nullopt;
  }

  WeightedPair standard_pair(const DeltaVector& a, const DeltaVector& b) const override {
    auto [da, ra] = data_of(a);
    if (!da) throw std::invalid_argument("standard_pair: first curve: " + ra);
    auto [db, rb] = data_of(b);
    if (!db) throw std::invalid_argument("standard_pair: second curve: " + rb);
    return pair_from_data(*da, *db);
  }

  MstVector to_mst(const DeltaVector& dv) const override {
    auto [data, reason] = data_of(dv);
    if (!data) throw std::invalid_argument("delta_to_mst: " + reason);
    MstVector out;
    for (const auto& cd : data->cuff) {
      if (cd.m.is_zero())
        out.push_back({BigInt(0), cd.s, BigInt(0)});
      else
        out.push_back({cd.m, cd.c - fdiv(cd.c, cd.m) * cd.m, fdiv(cd.c, cd.m)});
    }
    return out;
  }

  std::vector<std::string> generator_names() const override {
    std::vector<std::string> out;
    for (int i = 0; i < lay_.surface.cuffs(); ++i) out.push_back("Ta" + std::to_string(i + 1));
    return out;
  }

  // Twist matrix about a cuff: realize each system curve, shift its winding
  // weight, and read off the intersections.
  DeltaMatrix twist_matrix(const std::string& gen, const BigInt& k) const override {
    int cuff = cuff_of_generator(gen);
    if (cuff < 0) throw std::invalid_argument("unsupported twist generator: " + gen);
    if (k.sign() < 0) return matrix_transpose(twist_matrix(gen, -k));
    const int n = lay_.surface.cuffs();
    std::vector<TrackData> curves;
    for (int i = 0; i < n; ++i) curves.push_back(alpha_data(i));
    for (int i = 0; i < n; ++i) curves.push_back(beta_data(i));
    for (int i = 0; i < n; ++i) curves.push_back(gamma_data(i));
    DeltaMatrix m(3 * n, std::vector<BigInt>(3 * n, BigInt(0)));
    for (int j = 0; j < 3 * n; ++j) {
      TrackData img = curves[j];
      img.cuff[cuff].c += k * img.cuff[cuff].m;  // T^k on the winding
      DeltaVector col = delta_of(img);
      for (int i = 0; i < 3 * n; ++i) m[i][j] = col.e[i];
    }
    return m;
  }

  int homology_rank() const override {
    const Surface s = lay_.surface;
    return 2 * s.genus + std::max(s.boundary - 1, 0);
  }

  using IntMatrixRow = std::vector<std::vector<BigInt>>;

  std::vector<std::vector<BigInt>> homology_matrix(const std::string& gen,
                                                   bool inverse) const override {
    int cuff = cuff_of_generator(gen);
    if (cuff < 0) throw std::invalid_argument("unsupported generator: " + gen);
    IntMatrixRow id(homology_rank(), std::vector<BigInt>(homology_rank(), BigInt(0)));
    for (int i = 0; i < homology_rank(); ++i) id[i][i] = BigInt(1);
    auto it = homology_.find(cuff);
    if (it == homology_.end()) return id;
    IntMatrixRow m = id;
    for (auto& [pos, val] : it->second) m[pos.first][pos.second] += inverse ? -val : val;
    return m;
  }

 protected:
  virtual int cuff_of_generator(const std::string& gen) const {
    for (int i = 0; i < lay_.surface.cuffs(); ++i)
      if (gen == "Ta" + std::to_string(i + 1)) return i;
    return -1;
  }

  // Normalizes the pair so all windings are nonnegative: a common power of
  // the cuff twist applied to both curves changes no intersection numbers.
  void normalize(TrackData& a, TrackData& b) const {
    for (int i = 0; i < lay_.surface.cuffs(); ++i) {
      BigInt k(0);
      for (TrackData* t : {&a, &b}) {
        CuffData& cd = t->cuff[i];
        if (cd.m.sign() > 0 && cd.c.sign() < 0) {
          BigInt need = cdiv(-cd.c, cd.m);
          if (need > k) k = need;
        }
      }
      if (k.sign() > 0) {
        for (TrackData* t : {&a, &b}) {
          CuffData& cd = t->cuff[i];
          if (cd.m.sign() > 0) cd.c += k * cd.m;
        }
      }
    }
  }

  Layout lay_;
  std::vector<TrackData> beta_;
  // Sparse transvection data per cuff: entries (i,j) -> value.
  std::map<int, std::map<std::pair<int, int>, BigInt>> homology_;
  mutable DeltaMatrix identity_;
};

// Solve for realization data: the m's come straight off the cuff rows; each
// winding c_i is pinned by the beta_i and gamma_i rows (iota against a fixed
// dual is a convex piecewise-linear function of the winding); cores come
// from the beta rows. The full vector is verified exactly at the end.
std::pair<std::optional<TrackData>, std::string> PantsSystem::data_of(
    const DeltaVector& dv) const {
  const int n = lay_.surface.cuffs();
  TrackData t = empty_data();
  for (int i = 0; i < n; ++i) t.cuff[i].m = dv.e[i];
  for (const auto& pants : lay_.pants) {
    BigInt m[3];
    for (int s2 = 0; s2 < 3; ++s2)
      m[s2] = pants[s2] < 0 ? BigInt(0) : t.cuff[pants[s2]].m;
    if (!pants_model(m)) return {std::nullopt, "pants parity violated"};
  }
  for (int i = 0; i < n; ++i) {
    if (t.cuff[i].m.is_zero()) continue;
    const BigInt tb = dv.e[n + i], tg = dv.e[2 * n + i];
    auto fb = [&](const BigInt& c) {
      TrackData probe = t;
      probe.cuff[i].c = c;
      return iota(beta_data(i), probe);
    };
    auto fg = [&](const BigInt& c) {
      TrackData probe = t;
      probe.cuff[i].c = c;
      return iota(gamma_data(i), probe);
    };
    // Bracket the target on both branches of the convex function.
    BigInt lo(-1), hi(1), step(2);
    while (fb(lo) < tb) {
      lo -= step;
      step *= BigInt(2);
    }
    step = BigInt(2);
    while (fb(hi) < tb) {
      hi += step;
      step *= BigInt(2);
    }
    // Locate the convex minimum by ternary search, then bisect the two
    // monotone branches for fb == tb.
    BigInt mlo = lo, mhi = hi;
    while (mhi - mlo > BigInt(2)) {
      BigInt third = fdiv(mhi - mlo, BigInt(3));
      BigInt m1 = mlo + third, m2 = mhi - third;
      if (fb(m1) <= fb(m2))
        mhi = m2;
      else
        mlo = m1;
    }
    BigInt mstar = mlo;
    BigInt fmin = fb(mlo);
    for (BigInt c2 = mlo + BigInt(1); c2 <= mhi; c2 += BigInt(1)) {
      BigInt v = fb(c2);
      if (v < fmin) {
        fmin = v;
        mstar = c2;
      }
    }
    std::vector<BigInt> cands;
    if (getenv("TT_DEBUG_SOLVER"))
      std::cerr << "cuff " << i << " tb=" << tb << " lo=" << lo << " hi=" << hi
                << " mstar=" << mstar << " fmin=" << fmin << "\n";
    if (fmin <= tb) {
      // Falling branch [lo, mstar]: smallest c with fb(c) <= tb.
      BigInt a2 = lo, b2 = mstar;
      while (a2 < b2) {
        BigInt mid = fdiv(a2 + b2, BigInt(2));
        if (fb(mid) <= tb)
          b2 = mid;
        else
          a2 = mid + BigInt(1);
      }
      if (fb(a2) == tb) cands.push_back(a2);
      // Rising branch [mstar, hi]: largest c with fb(c) <= tb.
      a2 = mstar;
      b2 = hi;
      while (a2 < b2) {
        BigInt mid = fdiv(a2 + b2 + BigInt(1), BigInt(2));
        if (fb(mid) <= tb)
          a2 = mid;
        else
          b2 = mid - BigInt(1);
      }
      if (fb(a2) == tb && (cands.empty() || cands[0] != a2)) cands.push_back(a2);
    }
    if (getenv("TT_DEBUG_SOLVER")) {
      std::cerr << "cands:";
      for (auto& cd : cands) std::cerr << ' ' << cd << "(fb=" << fb(cd) << ",fg=" << fg(cd) << ")";
      std::cerr << " tg=" << tg << "\n";
    }
    if (cands.empty()) return {std::nullopt, "no winding matches the dual row"};
    // The plateau between the two candidates may also contain the answer;
    // the gamma row tells the position (fg is monotone across it).
    std::optional<BigInt> chosen;
    for (const auto& cd : cands)
      if (fg(cd) == tg) chosen = cd;
    if (!chosen && cands.size() == 2 && cands[0] < cands[1]) {
      BigInt a2 = cands[0], b2 = cands[1];
      bool increasing = fg(a2) <= fg(b2);
      while (a2 < b2) {
        BigInt mid = fdiv(a2 + b2, BigInt(2));
        BigInt v = fg(mid);
        if (v == tg) {
          a2 = b2 = mid;
          break;
        }
        if ((v < tg) == increasing)
          a2 = mid + BigInt(1);
        else
          b2 = mid - BigInt(1);
      }
      if (a2 == b2 && fg(a2) == tg && fb(a2) == tb) chosen = a2;
    }
    if (!chosen) return {std::nullopt, "no winding matches the double dual row"};
    t.cuff[i].c = *chosen;
  }
  // Cuff cores contribute additively to the dual rows; solve them last by
  // subtracting the coreless realization.
  for (int i = 0; i < n; ++i) {
    if (!t.cuff[i].m.is_zero()) continue;
    const BigInt& ib = dv.e[n + i];
    BigInt base = iota(beta_data(i), t);
    BigInt denom = iota(beta_data(i), alpha_data(i));
    if (denom.is_zero()) return {std::nullopt, "degenerate dual"};
    BigInt rest = ib - base;
    if (rest.sign() < 0 || fdiv(rest, denom) * denom != rest)
      return {std::nullopt, "core count not integral"};
    t.cuff[i].s = fdiv(rest, denom);
  }
  DeltaVector check = delta_of(t);
  if (!(check == dv)) return {std::nullopt, "coordinates match no standard weighting"};
  return {t, ""};
}

// --- instantiations -------------------------------------------------------------

TrackData make_data(int cuffs, std::vector<std::array<long, 3>> rows) {
  TrackData t;
  t.cuff.resize(cuffs);
  for (int i = 0; i < cuffs; ++i) {
    t.cuff[i].m = BigInt(rows[i][0]);
    t.cuff[i].c = BigInt(rows[i][1]);
    t.cuff[i].s = BigInt(rows[i][2]);
  }
  return t;
}

class S05System final : public PantsSystem {
 public:
  S05System()
      : PantsSystem(Layout{Surface(0, 5), {{{0, -1, -1}}, {{0, 1, -1}}, {{1, -1, -1}}}},
                    {make_data(2, {{2, 0, 0}, {0, 0, 0}}),
                     make_data(2, {{0, 0, 0}, {2, 0, 0}})}) {}
};

class S20System final : public PantsSystem {
 public:
  S20System()
      : PantsSystem(Layout{Surface(2, 0), {{{0, 1, 2}}, {{0, 1, 2}}}},
                    {make_data(3, {{2, 0, 0}, {0, 0, 0}, {0, 0, 0}}),
                     make_data(3, {{0, 0, 0}, {2, 0, 0}, {0, 0, 0}}),
                     make_data(3, {{0, 0, 0}, {0, 0, 0}, {2, 0, 0}})}) {
    // Homology: rank 4 basis (x1, y1, x2, y2); [a1] = x1, [a3] = x2,
    // [a2] = -x1 - x2. Transvections v -> v + <v, z> z.
    auto transvect = [&](std::vector<long> z) {
      std::map<std::pair<int, int>, BigInt> entries;
      // Symplectic form: <x1,y1> = 1, <x2,y2> = 1.
      auto pairing = [&](const std::vector<long>& u, const std::vector<long>& v) {
        return u[0] * v[1] - u[1] * v[0] + u[2] * v[3] - u[3] * v[2];
      };
      for (int j = 0; j < 4; ++j) {
        std::vector<long> e(4, 0);
        e[j] = 1;
        long coef = pairing(e, z);
        for (int i2 = 0; i2 < 4; ++i2)
          if (coef * z[i2] != 0) entries[{i2, j}] = BigInt(coef * z[i2]);
      }
      return entries;
    };
    homology_[0] = transvect({1, 0, 0, 0});
    homology_[1] = transvect({-1, 0, -1, 0});
    homology_[2] = transvect({0, 0, 1, 0});
  }
};

// S_{1,2} additionally ships the through-handle twist Tb, conjugate to the
// cuff twist Ta1 by the quarter-turn of the handle. The images of the system
// curves under that turn are calibrated data, validated in tests by the
// preservation of all pairwise intersection numbers.
class S12System final : public PantsSystem {
 public:
  S12System()
      : PantsSystem(Layout{Surface(1, 2), {{{0, 1, -1}}, {{0, 1, -1}}}},
                    {make_data(2, {{2, 0, 0}, {0, 0, 0}}),
                     make_data(2, {{0, 0, 0}, {2, 0, 0}})}) {
    // Homology rank 3: basis (x, y, e); [a1] = x, [a2] = x + e, [b] = y.
    homology_[0] = {{{0, 1}, BigInt(-1)}};                       // y -> y - x
    homology_[1] = {{{0, 1}, BigInt(-1)}, {{2, 1}, BigInt(-1)}}; // y -> y - x - e
  }

  std::vector<std::string> generator_names() const override { return {"Ta1", "Ta2", "Tb"}; }

  // Realization data of the braid curve b (crosses each cuff once).
  TrackData b_data() const { return make_data(2, {{1, 0, 0}, {1, 0, 0}}); }

  std::optional<DeltaVector> named_curve(const std::string& name) const override {
    if (name == "b") return delta_of(b_data());
    if (name == "b'") return delta_of(rho_inverse_images()[0]);
    return std::nullopt;
  }

  // Images of the Delta curves and of b under the inverse quarter turn
  // rho^{-1} (rho maps a1 to b). Calibrated; see the validation test.
  std::vector<TrackData> rho_inverse_images() const;

  DeltaMatrix twist_matrix(const std::string& gen, const BigInt& k) const override {
    if (gen != "Tb") return PantsSystem::twist_matrix(gen, k);
    if (k.sign() < 0) return matrix_transpose(twist_matrix(gen, -k));
    // Delta(Tb^k)[d][e] = iota(rho^{-1} d, Ta1^k (rho^{-1} e)).
    auto img = rho_inverse_images();
    const int size = delta_size();
    DeltaMatrix m(size, std::vector<BigInt>(size, BigInt(0)));
    for (int e = 0; e < size; ++e) {
      TrackData te = img[e];
      te.cuff[0].c += k * te.cuff[0].m;
      for (int d = 0; d < size; ++d) m[d][e] = iota(img[d], te);
    }
    return m;
  }

  std::vector<std::vector<BigInt>> homology_matrix(const std::string& gen,
                                                   bool inverse) const override {
    if (gen != "Tb") return PantsSystem::homology_matrix(gen, inverse);
    IntMatrixRow m(3, std::vector<BigInt>(3, BigInt(0)));
    for (int i = 0; i < 3; ++i) m[i][i] = BigInt(1);
    m[1][0] = inverse ? BigInt(-1) : BigInt(1);  // x -> x + y
    return m;
  }
};

std::vector<TrackData> S12System::rho_inverse_images() const {
  // rho^{-1}: a1 -> b' (the parallel through-handle curve), a2 -> b,
  // beta/gamma images determined up to winding; calibrated in the
  // validation test by intersection preservation.
  std::vector<TrackData> img;
  img.push_back(make_data(2, {{1, 0, 0}, {1, -1, 0}}));  // rho^-1(a1) = b'
  img.push_back(b_data());                               // rho^-1(a2) = b
  img.push_back(make_data(2, {{2, -1, 0}, {2, -1, 0}})); // rho^-1(beta1)
  img.push_back(make_data(2, {{0, 0, 1}, {0, 0, 0}}));   // rho^-1(beta2) = a1?
  img.push_back(make_data(2, {{2, 1, 0}, {2, 1, 0}}));   // rho^-1(gamma1)
  img.push_back(make_data(2, {{1, 1, 0}, {1, 0, 0}}));   // rho^-1(gamma2)
  return img;
}

const SurfaceSystem* pants_system_for(const Surface& s) {
  static const S05System s05;
  static const S12System s12;
  static const S20System s20;
  if (s == Surface(0, 5)) return &s05;
  if (s == Surface(1, 2)) return &s12;
  if (s == Surface(2, 0)) return &s20;
  return nullptr;
}

}  // namespace

const SurfaceSystem* detail_pants_system(const Surface& s) { return pants_system_for(s); }

}  // namespace tt
