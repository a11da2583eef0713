#include "tt/coordinates.hpp"

#include <istream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace tt {

bool matrix_equal(const DeltaMatrix& a, const DeltaMatrix& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].size() != b[i].size()) return false;
    for (std::size_t j = 0; j < a[i].size(); ++j)
      if (a[i][j] != b[i][j]) return false;
  }
  return true;
}

DeltaMatrix matrix_transpose(const DeltaMatrix& m) {
  if (m.empty()) return {};
  DeltaMatrix t(m[0].size(), std::vector<BigInt>(m.size(), BigInt(0)));
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m[i].size(); ++j) t[j][i] = m[i][j];
  return t;
}

std::string matrix_str(const DeltaMatrix& m) {
  std::ostringstream os;
  for (const auto& row : m) {
    for (const auto& x : row) os << x << ' ';
    os << '\n';
  }
  return os.str();
}

namespace {

// ---------------------------------------------------------------------------
// S_{0,4}: one cuff. Multicurves are parallel copies of a single slope: we
// represent them as integer vectors (p, q), q >= 0 (p >= 0 when q = 0), with
// content = number of parallel copies times the primitive class.
//   i((p,q), (p',q')) = 2 |p q' - p' q|
//   alpha = (1,0) (the cuff), beta = (0,1), gamma = T_alpha(beta) = (2,1)
//   T_alpha: (p,q) -> (p + 2q, q);  T_beta: (p,q) -> (p, q - 2p)
// Calibrated entry-for-entry against the published twist tables.
// ---------------------------------------------------------------------------

struct Slope {
  BigInt p, q;

  void canonicalize() {
    if (q.sign() < 0 || (q.is_zero() && p.sign() < 0)) {
      p = -p;
      q = -q;
    }
  }
};

BigInt slope_intersection(const Slope& a, const Slope& b) {
  return BigInt(2) * (a.p * b.q - b.p * a.q).abs();
}

DeltaVector delta_of_slope(Slope s) {
  s.canonicalize();
  return DeltaVector{{BigInt(2) * s.q, BigInt(2) * s.p.abs(),
                      BigInt(2) * (s.p - BigInt(2) * s.q).abs()}};
}

class S04System final : public SurfaceSystem {
 public:
  Surface surface() const override { return Surface(0, 4); }

  std::vector<std::string> generator_names() const override { return {"Ta", "Tb"}; }

  DeltaMatrix identity_matrix() const override {
    DeltaMatrix m(3, std::vector<BigInt>(3, BigInt(0)));
    const Slope curves[3] = {{1, 0}, {0, 1}, {2, 1}};
    for (int j = 0; j < 3; ++j) {
      DeltaVector col = delta_of_slope(curves[j]);
      for (int i = 0; i < 3; ++i) m[i][j] = col.e[i];
    }
    return m;
  }

  std::optional<std::string> validate(const DeltaVector& dv, bool allow_empty) const override {
    return slope_of_delta(dv, allow_empty).second;
  }

  // (slope, error): slope meaningful only when error is nullopt.
  std::pair<Slope, std::optional<std::string>> slope_of_delta(const DeltaVector& dv,
                                                              bool allow_empty) const {
    if (dv.e.size() != 3) return {{}, "expected 3 coordinates"};
    const BigInt &ia = dv.e[0], &ib = dv.e[1], &ig = dv.e[2];
    for (const auto& x : dv.e)
      if (x.sign() < 0) return {{}, "negative intersection number"};
    auto odd = [](const BigInt& x) { return fdiv(x, BigInt(2)) * BigInt(2) != x; };
    if (odd(ia) || odd(ib) || odd(ig)) return {{}, "odd intersection number with the system"};
    if (ia.is_zero() && ib.is_zero() && ig.is_zero()) {
      if (!allow_empty) return {{}, "empty multicurve"};
      return {{BigInt(0), BigInt(0)}, std::nullopt};
    }
    Slope s;
    s.q = fdiv(ia, BigInt(2));
    BigInt half_b = fdiv(ib, BigInt(2));
    // Resolve the sign of p against the double dual.
    for (const BigInt& p : {half_b, -half_b}) {
      if (BigInt(2) * (p - BigInt(2) * s.q).abs() == ig) {
        s.p = p;
        s.canonicalize();
        return {s, std::nullopt};
      }
    }
    return {{}, "coordinates satisfy no slope (unrealizable)"};
  }

  MstVector to_mst(const DeltaVector& dv) const override {
    auto [s, err] = slope_of_delta(dv, true);
    if (err) throw std::invalid_argument("delta_to_mst: " + *err);
    if (s.q.is_zero()) return {{BigInt(0), s.p, BigInt(0)}};
    BigInt m = BigInt(2) * s.q;
    return {{m, s.p - fdiv(s.p, m) * m, fdiv(s.p, m)}};
  }

  DeltaMatrix twist_matrix(const std::string& gen, const BigInt& k) const override {
    const Slope curves[3] = {{1, 0}, {0, 1}, {2, 1}};
    DeltaMatrix m(3, std::vector<BigInt>(3, BigInt(0)));
    for (int j = 0; j < 3; ++j) {
      Slope v = curves[j];
      if (gen == "Ta")
        v.p += BigInt(2) * k * v.q;
      else if (gen == "Tb")
        v.q -= BigInt(2) * k * v.p;
      else
        throw std::invalid_argument("unsupported twist generator: " + gen);
      DeltaVector col = delta_of_slope(v);
      for (int i = 0; i < 3; ++i) m[i][j] = col.e[i];
    }
    return m;
  }

  int homology_rank() const override { return 3; }

  std::vector<std::vector<BigInt>> homology_matrix(const std::string& gen,
                                                   bool inverse) const override {
    (void)inverse;
    if (gen != "Ta" && gen != "Tb")
      throw std::invalid_argument("unsupported generator: " + gen);
    // Genus zero: every twist acts trivially on H_1.
    std::vector<std::vector<BigInt>> id(3, std::vector<BigInt>(3, BigInt(0)));
    for (int i = 0; i < 3; ++i) id[i][i] = BigInt(1);
    return id;
  }

  std::optional<BigInt> intersection_oracle(const DeltaVector& a,
                                            const DeltaVector& b) const override {
    auto [sa, ea] = slope_of_delta(a, true);
    auto [sb, eb] = slope_of_delta(b, true);
    if (ea || eb) return std::nullopt;
    return slope_intersection(sa, sb);
  }

  WeightedPair standard_pair(const DeltaVector& da, const DeltaVector& db) const override;

 private:
  WeightedPair build_master(const Slope& a, const Slope& b) const;
};

// --- S_{0,4} masters ---------------------------------------------------------
//
// Shared spiral spine: u-turns in each pair of pants joined by a winding
// circle in the cuff annulus. Both tracks ride the same spine (tangent) when
// both cross the cuff; cuff-parallel components are separate core loops.
//
// Spine weights for one track crossing m times with winding budget c:
//   u-turns m/2, ports m, loaded arc m + c, return arc c.

struct SpineWeights {
  BigInt u, port, top, bot;
};

SpineWeights spine_weights(const Slope& s) {
  // After normalization p >= q >= 1: m = 2q, c = p - q.
  return {s.q, BigInt(2) * s.q, s.p + s.q, s.p - s.q};
}

// Shared-spine master (both slopes cross the cuff). Segment order:
// U1, W, A_top, A_bot, E, U2.
WeightedPair master_shared_spine(const Slope& a, const Slope& b) {
  TrackPair P(Surface(0, 4));
  int r1 = P.add_region(0, 1);
  int rw = P.add_region(0, 1);
  int re = P.add_region(0, 1);
  int r3 = P.add_region(0, 1);
  int jw = P.add_vertex(VertexKind::SharedSwitch);
  int va = P.add_vertex(VertexKind::SharedSwitch);
  int vb = P.add_vertex(VertexKind::SharedSwitch);
  int je = P.add_vertex(VertexKind::SharedSwitch);
  int U1 = P.add_segment(Colour::Shared, r1, rw);
  int W = P.add_segment(Colour::Shared, rw, rw);
  int A_top = P.add_segment(Colour::Shared, rw, re);
  int A_bot = P.add_segment(Colour::Shared, rw, re);
  int E = P.add_segment(Colour::Shared, re, re);
  int U2 = P.add_segment(Colour::Shared, re, r3);
  P.attach(U1, 0, jw, kSlotRight);
  P.attach(U1, 1, jw, kSlotLeft);
  P.attach(W, 0, jw, kSlotLarge);
  P.attach(W, 1, va, kSlotRight);
  P.attach(A_top, 0, va, kSlotLarge);
  P.attach(A_top, 1, vb, kSlotLarge);
  P.attach(A_bot, 0, vb, kSlotLeft);
  P.attach(A_bot, 1, va, kSlotLeft);
  P.attach(E, 0, vb, kSlotRight);
  P.attach(E, 1, je, kSlotLarge);
  P.attach(U2, 0, je, kSlotLeft);
  P.attach(U2, 1, je, kSlotRight);
  P.recompute_branches();

  SpineWeights wa = spine_weights(a), wb = spine_weights(b);
  Weighting mu(P.branch_count(Track::Sigma), BigInt(0));
  Weighting nu(P.branch_count(Track::Tau), BigInt(0));
  auto assign = [&](Weighting& w, Track t, const SpineWeights& sw) {
    w[P.branch_of(U1, t)] = sw.u;
    w[P.branch_of(W, t)] = sw.port;
    w[P.branch_of(A_top, t)] = sw.top;
    w[P.branch_of(A_bot, t)] = sw.bot;
    w[P.branch_of(E, t)] = sw.port;
    w[P.branch_of(U2, t)] = sw.u;
  };
  assign(mu, Track::Sigma, wa);
  assign(nu, Track::Tau, wb);
  return WeightedPair{std::move(P), std::move(mu), std::move(nu)};
}

// One track on the spine, the other a parallel cuff core crossing its exit
// port once. spine_red: whether sigma rides the spine.
WeightedPair master_spine_core(const Slope& spine, const BigInt& cores, bool spine_red) {
  TrackPair P(Surface(0, 4));
  Colour sc = spine_red ? Colour::Red : Colour::Blue;
  Colour kc = spine_red ? Colour::Blue : Colour::Red;
  VertexKind sw = spine_red ? VertexKind::RedSwitch : VertexKind::BlueSwitch;
  int r1 = P.add_region(0, 1);
  int rw = P.add_region(0, 1);
  int re1 = P.add_region(1, 0);
  int re2 = P.add_region(0, 1);
  int r3 = P.add_region(0, 1);
  int jw = P.add_vertex(sw);
  int va = P.add_vertex(sw);
  int vb = P.add_vertex(sw);
  int je = P.add_vertex(sw);
  int X = P.add_vertex(VertexKind::Crossing);
  int U1 = P.add_segment(sc, r1, rw);
  int W = P.add_segment(sc, rw, rw);
  int A_top = P.add_segment(sc, rw, re1);
  int A_bot = P.add_segment(sc, rw, re1);
  int E1 = P.add_segment(sc, re1, re1);
  int E2 = P.add_segment(sc, re2, re2);
  int K = P.add_segment(kc, re1, re2);
  int U2 = P.add_segment(sc, re2, r3);
  P.attach(U1, 0, jw, kSlotRight);
  P.attach(U1, 1, jw, kSlotLeft);
  P.attach(W, 0, jw, kSlotLarge);
  P.attach(W, 1, va, kSlotRight);
  P.attach(A_top, 0, va, kSlotLarge);
  P.attach(A_top, 1, vb, kSlotLarge);
  P.attach(A_bot, 0, vb, kSlotLeft);
  P.attach(A_bot, 1, va, kSlotLeft);
  P.attach(E1, 0, vb, kSlotRight);
  P.attach(E2, 1, je, kSlotLarge);
  P.attach(U2, 0, je, kSlotLeft);
  P.attach(U2, 1, je, kSlotRight);
  // Crossing: ccw [east, north, west, south]; red strand on slots 0/2.
  if (spine_red) {
    P.attach(E2, 0, X, 0);
    P.attach(K, 0, X, 1);
    P.attach(E1, 1, X, 2);
    P.attach(K, 1, X, 3);
  } else {
    P.attach(K, 0, X, 0);
    P.attach(E1, 1, X, 1);
    P.attach(K, 1, X, 2);
    P.attach(E2, 0, X, 3);
  }
  P.recompute_branches();
  SpineWeights ws = spine_weights(spine);
  Weighting mu(P.branch_count(Track::Sigma), BigInt(0));
  Weighting nu(P.branch_count(Track::Tau), BigInt(0));
  Weighting& spine_w = spine_red ? mu : nu;
  Weighting& core_w = spine_red ? nu : mu;
  Track st = spine_red ? Track::Sigma : Track::Tau;
  Track kt = spine_red ? Track::Tau : Track::Sigma;
  spine_w[P.branch_of(U1, st)] = ws.u;
  spine_w[P.branch_of(W, st)] = ws.port;
  spine_w[P.branch_of(A_top, st)] = ws.top;
  spine_w[P.branch_of(A_bot, st)] = ws.bot;
  spine_w[P.branch_of(E1, st)] = ws.port;
  spine_w[P.branch_of(E2, st)] = ws.port;
  spine_w[P.branch_of(U2, st)] = ws.u;
  core_w[P.branch_of(K, kt)] = cores;
  return WeightedPair{std::move(P), std::move(mu), std::move(nu)};
}

// Two families of parallel cuff cores.
WeightedPair master_cores(const BigInt& s1, const BigInt& s2) {
  TrackPair P(Surface(0, 4));
  int rw = P.add_region(-1, 2);
  int mid = P.add_region(0, 0);
  int re = P.add_region(-1, 2);
  int K1 = P.add_segment(Colour::Red, rw, mid);
  int K2 = P.add_segment(Colour::Blue, mid, re);
  P.recompute_branches();
  Weighting mu(P.branch_count(Track::Sigma), BigInt(0));
  Weighting nu(P.branch_count(Track::Tau), BigInt(0));
  if (!s1.is_zero()) mu[P.branch_of(K1, Track::Sigma)] = s1;
  if (!s2.is_zero()) nu[P.branch_of(K2, Track::Tau)] = s2;
  return WeightedPair{std::move(P), std::move(mu), std::move(nu)};
}

WeightedPair S04System::build_master(const Slope& a, const Slope& b) const {
  const bool a_cross = a.q.sign() > 0, b_cross = b.q.sign() > 0;
  if (a_cross && b_cross) {
    // Normalize by a common twist power so both windings are nonnegative:
    // intersection numbers are unchanged.
    Slope na = a, nb = b;
    BigInt n(0);
    for (const Slope* s : {&na, &nb}) {
      if (s->p < s->q) {
        BigInt need = cdiv(s->q - s->p, BigInt(2) * s->q);
        if (need > n) n = need;
      }
    }
    na.p += BigInt(2) * n * na.q;
    nb.p += BigInt(2) * n * nb.q;
    return master_shared_spine(na, nb);
  }
  if (a_cross && !b_cross) {
    Slope na = a;
    if (na.p < na.q) na.p += BigInt(2) * cdiv(na.q - na.p, BigInt(2) * na.q) * na.q;
    return master_spine_core(na, b.p, /*spine_red=*/true);
  }
  if (!a_cross && b_cross) {
    Slope nb = b;
    if (nb.p < nb.q) nb.p += BigInt(2) * cdiv(nb.q - nb.p, BigInt(2) * nb.q) * nb.q;
    return master_spine_core(nb, a.p, /*spine_red=*/false);
  }
  return master_cores(a.p, b.p);
}

WeightedPair S04System::standard_pair(const DeltaVector& da, const DeltaVector& db) const {
  auto [sa, ea] = slope_of_delta(da, true);
  if (ea) throw std::invalid_argument("standard_pair: first curve: " + *ea);
  auto [sb, eb] = slope_of_delta(db, true);
  if (eb) throw std::invalid_argument("standard_pair: second curve: " + *eb);
  WeightedPair wp = build_master(sa, sb);
  WeightedPair pruned = prune_zero_branches(wp);
  if (auto err = pruned.pair.check_tight())
    throw std::logic_error("standard pair not tight: " + *err);
  if (!pruned.pair.is_clean()) throw std::logic_error("standard pair not clean");
  return pruned;
}

}  // namespace

// --- registry -----------------------------------------------------------------

const SurfaceSystem* detail_pants_system(const Surface& s);

namespace {

const SurfaceSystem* find_system(const Surface& s) {
  static const S04System s04;
  if (s == Surface(0, 4)) return &s04;
  return detail_pants_system(s);
}

}  // namespace

bool surface_supported(const Surface& s) { return find_system(s) != nullptr; }

const SurfaceSystem& system_for(const Surface& s) {
  const SurfaceSystem* sys = find_system(s);
  if (!sys)
    throw std::invalid_argument("unsupported surface S_{" + std::to_string(s.genus) + "," +
                                std::to_string(s.boundary) + "}");
  return *sys;
}

DeltaMatrix delta_identity(const Surface& s) { return system_for(s).identity_matrix(); }

DeltaMatrix twist_power_delta(const Surface& s, const std::string& zeta, const BigInt& k) {
  return system_for(s).twist_matrix(zeta, k);
}

MstVector delta_to_mst(const Surface& s, const DeltaVector& dv) {
  return system_for(s).to_mst(dv);
}

WeightedPair standard_pair_from_delta(const Surface& s, const DeltaVector& a,
                                      const DeltaVector& b) {
  return system_for(s).standard_pair(a, b);
}

bool validate_delta(const Surface& s, const DeltaVector& dv, bool allow_empty) {
  return !system_for(s).validate(dv, allow_empty).has_value();
}

CurveFile parse_curve_file(std::istream& in) {
  std::string word;
  if (!(in >> word) || word != "surface") throw std::invalid_argument("missing surface header");
  int g, b;
  if (!(in >> g >> b)) throw std::invalid_argument("bad surface header");
  CurveFile out{Surface(g, b), {}};
  const int n = 3 * out.surface.cuffs();
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    DeltaVector dv;
    std::string tok;
    while (ls >> tok) dv.e.push_back(BigInt(tok));
    if (dv.e.empty()) continue;
    if (static_cast<int>(dv.e.size()) != n)
      throw std::invalid_argument("curve line has wrong arity");
    out.curves.push_back(std::move(dv));
  }
  return out;
}

}  // namespace tt
