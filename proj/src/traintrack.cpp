#include "tt/traintrack.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace tt {

Surface::Surface(int g, int b) : genus(g), boundary(b) {
  if (g < 0 || b < 0 || chi() > -2)
    throw std::invalid_argument("surface must satisfy chi <= -2");
}

int TrackPair::add_region(int chi, int ds_circles) {
  regions_.push_back({chi, ds_circles, true});
  return static_cast<int>(regions_.size()) - 1;
}

int TrackPair::add_vertex(VertexKind kind) {
  vertices_.push_back(Vertex{kind, {-1, -1, -1, -1}, true});
  return static_cast<int>(vertices_.size()) - 1;
}

int TrackPair::add_segment(Colour colour, int region_left, int region_right) {
  Segment s;
  s.colour = colour;
  s.region_left = region_left;
  s.region_right = region_right;
  segments_.push_back(s);
  return static_cast<int>(segments_.size()) - 1;
}

void TrackPair::attach(int segment, int which_end, int vertex, int slot) {
  segments_[segment].ends[which_end] = {vertex, slot};
  vertices_[vertex].germ[slot] = segment;
}

void TrackPair::detach(int segment, int which_end) {
  SegmentEnd& e = segments_[segment].ends[which_end];
  if (e.attached() && vertices_[e.vertex].germ[e.slot] == segment)
    vertices_[e.vertex].germ[e.slot] = -1;
  e = {};
}

void TrackPair::kill_segment(int segment) {
  detach(segment, 0);
  detach(segment, 1);
  segments_[segment].alive = false;
}

void TrackPair::kill_vertex(int vertex) { vertices_[vertex].alive = false; }

void TrackPair::kill_region(int region) { regions_[region].alive = false; }

void TrackPair::merge_regions(int a, int b, int merged_chi) {
  if (a == b) {
    regions_[a].chi = merged_chi;
    return;
  }
  regions_[a].chi = merged_chi;
  regions_[a].ds_circles += regions_[b].ds_circles;
  for (auto& s : segments_) {
    if (!s.alive) continue;
    if (s.region_left == b) s.region_left = a;
    if (s.region_right == b) s.region_right = a;
  }
  regions_[b].alive = false;
}

int TrackPair::end_at(int segment, int vertex, int slot) const {
  const Segment& s = segments_[segment];
  for (int e = 0; e < 2; ++e)
    if (s.ends[e].vertex == vertex && s.ends[e].slot == slot) return e;
  throw std::logic_error("segment not attached at the given slot");
}

int TrackPair::side_region(int segment, int toward_end, bool left_of_motion) const {
  const Segment& s = segments_[segment];
  const bool left_side = (toward_end == 1) == left_of_motion;
  return left_side ? s.region_left : s.region_right;
}

void TrackPair::set_side_region(int segment, int toward_end, bool left_of_motion, int region) {
  Segment& s = segments_[segment];
  const bool left_side = (toward_end == 1) == left_of_motion;
  (left_side ? s.region_left : s.region_right) = region;
}

int TrackPair::corner_region(int vertex, int ccw_index) const {
  const Vertex& v = vertices_[vertex];
  const int count = germ_count(v.kind);
  const int j = (ccw_index + 1) % count;
  const int seg = v.germ[j];
  const int e = end_at(seg, vertex, j);
  return side_region(seg, e, true);
}

std::vector<TrackPair::SmoothLink> TrackPair::smooth_links(int vertex) const {
  const Vertex& v = vertices_[vertex];
  std::vector<SmoothLink> links;
  auto small_colour = [&](int slot) { return segments_[v.germ[slot]].colour; };
  switch (v.kind) {
    case VertexKind::Crossing:
      links.push_back({Track::Sigma, 0, 2});
      links.push_back({Track::Tau, 1, 3});
      break;
    case VertexKind::Divergence: {
      int red = small_colour(kSlotLeft) == Colour::Red ? kSlotLeft : kSlotRight;
      links.push_back({Track::Sigma, kSlotLarge, red});
      links.push_back({Track::Tau, kSlotLarge, red == kSlotLeft ? kSlotRight : kSlotLeft});
      break;
    }
    case VertexKind::SigmaSwitch: {
      int shared = small_colour(kSlotLeft) == Colour::Shared ? kSlotLeft : kSlotRight;
      links.push_back({Track::Tau, kSlotLarge, shared});
      break;
    }
    case VertexKind::TauSwitch: {
      int shared = small_colour(kSlotLeft) == Colour::Shared ? kSlotLeft : kSlotRight;
      links.push_back({Track::Sigma, kSlotLarge, shared});
      break;
    }
    case VertexKind::SharedSwitch:
    case VertexKind::RedSwitch:
    case VertexKind::BlueSwitch:
      break;
  }
  return links;
}

std::pair<int, int> TrackPair::recompute_branches() {
  for (auto& s : segments_) {
    s.sigma_branch = -1;
    s.tau_branch = -1;
  }
  auto assign = [&](Track t) {
    int next = 0;
    for (std::size_t start = 0; start < segments_.size(); ++start) {
      Segment& s0 = segments_[start];
      if (!s0.alive || !in_track(s0.colour, t)) continue;
      int& mark0 = t == Track::Sigma ? s0.sigma_branch : s0.tau_branch;
      if (mark0 >= 0) continue;
      // Flood through smooth continuations.
      std::vector<int> stack = {static_cast<int>(start)};
      mark0 = next;
      while (!stack.empty()) {
        int seg = stack.back();
        stack.pop_back();
        for (int e = 0; e < 2; ++e) {
          const SegmentEnd& end = segments_[seg].ends[e];
          if (!end.attached()) continue;
          for (const SmoothLink& link : smooth_links(end.vertex)) {
            if (link.track != t) continue;
            int a = vertices_[end.vertex].germ[link.slot_a];
            int b = vertices_[end.vertex].germ[link.slot_b];
            int other_seg = -1;
            if (a == seg && end.slot == link.slot_a) other_seg = b;
            if (b == seg && end.slot == link.slot_b) other_seg = a;
            if (other_seg < 0) continue;
            int& mark = t == Track::Sigma ? segments_[other_seg].sigma_branch
                                          : segments_[other_seg].tau_branch;
            if (mark < 0) {
              mark = next;
              stack.push_back(other_seg);
            }
          }
        }
      }
      ++next;
    }
    return next;
  };
  n_sigma_ = assign(Track::Sigma);
  n_tau_ = assign(Track::Tau);
  return {n_sigma_, n_tau_};
}

std::vector<FaceWalk> TrackPair::face_walks() const {
  std::vector<FaceWalk> walks;
  std::set<std::pair<int, int>> visited;  // (segment, toward_end)
  for (std::size_t s0 = 0; s0 < segments_.size(); ++s0) {
    if (!segments_[s0].alive) continue;
    for (int dir0 = 0; dir0 < 2; ++dir0) {
      if (visited.count({static_cast<int>(s0), dir0})) continue;
      FaceWalk walk;
      int seg = static_cast<int>(s0), dir = dir0;
      while (!visited.count({seg, dir})) {
        visited.insert({seg, dir});
        const Segment& s = segments_[seg];
        int claimed = side_region(seg, dir, true);
        if (walk.region < 0) walk.region = claimed;
        if (claimed != walk.region) walk.consistent = false;
        if (s.is_free_loop()) {
          walk.steps.push_back({seg, dir, '-'});
          break;
        }
        const SegmentEnd& end = s.ends[dir];
        const Vertex& v = vertices_[end.vertex];
        const int count = germ_count(v.kind);
        const int out_slot = (end.slot + count - 1) % count;  // clockwise next
        char transition;
        if (v.kind == VertexKind::Crossing) {
          transition = 'L';
        } else {
          transition = end.slot == kSlotLeft ? 'V' : '-';
        }
        walk.steps.push_back({seg, dir, transition});
        int out_seg = v.germ[out_slot];
        int out_end = end_at(out_seg, end.vertex, out_slot);
        seg = out_seg;
        dir = 1 - out_end;
      }
      walks.push_back(std::move(walk));
    }
  }
  return walks;
}

BoundaryWord TrackPair::walk_word(const FaceWalk& w) const {
  BoundaryWord word;
  for (const WalkStep& step : w.steps)
    word.pieces.push_back({colour_letter(segments_[step.segment].colour), step.transition});
  return word;
}

std::vector<int> TrackPair::shared_segments() const {
  std::vector<int> out;
  for (std::size_t i = 0; i < segments_.size(); ++i)
    if (segments_[i].alive && segments_[i].colour == Colour::Shared)
      out.push_back(static_cast<int>(i));
  return out;
}

int TrackPair::shared_switch_count() const {
  int n = 0;
  for (const auto& v : vertices_)
    if (v.alive && v.kind == VertexKind::SharedSwitch) ++n;
  return n;
}

long TrackPair::tightness() const {
  return static_cast<long>(shared_segments().size()) + shared_switch_count();
}

bool TrackPair::is_crossing() const {
  for (const auto& v : vertices_) {
    if (!v.alive) continue;
    switch (v.kind) {
      case VertexKind::Divergence:
      case VertexKind::SigmaSwitch:
      case VertexKind::TauSwitch:
      case VertexKind::SharedSwitch:
        return false;
      default:
        break;
    }
  }
  return shared_segments().empty();
}

bool TrackPair::has_isolated_shared() const {
  for (const auto& s : segments_) {
    if (!s.alive || s.colour != Colour::Shared) continue;
    if (s.is_free_loop()) continue;  // handled as an incompatibly combed cycle
    bool isolated = true;
    for (int e = 0; e < 2; ++e) {
      const SegmentEnd& end = s.ends[e];
      if (vertices_[end.vertex].kind != VertexKind::Divergence) isolated = false;
    }
    if (isolated) return true;
  }
  return false;
}

int TrackPair::live_vertex_count() const {
  int n = 0;
  for (const auto& v : vertices_)
    if (v.alive) ++n;
  return n;
}

int TrackPair::live_segment_count() const {
  int n = 0;
  for (const auto& s : segments_)
    if (s.alive) ++n;
  return n;
}

int TrackPair::free_loop_count() const {
  int n = 0;
  for (const auto& s : segments_)
    if (s.alive && s.is_free_loop()) ++n;
  return n;
}

namespace {

// Expected colour sets for each vertex kind's slots: each entry lists the
// allowed multiset over (large, small, small) / crossing slots.
bool colours_ok(VertexKind k, Colour large, Colour a, Colour b) {
  auto pair_is = [&](Colour x, Colour y) {
    return (a == x && b == y) || (a == y && b == x);
  };
  switch (k) {
    case VertexKind::Divergence:
      return large == Colour::Shared && pair_is(Colour::Red, Colour::Blue);
    case VertexKind::SigmaSwitch:
      return large == Colour::Shared && pair_is(Colour::Shared, Colour::Red);
    case VertexKind::TauSwitch:
      return large == Colour::Shared && pair_is(Colour::Shared, Colour::Blue);
    case VertexKind::SharedSwitch:
      return large == Colour::Shared && a == Colour::Shared && b == Colour::Shared;
    case VertexKind::RedSwitch:
      return large == Colour::Red && a == Colour::Red && b == Colour::Red;
    case VertexKind::BlueSwitch:
      return large == Colour::Blue && a == Colour::Blue && b == Colour::Blue;
    default:
      return false;
  }
}

}  // namespace

std::optional<std::string> TrackPair::validate() const {
  std::ostringstream err;
  for (std::size_t vi = 0; vi < vertices_.size(); ++vi) {
    const Vertex& v = vertices_[vi];
    if (!v.alive) continue;
    const int count = germ_count(v.kind);
    for (int k = 0; k < count; ++k) {
      int seg = v.germ[k];
      if (seg < 0 || !segments_[seg].alive) {
        err << "vertex " << vi << " slot " << k << " empty or dead";
        return err.str();
      }
      bool found = false;
      for (int e = 0; e < 2; ++e) {
        const SegmentEnd& end = segments_[seg].ends[e];
        if (end.vertex == static_cast<int>(vi) && end.slot == k) found = true;
      }
      if (!found) {
        err << "segment " << seg << " does not point back at vertex " << vi << " slot " << k;
        return err.str();
      }
    }
    if (v.kind == VertexKind::Crossing) {
      if (segments_[v.germ[0]].colour != Colour::Red ||
          segments_[v.germ[2]].colour != Colour::Red ||
          segments_[v.germ[1]].colour != Colour::Blue ||
          segments_[v.germ[3]].colour != Colour::Blue) {
        err << "crossing " << vi << " has wrong strand colours";
        return err.str();
      }
    } else if (!colours_ok(v.kind, segments_[v.germ[kSlotLarge]].colour,
                           segments_[v.germ[kSlotRight]].colour,
                           segments_[v.germ[kSlotLeft]].colour)) {
      err << "switch " << vi << " has wrong germ colours";
      return err.str();
    }
    // Region agreement at every corner: the left face arriving along germ
    // j equals the left face leaving along the clockwise-next germ.
    for (int j = 0; regions_authoritative_ && j < count; ++j) {
      int in_seg = v.germ[j];
      int in_end = end_at(in_seg, static_cast<int>(vi), j);
      int out_slot = (j + count - 1) % count;
      int out_seg = v.germ[out_slot];
      int out_end = end_at(out_seg, static_cast<int>(vi), out_slot);
      int r1 = side_region(in_seg, in_end, true);
      int r2 = side_region(out_seg, 1 - out_end, true);
      if (r1 != r2 || r1 < 0 || !regions_[r1].alive) {
        err << "corner mismatch at vertex " << vi << " slot " << j << ": " << r1 << " vs "
            << r2;
        return err.str();
      }
    }
  }
  for (std::size_t si = 0; si < segments_.size(); ++si) {
    const Segment& s = segments_[si];
    if (!s.alive) continue;
    if (s.ends[0].attached() != s.ends[1].attached()) {
      err << "segment " << si << " half attached";
      return err.str();
    }
    for (int r : {s.region_left, s.region_right})
      if (r < 0 || r >= static_cast<int>(regions_.size()) || !regions_[r].alive) {
        err << "segment " << si << " has dead region side";
        return err.str();
      }
  }
  if (!regions_authoritative_) return std::nullopt;
  // Walk consistency and per-region structure.
  auto walks = face_walks();
  std::map<int, int> walk_count;
  for (const auto& w : walks) {
    if (!w.consistent || w.region < 0) {
      err << "inconsistent face walk (region " << w.region << ")";
      return err.str();
    }
    ++walk_count[w.region];
  }
  long chi_sum = 0;
  for (std::size_t ri = 0; ri < regions_.size(); ++ri) {
    const Region& r = regions_[ri];
    if (!r.alive) continue;
    chi_sum += r.chi;
    int w = walk_count.count(static_cast<int>(ri)) ? walk_count[static_cast<int>(ri)] : 0;
    // chi = 2 - 2 genus - (walks + ds circles): genus must be a nonneg int.
    // (A region may have no walk at all: the whole surface, for the empty pair.)
    int twice_genus = 2 - r.chi - w - r.ds_circles;
    if (twice_genus < 0 || twice_genus % 2 != 0) {
      err << "region " << ri << " has impossible chi " << r.chi << " for " << w << " walks, "
          << r.ds_circles << " ds circles";
      return err.str();
    }
  }
  const long euler = live_vertex_count() + free_loop_count() - live_segment_count() + chi_sum;
  if (euler != surface_.chi()) {
    err << "Euler census " << euler << " != chi(S) = " << surface_.chi();
    return err.str();
  }
  return std::nullopt;
}

std::optional<std::string> TrackPair::check_tight() const {
  if (auto e = validate()) return e;
  if (!regions_authoritative_) return std::nullopt;
  auto walks = face_walks();
  for (const auto& w : walks) {
    const Region& r = regions_[w.region];
    if (r.chi == 1) {
      BoundaryWord word = walk_word(w);
      if (!is_legal(word))
        return "illegal disk region " + std::to_string(w.region) + ": " + word.str();
    } else if (r.chi > 1) {
      return "region with chi > 1";
    }
  }
  return std::nullopt;
}

std::string TrackPair::dump() const {
  std::ostringstream os;
  os << "surface S_{" << surface_.genus << "," << surface_.boundary << "}\n";
  static const char* kind_names[] = {"crossing", "divergence", "sigma-switch", "tau-switch",
                                     "shared-switch", "red-switch", "blue-switch"};
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    const Vertex& v = vertices_[i];
    if (!v.alive) continue;
    os << "v" << i << " " << kind_names[static_cast<int>(v.kind)] << " germs";
    for (int k = 0; k < germ_count(v.kind); ++k) os << ' ' << v.germ[k];
    os << '\n';
  }
  for (std::size_t i = 0; i < segments_.size(); ++i) {
    const Segment& s = segments_[i];
    if (!s.alive) continue;
    os << "s" << i << " " << colour_letter(s.colour);
    if (s.is_free_loop())
      os << " loop";
    else
      os << " (" << s.ends[0].vertex << ':' << s.ends[0].slot << ")-(" << s.ends[1].vertex
         << ':' << s.ends[1].slot << ")";
    os << " regions " << s.region_left << '/' << s.region_right << " branches "
       << s.sigma_branch << '/' << s.tau_branch << '\n';
  }
  for (std::size_t i = 0; i < regions_.size(); ++i)
    if (regions_[i].alive)
      os << "r" << i << " chi " << regions_[i].chi << " ds " << regions_[i].ds_circles << '\n';
  return os.str();
}

bool check_weighting(const TrackPair& pair, Track t, const Weighting& w) {
  if (static_cast<int>(w.size()) != pair.branch_count(t)) return false;
  for (const auto& x : w)
    if (x.sign() < 0) return false;
  for (std::size_t vi = 0; vi < pair.vertices().size(); ++vi) {
    const Vertex& v = pair.vertices()[vi];
    if (!v.alive || v.kind == VertexKind::Crossing) continue;
    // Is this a switch of track t?
    bool branches_here;
    switch (v.kind) {
      case VertexKind::SharedSwitch:
        branches_here = true;
        break;
      case VertexKind::SigmaSwitch:
      case VertexKind::RedSwitch:
        branches_here = t == Track::Sigma;
        break;
      case VertexKind::TauSwitch:
      case VertexKind::BlueSwitch:
        branches_here = t == Track::Tau;
        break;
      default:
        branches_here = false;
        break;
    }
    if (!branches_here) continue;
    auto weight_at = [&](int slot) -> BigInt {
      int seg = v.germ[slot];
      const Segment& s = pair.segments()[seg];
      if (!in_track(s.colour, t)) return BigInt(0);
      return w[pair.branch_of(seg, t)];
    };
    if (weight_at(kSlotLarge) != weight_at(kSlotLeft) + weight_at(kSlotRight)) return false;
  }
  return true;
}

BigInt crossing_pairing(const WeightedPair& wp) {
  if (!wp.pair.is_crossing())
    throw std::invalid_argument("crossing_pairing: pair has non-crossing intersection points");
  BigInt total(0);
  for (std::size_t vi = 0; vi < wp.pair.vertices().size(); ++vi) {
    const Vertex& v = wp.pair.vertices()[vi];
    if (!v.alive || v.kind != VertexKind::Crossing) continue;
    int red = wp.pair.branch_of(v.germ[0], Track::Sigma);
    int blue = wp.pair.branch_of(v.germ[1], Track::Tau);
    total += wp.mu[red] * wp.nu[blue];
  }
  return total;
}

SwitchWeights switch_weights(const WeightedPair& wp, Track t, int vertex) {
  const Vertex& v = wp.pair.vertices()[vertex];
  auto weight_at = [&](int slot) -> BigInt {
    int seg = v.germ[slot];
    const Segment& s = wp.pair.segments()[seg];
    if (!in_track(s.colour, t)) return BigInt(0);
    const Weighting& w = t == Track::Sigma ? wp.mu : wp.nu;
    return w[wp.pair.branch_of(seg, t)];
  };
  return {weight_at(kSlotLarge), weight_at(kSlotLeft), weight_at(kSlotRight)};
}

// --- multicurve realization ----------------------------------------------

namespace {

// Strand position counted from the left as seen when moving toward end e.
long arriving_position(int e, long i, long w) { return e == 1 ? i : w - 1 - i; }
long segment_index(int e, long pos, long w) { return e == 1 ? pos : w - 1 - pos; }

}  // namespace

std::vector<Curve> realize_multicurve(const TrackPair& pair, Track t, const Weighting& w,
                                      long cap) {
  if (!check_weighting(pair, t, w)) throw std::invalid_argument("weighting not realizable");
  BigInt total(0);
  for (const auto& x : w) total += x;
  if (total > BigInt(cap)) throw std::invalid_argument("realize_multicurve: weight cap exceeded");

  auto weight_of_seg = [&](int seg) -> long {
    int b = pair.branch_of(seg, t);
    return b < 0 ? 0 : w[b].to_long();
  };

  // next(seg, strand, dir) -> (seg', strand', dir') across the vertex at
  // ends[dir]; returns nullopt at a free loop (stays on it).
  auto next = [&](int seg, long strand, int dir) -> CurveStep {
    const Segment& s = pair.segments()[seg];
    const SegmentEnd& end = s.ends[dir];
    const Vertex& v = pair.vertices()[end.vertex];
    const long w_in = weight_of_seg(seg);
    const long pos = arriving_position(dir, strand, w_in);  // 0 = leftmost
    int out_slot = -1;
    long out_pos = pos;
    if (v.kind == VertexKind::Crossing) {
      out_slot = (end.slot + 2) % 4;
    } else {
      const bool arriving_large = end.slot == kSlotLarge;
      // Track content of the smalls.
      auto in_t = [&](int slot) {
        return in_track(pair.segments()[v.germ[slot]].colour, t);
      };
      if (arriving_large) {
        const long w_left = in_t(kSlotLeft) ? weight_of_seg(v.germ[kSlotLeft]) : 0;
        // Positions keep left order: [0, w_left) continue left.
        if (in_t(kSlotLeft) && (pos < w_left || !in_t(kSlotRight))) {
          out_slot = kSlotLeft;
        } else {
          out_slot = kSlotRight;
          out_pos = pos - w_left;
        }
      } else if (end.slot == kSlotLeft) {
        // Merging: motion reverses, so the left small's strands occupy the
        // positions after the right small's block.
        out_slot = kSlotLarge;
        const long w_right = in_t(kSlotRight) ? weight_of_seg(v.germ[kSlotRight]) : 0;
        out_pos = pos + w_right;
      } else {
        out_slot = kSlotLarge;
      }
    }
    const int out_seg = v.germ[out_slot];
    const int out_end = pair.end_at(out_seg, end.vertex, out_slot);
    const long w_out = weight_of_seg(out_seg);
    // Leaving toward 1 - out_end with the from-left position preserved.
    const long out_strand = segment_index(1 - out_end, out_pos, w_out);
    return {out_seg, out_strand, 1 - out_end};
  };

  std::vector<Curve> curves;
  std::set<std::pair<int, long>> visited;
  for (std::size_t s0 = 0; s0 < pair.segments().size(); ++s0) {
    const Segment& s = pair.segments()[s0];
    if (!s.alive || !in_track(s.colour, t)) continue;
    const long ws = weight_of_seg(static_cast<int>(s0));
    for (long i = 0; i < ws; ++i) {
      if (visited.count({static_cast<int>(s0), i})) continue;
      Curve curve;
      if (s.is_free_loop()) {
        visited.insert({static_cast<int>(s0), i});
        curve.push_back({static_cast<int>(s0), i, 1});
        curves.push_back(std::move(curve));
        continue;
      }
      int seg = static_cast<int>(s0), dir = 1;
      long strand = i;
      while (!visited.count({seg, strand})) {
        visited.insert({seg, strand});
        curve.push_back({seg, strand, dir});
        CurveStep n = next(seg, strand, dir);
        seg = n.segment;
        strand = n.strand;
        dir = n.toward_end;
      }
      curves.push_back(std::move(curve));
    }
  }
  return curves;
}

}  // namespace tt
