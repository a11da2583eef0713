#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tt/legality.hpp"
#include "tt/numerics.hpp"

namespace tt {

// Connected oriented surface S_{g,b} with chi <= -2.
struct Surface {
  int genus = 0;
  int boundary = 0;

  Surface(int g, int b);

  int chi() const { return 2 - 2 * genus - boundary; }
  int cuffs() const { return 3 * genus - 3 + boundary; }
  int pants() const { return 2 * genus - 2 + boundary; }
  long branch_bound() const { return 6L * cuffs(); }  // B
  long const_C() const {
    long B = branch_bound();
    return 16L * B * B * B * B;
  }
  long const_D() const { return const_C() + 1; }
  long const_E() const { return 2 * const_D(); }
  long const_F() const { return 7 * branch_bound() * const_E(); }

  friend bool operator==(const Surface& a, const Surface& b) {
    return a.genus == b.genus && a.boundary == b.boundary;
  }
};

enum class Colour : std::uint8_t { Red, Blue, Shared };  // sigma / tau / both

inline bool has_sigma(Colour c) { return c != Colour::Blue; }
inline bool has_tau(Colour c) { return c != Colour::Red; }
inline char colour_letter(Colour c) {
  return c == Colour::Red ? 'r' : c == Colour::Blue ? 'b' : 'g';
}

// Which of the two tracks a statement refers to.
enum class Track : std::uint8_t { Sigma, Tau };
inline Track other(Track t) { return t == Track::Sigma ? Track::Tau : Track::Sigma; }
inline bool in_track(Colour c, Track t) { return t == Track::Sigma ? has_sigma(c) : has_tau(c); }

// Vertex kinds. Switch-like kinds use germ slots (0 large, 1 right small,
// 2 left small) listed in counterclockwise ribbon order; left/right smalls
// are named relative to travel from the large branch-end into the smalls.
// Crossings use four slots in ccw order; slots 0,2 carry the red strand,
// 1,3 the blue strand.
enum class VertexKind : std::uint8_t {
  Crossing,
  Divergence,    // large shared, smalls red and blue
  SigmaSwitch,   // large shared, smalls shared and red
  TauSwitch,     // large shared, smalls shared and blue
  SharedSwitch,  // all germs shared
  RedSwitch,     // plain switch of sigma away from tau
  BlueSwitch,    // plain switch of tau away from sigma
};

inline bool is_switch_kind(VertexKind k) { return k != VertexKind::Crossing; }
inline int germ_count(VertexKind k) { return k == VertexKind::Crossing ? 4 : 3; }

constexpr int kSlotLarge = 0;
constexpr int kSlotRight = 1;
constexpr int kSlotLeft = 2;

struct SegmentEnd {
  int vertex = -1;  // -1: free loop (both ends unset)
  int slot = -1;
  bool attached() const { return vertex >= 0; }
};

struct Segment {
  Colour colour = Colour::Red;
  std::array<SegmentEnd, 2> ends;  // oriented end 0 -> end 1
  int region_left = -1;            // region on the left of the orientation
  int region_right = -1;
  int sigma_branch = -1;  // branch ids; -1 when the track is absent
  int tau_branch = -1;
  bool alive = true;

  bool is_free_loop() const { return !ends[0].attached(); }
};

struct Vertex {
  VertexKind kind = VertexKind::Crossing;
  std::array<int, 4> germ = {-1, -1, -1, -1};  // segment ids, ccw order
  bool alive = true;
};

struct Region {
  int chi = 1;
  int ds_circles = 0;  // boundary circles of S inside this region
  bool alive = true;
};

// A step of a region walk: a segment traversed in a direction, and the
// transition at the vertex reached.
struct WalkStep {
  int segment;
  int toward_end;  // 1: moving end0 -> end1
  char transition;
};

struct FaceWalk {
  std::vector<WalkStep> steps;
  int region = -1;  // region id claimed by the traversed sides
  bool consistent = true;
};

// Combinatorial embedded pair of train tracks: a bicoloured ribbon graph
// whose vertices classify the intersection points of sigma and tau, plus a
// census of complementary regions.
class TrackPair {
 public:
  explicit TrackPair(Surface s) : surface_(s) {}

  const Surface& surface() const { return surface_; }

  // --- construction surgery -------------------------------------------
  int add_region(int chi, int ds_circles = 0);
  int add_vertex(VertexKind kind);
  // Creates a segment; ends may be filled later via attach().
  int add_segment(Colour colour, int region_left, int region_right);
  void attach(int segment, int which_end, int vertex, int slot);
  void detach(int segment, int which_end);
  void kill_segment(int segment);
  void kill_vertex(int vertex);
  void kill_region(int region);
  // Merge region b into a (they become one region with the given chi).
  void merge_regions(int a, int b, int merged_chi);

  std::vector<Vertex>& vertices() { return vertices_; }
  std::vector<Segment>& segments() { return segments_; }
  std::vector<Region>& regions() { return regions_; }
  const std::vector<Vertex>& vertices() const { return vertices_; }
  const std::vector<Segment>& segments() const { return segments_; }
  const std::vector<Region>& regions() const { return regions_; }

  int segment_at(int vertex, int slot) const { return vertices_[vertex].germ[slot]; }
  // The end index (0/1) of `segment` attached at (vertex, slot).
  int end_at(int segment, int vertex, int slot) const;

  // Region in the corner between ccw-consecutive germs i and i+1 of v.
  int corner_region(int vertex, int ccw_index) const;
  // Region on the given side of a walk along `segment` toward `toward_end`.
  int side_region(int segment, int toward_end, bool left_of_motion) const;
  void set_side_region(int segment, int toward_end, bool left_of_motion, int region);

  // --- branches ----------------------------------------------------------
  // Recomputes branch ids for both tracks; returns branch counts.
  // Branch ids are assigned in segment-id order of each branch's least
  // segment, so equal structures get equal numberings.
  std::pair<int, int> recompute_branches();
  int branch_count(Track t) const { return t == Track::Sigma ? n_sigma_ : n_tau_; }
  int branch_of(int segment, Track t) const {
    const Segment& s = segments_[segment];
    return t == Track::Sigma ? s.sigma_branch : s.tau_branch;
  }

  // Slot pairs through which a track runs smoothly at a vertex (no switch of
  // that track there). At most one pair per track per vertex.
  struct SmoothLink {
    Track track;
    int slot_a, slot_b;
  };
  std::vector<SmoothLink> smooth_links(int vertex) const;

  // --- analysis ----------------------------------------------------------
  std::vector<FaceWalk> face_walks() const;
  BoundaryWord walk_word(const FaceWalk& w) const;

  // Shared branches of the pair = live shared segments.
  std::vector<int> shared_segments() const;
  int shared_switch_count() const;
  long tightness() const;
  bool is_crossing() const;        // no non-crossing intersection points
  bool has_isolated_shared() const;  // shared segment with two divergence ends
  bool is_clean() const { return !has_isolated_shared(); }

  // Structural validation (germ wiring, colours, region side consistency,
  // Euler census). Returns an error description, or nullopt when valid.
  std::optional<std::string> validate() const;
  // Full tightness check: validate() plus legality of every disk region.
  std::optional<std::string> check_tight() const;

  // Region data is verification metadata. Builders that do not track exact
  // region topology (the multi-pants assemblers) mark it non-authoritative;
  // validate()/check_tight() then check the graph structure only.
  bool regions_authoritative() const { return regions_authoritative_; }
  void set_regions_authoritative(bool v) { regions_authoritative_ = v; }

  std::string dump() const;  // debug serialization

  int live_vertex_count() const;
  int live_segment_count() const;
  int free_loop_count() const;

 private:
  Surface surface_;
  std::vector<Vertex> vertices_;
  std::vector<Segment> segments_;
  std::vector<Region> regions_;
  int n_sigma_ = 0, n_tau_ = 0;
  bool regions_authoritative_ = true;
};

// Weights on the branches of one track.
using Weighting = std::vector<BigInt>;

struct WeightedPair {
  TrackPair pair;
  Weighting mu;  // indexed by sigma branch ids
  Weighting nu;  // indexed by tau branch ids
};

// Nonnegativity plus the switch equality at every switch of the track.
bool check_weighting(const TrackPair& pair, Track t, const Weighting& w);

// Bilinear crossing pairing <mu, nu> = sum over crossings of mu * nu.
// Requires a crossing pair.
BigInt crossing_pairing(const WeightedPair& wp);

// Exact weights of the track at the two smalls of a switch vertex, for the
// track `t`. The large germ's weight equals their sum when the track
// branches; when it passes smoothly the weight rides through one small.
struct SwitchWeights {
  BigInt large, left, right;
};
SwitchWeights switch_weights(const WeightedPair& wp, Track t, int vertex);

// --- multicurve realization (oracle support) -----------------------------

// One strand of the realized multicurve: (segment, strand index, direction).
struct CurveStep {
  int segment;
  long strand;     // 0-based within the segment cable, counted from the left
  int toward_end;  // 1: moving end0 -> end1
};
using Curve = std::vector<CurveStep>;

// Traces the mu(b) parallel copies of each branch through the switches.
// total weight must be <= cap.
std::vector<Curve> realize_multicurve(const TrackPair& pair, Track t, const Weighting& w,
                                      long cap = 64);

// Replaces each branch by parallel copies (weights give multiplicities) and
// returns the arrangement of the two resulting multicurves as a TrackPair
// containing only crossings and free loops. Requires a crossing pair.
TrackPair cable_arrangement(const WeightedPair& wp, long cap = 64);

}  // namespace tt
