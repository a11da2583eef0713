#pragma once

#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "tt/moves.hpp"
#include "tt/numerics.hpp"
#include "tt/traintrack.hpp"

namespace tt {

// Intersection numbers of a multicurve against the fixed curve system Delta
// (cuffs, duals, double duals), in the fixed ordering P then Q then R.
struct DeltaVector {
  std::vector<BigInt> e;

  friend bool operator==(const DeltaVector& a, const DeltaVector& b) { return a.e == b.e; }
};

// Entry (delta, epsilon) = i(delta, f(epsilon)).
using DeltaMatrix = std::vector<std::vector<BigInt>>;

bool matrix_equal(const DeltaMatrix& a, const DeltaMatrix& b);
DeltaMatrix matrix_transpose(const DeltaMatrix& m);
std::string matrix_str(const DeltaMatrix& m);

// Intersection/twist coordinates per cuff. For m = 0 the curve contributes
// s parallel cuff copies; otherwise t counts whole twists and s the residue
// (our documented normalization; injective together with m).
struct MstEntry {
  BigInt m, s, t;
};
using MstVector = std::vector<MstEntry>;

// Per-surface coordinate backend: realizability, standard pairs, twist
// matrices and homology actions for the shipped generator set.
class SurfaceSystem {
 public:
  virtual ~SurfaceSystem() = default;
  virtual Surface surface() const = 0;
  int delta_size() const { return 3 * surface().cuffs(); }

  // Names of the shipped twist generators, e.g. "Ta", "Tb".
  virtual std::vector<std::string> generator_names() const = 0;
  // Delta coordinates of the system curves themselves (the columns of the
  // identity matrix).
  virtual DeltaMatrix identity_matrix() const = 0;
  // Reason a vector is unrealizable, or nullopt when fine.
  virtual std::optional<std::string> validate(const DeltaVector& dv,
                                              bool allow_empty = true) const = 0;
  // Tight clean pair carrying both multicurves (possibly after applying a
  // common mapping class, which leaves all intersection numbers unchanged).
  virtual WeightedPair standard_pair(const DeltaVector& a, const DeltaVector& b) const = 0;
  virtual MstVector to_mst(const DeltaVector& dv) const = 0;
  // Delta(T_zeta^k) for a shipped generator name.
  virtual DeltaMatrix twist_matrix(const std::string& gen, const BigInt& k) const = 0;
  virtual int homology_rank() const = 0;
  virtual std::vector<std::vector<BigInt>> homology_matrix(const std::string& gen,
                                                           bool inverse) const = 0;
  // Exact closed-form intersection number where the surface admits one
  // (used as an independent oracle in tests); nullopt otherwise.
  virtual std::optional<BigInt> intersection_oracle(const DeltaVector& a,
                                                    const DeltaVector& b) const {
    (void)a;
    (void)b;
    return std::nullopt;
  }
  // Coordinates of additional named curves a surface ships (for example the
  // through-handle curve "b" on the two-holed torus).
  virtual std::optional<DeltaVector> named_curve(const std::string& name) const {
    (void)name;
    return std::nullopt;
  }
};

bool surface_supported(const Surface& s);
const SurfaceSystem& system_for(const Surface& s);

// Spec-level free functions.
DeltaMatrix delta_identity(const Surface& s);
DeltaMatrix twist_power_delta(const Surface& s, const std::string& zeta, const BigInt& k);
MstVector delta_to_mst(const Surface& s, const DeltaVector& dv);
WeightedPair standard_pair_from_delta(const Surface& s, const DeltaVector& a,
                                      const DeltaVector& b);
bool validate_delta(const Surface& s, const DeltaVector& dv, bool allow_empty = true);

// Curve files: header line "surface g b", then one multicurve per line as
// whitespace-separated decimal integers in the fixed Delta ordering.
struct CurveFile {
  Surface surface;
  std::vector<DeltaVector> curves;
};
CurveFile parse_curve_file(std::istream& in);

}  // namespace tt
