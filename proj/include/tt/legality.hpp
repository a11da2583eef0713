#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace tt {

// Region boundary words: alternating colour letters and transitions, read
// cyclically (the final transition joins back to the first colour).
//   colours:     r (sigma only), b (tau only), g (shared track, or an arc on
//                the surface boundary / an unknown section)
//   transitions: - (smooth), L (corner), V (cusp)
struct BoundaryWord {
  struct Piece {
    char colour;      // r, b, g
    char transition;  // -, L, V  (transition after this piece)
  };
  std::vector<Piece> pieces;

  static BoundaryWord parse(std::string_view s);
  std::string str() const;

  std::size_t cusps() const;
  std::size_t corners() const;
};

// 4 * index for a disk region: 4 - 2*cusps - corners.
int index4(const BoundaryWord& w);
// 4 * index for a region of Euler characteristic chi.
int index4(const BoundaryWord& w, int chi);

// Colour changes along smooth runs of the cyclic word: a pair of unequal
// coloured letters (r/b) separated only by g's and smooth transitions.
std::size_t colour_changes(const BoundaryWord& w);

bool is_bigon(const BoundaryWord& w);
bool is_monochromatic(const BoundaryWord& w);

// Legal iff colour changes >= 1 for a cusped bigon, >= index4 otherwise.
bool is_legal(const BoundaryWord& w);

// Byte-exact helpers matching the reference enumeration semantics: colour
// changes are occurrences of "r-g-b" / "b-g-r" in w + w[:3].
namespace wordref {
int index4(const std::string& boundary);
std::size_t num_colour_changes(const std::string& boundary);
bool is_bigon(const std::string& boundary);
bool is_monochromatic(const std::string& boundary);
bool is_monochromatic_bigon(const std::string& boundary);
bool is_legal(const std::string& boundary);
}  // namespace wordref

}  // namespace tt
