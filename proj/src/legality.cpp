#include "tt/legality.hpp"

#include <algorithm>
#include <stdexcept>

namespace tt {

BoundaryWord BoundaryWord::parse(std::string_view s) {
  if (s.size() % 2 != 0) throw std::invalid_argument("boundary word has odd length");
  BoundaryWord w;
  for (std::size_t i = 0; i < s.size(); i += 2) {
    char c = s[i], t = s[i + 1];
    if (c != 'r' && c != 'b' && c != 'g')
      throw std::invalid_argument(std::string("bad colour '") + c + "'");
    if (t != '-' && t != 'L' && t != 'V')
      throw std::invalid_argument(std::string("bad transition '") + t + "'");
    w.pieces.push_back({c, t});
  }
  return w;
}

std::string BoundaryWord::str() const {
  std::string s;
  for (const auto& p : pieces) {
    s += p.colour;
    s += p.transition;
  }
  return s;
}

std::size_t BoundaryWord::cusps() const {
  return std::count_if(pieces.begin(), pieces.end(),
                       [](const Piece& p) { return p.transition == 'V'; });
}

std::size_t BoundaryWord::corners() const {
  return std::count_if(pieces.begin(), pieces.end(),
                       [](const Piece& p) { return p.transition == 'L'; });
}

int index4(const BoundaryWord& w) { return index4(w, 1); }

int index4(const BoundaryWord& w, int chi) {
  return 4 * chi - 2 * static_cast<int>(w.cusps()) - static_cast<int>(w.corners());
}

std::size_t colour_changes(const BoundaryWord& w) {
  const std::size_t n = w.pieces.size();
  if (n == 0) return 0;
  // Walk the cyclic word; within smooth stretches track the last r/b seen.
  // Count a change for each unequal coloured pair separated only by g's.
  std::size_t changes = 0;
  char last = 0;  // last coloured letter in the current smooth stretch
  std::size_t start = 0;
  // Find a non-smooth seam to start from, if any.
  for (std::size_t i = 0; i < n; ++i)
    if (w.pieces[i].transition != '-') {
      start = i + 1;
      break;
    }
  bool all_smooth = true;
  for (const auto& p : w.pieces)
    if (p.transition != '-') all_smooth = false;

  if (!all_smooth) {
    for (std::size_t k = 0; k < n; ++k) {
      const auto& p = w.pieces[(start + k) % n];
      if (p.colour != 'g') {
        if (last != 0 && last != p.colour) ++changes;
        last = p.colour;
      }
      if (p.transition != '-') last = 0;  // stretch ends
    }
    return changes;
  }
  // Entirely smooth boundary: project to r/b letters and count cyclic flips.
  std::vector<char> letters;
  for (const auto& p : w.pieces)
    if (p.colour != 'g') letters.push_back(p.colour);
  if (letters.size() < 2) return 0;
  for (std::size_t i = 0; i < letters.size(); ++i)
    if (letters[i] != letters[(i + 1) % letters.size()]) ++changes;
  return changes;
}

bool is_bigon(const BoundaryWord& w) { return index4(w) == 0 && w.corners() == 0; }

bool is_monochromatic(const BoundaryWord& w) {
  bool has_r = false, has_b = false;
  for (const auto& p : w.pieces) {
    has_r |= p.colour == 'r';
    has_b |= p.colour == 'b';
  }
  return !has_r || !has_b;
}

bool is_legal(const BoundaryWord& w) {
  const int need = is_bigon(w) ? 1 : index4(w);
  return static_cast<int>(colour_changes(w)) >= need;
}

namespace wordref {

namespace {
std::size_t count_substr(const std::string& hay, const std::string& needle) {
  std::size_t count = 0, pos = 0;
  while ((pos = hay.find(needle, pos)) != std::string::npos) {
    ++count;
    ++pos;
  }
  return count;
}
}  // namespace

int index4(const std::string& boundary) {
  return 4 - 2 * static_cast<int>(count_substr(boundary, "V")) -
         static_cast<int>(count_substr(boundary, "L"));
}

std::size_t num_colour_changes(const std::string& boundary) {
  std::string wrapped = boundary + boundary.substr(0, 3);
  return count_substr(wrapped, "r-g-b") + count_substr(wrapped, "b-g-r");
}

bool is_bigon(const std::string& boundary) {
  return index4(boundary) == 0 && boundary.find('L') == std::string::npos;
}

bool is_monochromatic(const std::string& boundary) {
  return boundary.find('r') == std::string::npos || boundary.find('b') == std::string::npos;
}

bool is_monochromatic_bigon(const std::string& boundary) {
  return is_bigon(boundary) && is_monochromatic(boundary);
}

bool is_legal(const std::string& boundary) {
  const int need = is_bigon(boundary) ? 1 : index4(boundary);
  return static_cast<int>(num_colour_changes(boundary)) >= need;
}

}  // namespace wordref

}  // namespace tt
