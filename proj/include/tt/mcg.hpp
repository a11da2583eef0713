#pragma once

#include <string>
#include <vector>

#include "tt/coordinates.hpp"
#include "tt/intersection.hpp"

namespace tt {

// One word token: a generator name with an integer exponent. Plain tokens
// carry +-1; exponent words carry arbitrary integers.
struct WordToken {
  std::string gen;
  BigInt exponent = BigInt(1);
};
using Word = std::vector<WordToken>;

// Parses "Ta Tb^-1 Tc^123456" style words.
Word parse_word(const std::string& text);
std::string word_str(const Word& w);

using IntMatrix = std::vector<std::vector<BigInt>>;

IntMatrix identity_int_matrix(int d);
IntMatrix matmul(const IntMatrix& a, const IntMatrix& b);
bool int_matrix_equal(const IntMatrix& a, const IntMatrix& b);

// Product of a sequence of (elementary) matrices by halving recursion; the
// result equals the left-to-right sequential product. Works for arbitrary
// square matrices of matching size.
IntMatrix elementary_product(int d, const std::vector<IntMatrix>& ms);

// Zeckendorf representation: strictly decreasing, non-consecutive Fibonacci
// indices (F_2 = 1, F_3 = 2, ...) summing to p >= 1.
std::vector<int> zeckendorf(const BigInt& p);
BigInt fibonacci(int n);

// Expands E^p (E elementary, d >= 3) into a short sequence of generator
// elementaries E_{xy}(+-1) whose product is E^p. Length O(complexity(p)).
std::vector<IntMatrix> elementary_power(int d, const IntMatrix& e, const BigInt& p);

// Delta coordinates of the mapping class given by the word (rightmost token
// acts first), via the halving recursion over fast intersections.
DeltaMatrix dcoord(const Surface& s, const Word& w, const IntersectionOptions& opt = {});

// Action on H_1(S) as an integer matrix.
IntMatrix homology_action(const Surface& s, const Word& w);

// Word problem: homology gate, then the Delta-coordinate comparison.
bool is_identity(const Surface& s, const Word& w, const IntersectionOptions& opt = {});

// Exponent-word variant (identical pipeline; the base cases use the twist
// power tables directly).
bool exponent_is_identity(const Surface& s, const Word& w, const IntersectionOptions& opt = {});

}  // namespace tt
