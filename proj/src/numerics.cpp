#include "tt/numerics.hpp"

#include <ostream>
#include <sstream>
#include <stdexcept>

namespace tt {

void BigInt::throw_parse(std::string_view s) {
  throw std::invalid_argument("not a decimal integer: '" + std::string(s) + "'");
}

std::ostream& operator<<(std::ostream& os, const BigInt& v) { return os << v.str(); }

std::size_t complexity(const std::vector<BigInt>& v) {
  std::size_t total = 0;
  for (const auto& x : v) total += complexity(x);
  return total;
}

std::size_t complexity(const std::vector<std::vector<BigInt>>& m) {
  std::size_t total = 0;
  for (const auto& row : m) total += complexity(row);
  return total;
}

Interval operator*(const Interval& a, const Interval& b) {
  const BigInt a1 = a.hi() - BigInt(1);
  const BigInt b1 = b.hi() - BigInt(1);
  BigInt lo = a.lo() * b.lo();
  BigInt hi = lo;
  for (const BigInt& v : {a.lo() * b1, a1 * b.lo(), a1 * b1}) {
    if (v < lo) lo = v;
    if (v > hi) hi = v;
  }
  return Interval(std::move(lo), hi + BigInt(1));
}

std::string Interval::str() const {
  std::ostringstream os;
  os << '[' << lo_ << ',' << hi_ << ')';
  return os.str();
}

BigInt interval_fdiv(const Interval& i, const Interval& j) {
  if (interval_lt(j, i) != IntervalOrder::Less)
    throw std::invalid_argument("interval_fdiv: J < I required");
  if (j.lo().sign() <= 0) throw std::invalid_argument("interval_fdiv: J.lo >= 1 required");
  // n·J = [n·J.lo, n·(J.hi-1)+1), so n·J < I iff n·(J.hi-1) < I.lo.
  BigInt n = fdiv(i.lo() - BigInt(1), j.hi() - BigInt(1));
  if (n.sign() < 0) n = BigInt(0);
  return n;
}

std::optional<BigInt> interval_fdiv_determined(const Interval& i, const Interval& j) {
  if (j.lo().sign() <= 0 || i.lo().sign() < 0)
    throw std::invalid_argument("interval_fdiv_determined: need I >= 0, J >= 1");
  BigInt n_min = fdiv(i.lo(), j.hi() - BigInt(1));
  BigInt n_max = fdiv(i.hi() - BigInt(1), j.lo());
  if (n_min != n_max) return std::nullopt;
  return n_min;
}

}  // namespace tt
