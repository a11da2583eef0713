#include "tt/mcg.hpp"

#include <map>
#include <sstream>
#include <stdexcept>

namespace tt {

Word parse_word(const std::string& text) {
  Word w;
  std::istringstream in(text);
  std::string tok;
  while (in >> tok) {
    auto caret = tok.find('^');
    WordToken t;
    if (caret == std::string::npos) {
      t.gen = tok;
    } else {
      t.gen = tok.substr(0, caret);
      t.exponent = BigInt(tok.substr(caret + 1));
    }
    if (t.gen.empty()) throw std::invalid_argument("empty generator token");
    w.push_back(std::move(t));
  }
  return w;
}

std::string word_str(const Word& w) {
  std::ostringstream os;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) os << ' ';
    os << w[i].gen;
    if (w[i].exponent != 1) os << '^' << w[i].exponent;
  }
  return os.str();
}

IntMatrix identity_int_matrix(int d) {
  IntMatrix m(d, std::vector<BigInt>(d, BigInt(0)));
  for (int i = 0; i < d; ++i) m[i][i] = BigInt(1);
  return m;
}

IntMatrix matmul(const IntMatrix& a, const IntMatrix& b) {
  const std::size_t n = a.size(), k = b.size(), m = b.empty() ? 0 : b[0].size();
  IntMatrix out(n, std::vector<BigInt>(m, BigInt(0)));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t l = 0; l < k; ++l) {
      if (a[i][l].is_zero()) continue;
      for (std::size_t j = 0; j < m; ++j) {
        if (b[l][j].is_zero()) continue;
        out[i][j] += a[i][l] * b[l][j];
      }
    }
  return out;
}

bool int_matrix_equal(const IntMatrix& a, const IntMatrix& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].size() != b[i].size()) return false;
    for (std::size_t j = 0; j < a[i].size(); ++j)
      if (a[i][j] != b[i][j]) return false;
  }
  return true;
}

namespace {

IntMatrix product_range(const std::vector<IntMatrix>& ms, std::size_t lo, std::size_t hi) {
  if (lo == hi) throw std::logic_error("empty range");
  if (hi - lo == 1) return ms[lo];
  std::size_t mid = lo + (hi - lo) / 2;
  return matmul(product_range(ms, lo, mid), product_range(ms, mid, hi));
}

}  // namespace

IntMatrix elementary_product(int d, const std::vector<IntMatrix>& ms) {
  if (ms.empty()) return identity_int_matrix(d);
  return product_range(ms, 0, ms.size());
}

BigInt fibonacci(int n) {
  // F_1 = F_2 = 1.
  if (n <= 0) throw std::invalid_argument("fibonacci index must be positive");
  BigInt a(1), b(1);  // F_1, F_2
  for (int i = 2; i < n; ++i) {
    BigInt c = a + b;
    a = std::move(b);
    b = std::move(c);
  }
  return n == 1 ? a : b;
}

std::vector<int> zeckendorf(const BigInt& p) {
  if (p.sign() <= 0) throw std::invalid_argument("zeckendorf needs p >= 1");
  // Build Fibonacci numbers up to p.
  std::vector<BigInt> fib = {BigInt(1), BigInt(1)};  // F_1, F_2
  while (fib.back() <= p) fib.push_back(fib[fib.size() - 1] + fib[fib.size() - 2]);
  std::vector<int> out;
  BigInt rest = p;
  for (int n = static_cast<int>(fib.size()); n >= 2 && rest.sign() > 0; --n) {
    const BigInt& f = fib[n - 1];  // F_n
    if (f <= rest) {
      out.push_back(n);
      rest -= f;
      --n;  // skip the consecutive index
    }
  }
  if (rest.sign() != 0) throw std::logic_error("zeckendorf: greedy residue");
  return out;
}

namespace {

IntMatrix elementary(int d, int i, int j, const BigInt& c) {
  IntMatrix m = identity_int_matrix(d);
  m[i][j] = c;
  return m;
}

}  // namespace

std::vector<IntMatrix> elementary_power(int d, const IntMatrix& e, const BigInt& p) {
  if (d < 3) throw std::invalid_argument("elementary_power needs d >= 3");
  int ei = -1, ej = -1;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      if (i == j) {
        if (e[i][j] != 1) throw std::invalid_argument("not elementary");
        continue;
      }
      if (!e[i][j].is_zero()) {
        if (ei >= 0) throw std::invalid_argument("not elementary");
        ei = i;
        ej = j;
      }
    }
  if (p.is_zero() || ei < 0) return {};
  if (p == 1) return {e};
  // E^p = E_{ij}(c p); expand |p| into non-consecutive Fibonacci numbers and
  // emit one elementary factor per term, E_{ij}(sign(p) c F_n).
  const BigInt& c = e[ei][ej];
  const int sign = p.sign();
  std::vector<IntMatrix> out;
  for (int n : zeckendorf(p.abs())) {
    BigInt entry = c * fibonacci(n);
    out.push_back(elementary(d, ei, ej, sign > 0 ? entry : -entry));
  }
  return out;
}

// --- word problem ---------------------------------------------------------------

namespace {

DeltaMatrix dcoord_range(const SurfaceSystem& sys, const Word& w, std::size_t lo,
                         std::size_t hi, const IntersectionOptions& opt) {
  if (lo == hi) return sys.identity_matrix();
  if (hi - lo == 1) return sys.twist_matrix(w[lo].gen, w[lo].exponent);
  // The word acts rightmost-first: w = f_n ... f_1 with f_1 = w.back().
  std::size_t mid = lo + (hi - lo) / 2;
  DeltaMatrix m = dcoord_range(sys, w, lo, mid, opt);   // g: the later letters
  DeltaMatrix n = dcoord_range(sys, w, mid, hi, opt);   // h: the earlier letters
  const int size = sys.delta_size();
  DeltaMatrix out(size, std::vector<BigInt>(size, BigInt(0)));
  for (int d = 0; d < size; ++d) {
    DeltaVector row{m[d]};  // Delta(g^{-1}(delta_d))
    for (int e = 0; e < size; ++e) {
      DeltaVector col{{}};
      col.e.reserve(size);
      for (int i = 0; i < size; ++i) col.e.push_back(n[i][e]);  // Delta(h(eps_e))
      out[d][e] = intersection_from_delta(sys.surface(), row, col, false, opt);
    }
  }
  return out;
}

}  // namespace

DeltaMatrix dcoord(const Surface& s, const Word& w, const IntersectionOptions& opt) {
  return dcoord_range(system_for(s), w, 0, w.size(), opt);
}

IntMatrix homology_action(const Surface& s, const Word& w) {
  const SurfaceSystem& sys = system_for(s);
  std::vector<IntMatrix> ms;
  ms.reserve(w.size());
  for (const WordToken& t : w) {
    if (t.exponent.is_zero()) continue;
    const bool inv = t.exponent.sign() < 0;
    IntMatrix m = sys.homology_matrix(t.gen, inv);
    // Twist actions are transvections: M = I + N with N^2 = 0, so
    // M^k = I + k N.
    BigInt k = t.exponent.abs();
    if (k != 1) {
      IntMatrix n = m;
      const int d = static_cast<int>(m.size());
      for (int i = 0; i < d; ++i) n[i][i] -= BigInt(1);
      IntMatrix n2 = matmul(n, n);
      bool nilpotent = true;
      for (const auto& row : n2)
        for (const auto& x : row)
          if (!x.is_zero()) nilpotent = false;
      if (nilpotent) {
        for (int i = 0; i < d; ++i)
          for (int j = 0; j < d; ++j) m[i][j] = (i == j ? BigInt(1) : BigInt(0)) + k * n[i][j];
      } else {
        // Fall back to square-and-multiply.
        IntMatrix base = m;
        IntMatrix acc = identity_int_matrix(d);
        BigInt e2 = k;
        while (e2.sign() > 0) {
          if (fdiv(e2, BigInt(2)) * BigInt(2) != e2) acc = matmul(acc, base);
          base = matmul(base, base);
          e2 = e2.fdiv2exp(1);
        }
        m = acc;
      }
    }
    ms.push_back(std::move(m));
  }
  const int rank = sys.homology_rank();
  return elementary_product(rank, ms);
}

bool is_identity(const Surface& s, const Word& w, const IntersectionOptions& opt) {
  const SurfaceSystem& sys = system_for(s);
  IntMatrix h = homology_action(s, w);
  if (!int_matrix_equal(h, identity_int_matrix(sys.homology_rank()))) return false;
  return matrix_equal(dcoord(s, w, opt), sys.identity_matrix());
}

bool exponent_is_identity(const Surface& s, const Word& w, const IntersectionOptions& opt) {
  return is_identity(s, w, opt);
}

}  // namespace tt
