#pragma once

#include <algorithm>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "quatmatch/exactnum/rational.hpp"
#include "quatmatch/quatalg/algebra.hpp"

namespace quatmatch::orders {

using exactnum::Integer;
using exactnum::Rational;
using quatalg::QuatElement;
using quatalg::QuaternionAlgebra;

using IntRow = std::vector<Integer>;
using IntMatrix = std::vector<IntRow>;
using RatMatrix = std::vector<std::vector<Rational>>;

/// Row Hermite normal form of an integer matrix: nonzero rows only, pivots
/// strictly increasing and positive, entries above a pivot reduced into
/// [0, pivot).
inline IntMatrix hermite_normal_form(IntMatrix rows) {
  if (rows.empty()) return rows;
  std::size_t ncols = rows[0].size();
  std::size_t r = 0;
  for (std::size_t col = 0; col < ncols && r < rows.size(); ++col) {
    for (;;) {
      std::size_t best = rows.size();
      for (std::size_t i = r; i < rows.size(); ++i)
        if (rows[i][col] != 0 && (best == rows.size() || abs(rows[i][col]) < abs(rows[best][col])))
          best = i;
      if (best == rows.size()) break;
      std::swap(rows[r], rows[best]);
      bool done = true;
      for (std::size_t i = r + 1; i < rows.size(); ++i) {
        if (rows[i][col] == 0) continue;
        Integer q = exactnum::floor_div(rows[i][col], rows[r][col]);
        for (std::size_t c = col; c < ncols; ++c) rows[i][c] -= q * rows[r][c];
        if (rows[i][col] != 0) done = false;
      }
      if (done) break;
    }
    if (rows[r][col] == 0) continue;
    if (rows[r][col] < 0)
      for (auto &v : rows[r]) v = -v;
    for (std::size_t i = 0; i < r; ++i) {
      Integer q = exactnum::floor_div(rows[i][col], rows[r][col]);
      if (q != 0)
        for (std::size_t c = col; c < ncols; ++c) rows[i][c] -= q * rows[r][c];
    }
    ++r;
  }
  rows.resize(r);
  return rows;
}

inline Rational determinant(RatMatrix m) {
  std::size_t n = m.size();
  Rational det = 1;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && m[piv][col] == 0) ++piv;
    if (piv == n) return 0;
    if (piv != col) {
      std::swap(m[piv], m[col]);
      det = -det;
    }
    det *= m[col][col];
    for (std::size_t r = col + 1; r < n; ++r) {
      if (m[r][col] == 0) continue;
      Rational f = m[r][col] / m[col][col];
      for (std::size_t c = col; c < n; ++c) m[r][c] -= f * m[col][c];
    }
  }
  return det;
}

inline RatMatrix inverse(RatMatrix m) {
  std::size_t n = m.size();
  RatMatrix inv(n, std::vector<Rational>(n, Rational(0)));
  for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && m[piv][col] == 0) ++piv;
    if (piv == n) throw PreconditionError("inverse: singular matrix");
    std::swap(m[piv], m[col]);
    std::swap(inv[piv], inv[col]);
    Rational s = 1 / m[col][col];
    for (std::size_t c = 0; c < n; ++c) {
      m[col][c] *= s;
      inv[col][c] *= s;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || m[r][col] == 0) continue;
      Rational f = m[r][col];
      for (std::size_t c = 0; c < n; ++c) {
        m[r][c] -= f * m[col][c];
        inv[r][c] -= f * inv[col][c];
      }
    }
  }
  return inv;
}

/// Full-rank Z-lattice in a quaternion algebra, stored canonically as
/// (1/den) * HNF with gcd(den, entries) = 1.
class OrderLattice {
public:
  OrderLattice(QuaternionAlgebra A, const std::vector<QuatElement> &gens) : alg_(std::move(A)) {
    den_ = 1;
    for (const auto &g : gens)
      for (const auto &v : g.c) den_ = exactnum::lcm(den_, v.get_den());
    IntMatrix rows;
    rows.reserve(gens.size());
    for (const auto &g : gens) {
      IntRow row(4);
      bool nz = false;
      for (std::size_t i = 0; i < 4; ++i) {
        Rational s = g[i] * den_;
        row[i] = s.get_num();
        nz = nz || row[i] != 0;
      }
      if (nz) rows.push_back(std::move(row));
    }
    hnf_ = hermite_normal_form(std::move(rows));
    if (hnf_.size() != 4) throw PreconditionError("lattice generators do not span a rank-4 lattice");
    normalize();
  }

  const QuaternionAlgebra &algebra() const { return alg_; }
  const Integer &denominator() const { return den_; }
  const IntMatrix &hnf() const { return hnf_; }

  /// Level data, set when the lattice is a maximal or Eichler order.
  std::int64_t level_D = 0, level_N = 0;

  std::vector<QuatElement> basis() const {
    std::vector<QuatElement> b(4);
    for (std::size_t r = 0; r < 4; ++r)
      for (std::size_t c = 0; c < 4; ++c) b[r][c] = exactnum::make_rational(hnf_[r][c], den_);
    return b;
  }

  QuatElement basis_element(std::size_t r) const {
    QuatElement e;
    for (std::size_t c = 0; c < 4; ++c) e[c] = exactnum::make_rational(hnf_[r][c], den_);
    return e;
  }

  /// gram[r][s] = trd(e_r conj(e_s))
  RatMatrix gram() const {
    auto b = basis();
    RatMatrix g(4, std::vector<Rational>(4));
    for (std::size_t r = 0; r < 4; ++r)
      for (std::size_t s = r; s < 4; ++s) g[r][s] = g[s][r] = alg_.bilinear(b[r], b[s]);
    return g;
  }

  Rational gram_determinant() const { return determinant(gram()); }

  /// Coordinates of x in the stored basis, if x lies in the lattice.
  std::optional<std::vector<Integer>> coordinates(const QuatElement &x) const {
    auto rc = rational_coordinates(x);
    std::vector<Integer> out(4);
    for (std::size_t i = 0; i < 4; ++i) {
      if (rc[i].get_den() != 1) return std::nullopt;
      out[i] = rc[i].get_num();
    }
    return out;
  }

  std::vector<Rational> rational_coordinates(const QuatElement &x) const {
    // x * den = sum_r y_r hnf[r]; hnf is upper triangular
    std::vector<Rational> t(4), y(4);
    for (std::size_t c = 0; c < 4; ++c) t[c] = x[c] * den_;
    for (std::size_t r = 0; r < 4; ++r) {
      y[r] = t[r] / Rational(hnf_[r][r]);
      for (std::size_t c = r; c < 4; ++c) t[c] -= y[r] * hnf_[r][c];
    }
    return y;
  }

  bool contains(const QuatElement &x) const { return coordinates(x).has_value(); }

  bool contains(const OrderLattice &other) const {
    for (const auto &e : other.basis())
      if (!contains(e)) return false;
    return true;
  }

  QuatElement element(const std::vector<Integer> &coords) const {
    QuatElement x;
    for (std::size_t r = 0; r < 4; ++r)
      for (std::size_t c = 0; c < 4; ++c) x[c] += Rational(coords[r] * hnf_[r][c]);
    for (auto &v : x.c) v /= Rational(den_);
    return x;
  }

  bool is_order() const {
    if (!contains(QuatElement::scalar(1))) return false;
    auto b = basis();
    for (const auto &x : b)
      for (const auto &y : b)
        if (!contains(alg_.mul(x, y))) return false;
    return true;
  }

  /// Q(x) = nrd(x) integral on the lattice; equivalently the Gram matrix is
  /// integral with even diagonal.
  bool is_even_integral() const {
    auto g = gram();
    for (std::size_t r = 0; r < 4; ++r)
      for (std::size_t s = 0; s < 4; ++s) {
        if (g[r][s].get_den() != 1) return false;
        if (r == s && g[r][r].get_num() % 2 != 0) return false;
      }
    return true;
  }

  std::string canonical_text() const {
    std::ostringstream os;
    os << den_.get_str();
    for (const auto &row : hnf_)
      for (const auto &v : row) os << ' ' << v.get_str();
    return os.str();
  }

  friend bool operator==(const OrderLattice &x, const OrderLattice &y) {
    return x.alg_ == y.alg_ && x.den_ == y.den_ && x.hnf_ == y.hnf_;
  }

  static OrderLattice from_canonical_text(const QuaternionAlgebra &A, const std::string &text) {
    std::istringstream is(text);
    std::string tok;
    std::vector<Integer> vals;
    while (is >> tok) {
      Integer v;
      if (v.set_str(tok, 10) != 0) throw PreconditionError("lattice text: bad integer '" + tok + "'");
      vals.push_back(v);
    }
    if (vals.size() != 17 || vals[0] <= 0) throw PreconditionError("lattice text: expected 17 integers");
    std::vector<QuatElement> gens(4);
    for (std::size_t r = 0; r < 4; ++r)
      for (std::size_t c = 0; c < 4; ++c) gens[r][c] = exactnum::make_rational(vals[1 + 4 * r + c], vals[0]);
    OrderLattice L(A, gens);
    if (L.canonical_text() != text) throw PreconditionError("lattice text: not in canonical form");
    return L;
  }

private:
  void normalize() {
    Integer g = den_;
    for (const auto &row : hnf_)
      for (const auto &v : row) g = exactnum::gcd(g, v);
    if (g != 1) {
      den_ /= g;
      for (auto &row : hnf_)
        for (auto &v : row) v /= g;
    }
  }

  QuaternionAlgebra alg_;
  Integer den_;
  IntMatrix hnf_;
};

inline OrderLattice lattice_sum(const OrderLattice &L, const OrderLattice &M) {
  auto g = L.basis();
  for (const auto &e : M.basis()) g.push_back(e);
  return OrderLattice(L.algebra(), g);
}

inline OrderLattice lattice_scale(const OrderLattice &L, const Rational &s) {
  auto g = L.basis();
  for (auto &e : g) e *= s;
  return OrderLattice(L.algebra(), g);
}

/// Z-span of all products x y, x in L, y in M.
inline OrderLattice lattice_product(const OrderLattice &L, const OrderLattice &M) {
  std::vector<QuatElement> g;
  auto bl = L.basis(), bm = M.basis();
  for (const auto &x : bl)
    for (const auto &y : bm) g.push_back(L.algebra().mul(x, y));
  return OrderLattice(L.algebra(), g);
}

inline OrderLattice lattice_conjugate(const OrderLattice &L) {
  auto g = L.basis();
  for (auto &e : g) e = L.algebra().conjugate(e);
  return OrderLattice(L.algebra(), g);
}

/// L^# = {x : trd(x conj(y)) in Z for all y in L}
inline OrderLattice dual_lattice(const OrderLattice &L) {
  auto g = L.gram();
  if (determinant(g) == 0) throw PreconditionError("dual_lattice: degenerate Gram matrix");
  auto gi = inverse(g);
  auto b = L.basis();
  std::vector<QuatElement> d(4);
  for (std::size_t r = 0; r < 4; ++r)
    for (std::size_t s = 0; s < 4; ++s) d[r] += b[s] * gi[r][s];
  return OrderLattice(L.algebra(), d);
}

/// [L^# : L] for an integral lattice.
inline Integer dual_index(const OrderLattice &L) {
  Rational d = abs(L.gram_determinant());
  require(d.get_den() == 1, "dual_index: lattice is not integral");
  return d.get_num();
}

/// Generator of the fractional ideal spanned by the values of nrd on L.
inline Rational lattice_norm(const OrderLattice &L) {
  auto b = L.basis();
  auto g = L.gram();
  Rational n = 0;
  for (std::size_t r = 0; r < 4; ++r) {
    n = exactnum::gcd(n, L.algebra().reduced_norm(b[r]));
    for (std::size_t s = r + 1; s < 4; ++s) n = exactnum::gcd(n, g[r][s]);
  }
  return n;
}

} // namespace quatmatch::orders
