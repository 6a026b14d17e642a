#pragma once

#include <cstdint>
#include <vector>

#include "quatmatch/exactnum/cyclotomic.hpp"

namespace quatmatch::exactnum {

template <class T> using Matrix = std::vector<std::vector<T>>;
using CycMatrix = Matrix<Cyclotomic>;

/// (e(ij/p))_{0<=i,j<p}
inline CycMatrix dft_matrix(std::int64_t p) {
  require(is_prime(p), "dft_matrix: p must be prime");
  std::size_t n = static_cast<std::size_t>(p);
  CycMatrix a(n, std::vector<Cyclotomic>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      a[i][j] = Cyclotomic::root_of_unity(static_cast<long>(p), static_cast<long>((i * j) % n));
  return a;
}

inline CycMatrix conjugate_transpose(const CycMatrix &a) {
  std::size_t r = a.size(), c = r ? a[0].size() : 0;
  CycMatrix t(c, std::vector<Cyclotomic>(r));
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) t[j][i] = a[i][j].conj();
  return t;
}

inline CycMatrix multiply(const CycMatrix &a, const CycMatrix &b) {
  std::size_t r = a.size(), k = b.size(), c = k ? b[0].size() : 0;
  CycMatrix out(r, std::vector<Cyclotomic>(c));
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) {
      Cyclotomic s;
      for (std::size_t t = 0; t < k; ++t) s += a[i][t] * b[t][j];
      out[i][j] = s;
    }
  return out;
}

inline std::vector<Cyclotomic> multiply(const CycMatrix &a, const std::vector<Cyclotomic> &v) {
  std::vector<Cyclotomic> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t t = 0; t < v.size(); ++t) out[i] += a[i][t] * v[t];
  return out;
}

/// Determinant by Gaussian elimination over the cyclotomic field.
inline Cyclotomic determinant(CycMatrix a) {
  std::size_t n = a.size();
  Cyclotomic det(1);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && a[piv][col].is_zero()) ++piv;
    if (piv == n) return Cyclotomic(0);
    if (piv != col) {
      std::swap(a[piv], a[col]);
      det = -det;
    }
    det *= a[col][col];
    Cyclotomic inv = a[col][col].inverse();
    for (std::size_t r = col + 1; r < n; ++r) {
      if (a[r][col].is_zero()) continue;
      Cyclotomic f = a[r][col] * inv;
      for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
    }
  }
  return det;
}

/// Solve a x = b for square invertible a.
inline std::vector<Cyclotomic> solve(CycMatrix a, std::vector<Cyclotomic> b) {
  std::size_t n = a.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && a[piv][col].is_zero()) ++piv;
    if (piv == n) throw PreconditionError("solve: singular matrix");
    std::swap(a[piv], a[col]);
    std::swap(b[piv], b[col]);
    Cyclotomic inv = a[col][col].inverse();
    for (std::size_t c = col; c < n; ++c) a[col][c] *= inv;
    b[col] *= inv;
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || a[r][col].is_zero()) continue;
      Cyclotomic f = a[r][col];
      for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
      b[r] -= f * b[col];
    }
  }
  return b;
}

/// Cramer's rule: x_j = det(A_j)/det(A), A_j = A with column j replaced by b.
inline std::vector<Cyclotomic> cramer(const CycMatrix &a, const std::vector<Cyclotomic> &b) {
  Cyclotomic d = determinant(a);
  require(!d.is_zero(), "cramer: singular matrix");
  Cyclotomic dinv = d.inverse();
  std::vector<Cyclotomic> x(a.size());
  for (std::size_t j = 0; j < a.size(); ++j) {
    CycMatrix aj = a;
    for (std::size_t i = 0; i < a.size(); ++i) aj[i][j] = b[i];
    x[j] = determinant(aj) * dinv;
  }
  return x;
}

} // namespace quatmatch::exactnum
