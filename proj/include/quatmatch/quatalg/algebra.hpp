#pragma once

#include <array>
#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "quatmatch/exactnum/rational.hpp"
#include "quatmatch/exactnum/symbols.hpp"

namespace quatmatch::quatalg {

using exactnum::Integer;
using exactnum::Place;
using exactnum::Rational;

/// Coordinates in the basis 1, i, j, k.
struct QuatElement {
  std::array<Rational, 4> c{};

  QuatElement() = default;
  QuatElement(Rational x0, Rational x1, Rational x2, Rational x3)
      : c{std::move(x0), std::move(x1), std::move(x2), std::move(x3)} {}
  static QuatElement scalar(const Rational &r) { return {r, 0, 0, 0}; }
  static QuatElement basis(int idx) {
    QuatElement e;
    e.c[static_cast<std::size_t>(idx)] = 1;
    return e;
  }

  Rational &operator[](std::size_t i) { return c[i]; }
  const Rational &operator[](std::size_t i) const { return c[i]; }

  QuatElement &operator+=(const QuatElement &o) {
    for (std::size_t i = 0; i < 4; ++i) c[i] += o.c[i];
    return *this;
  }
  QuatElement &operator-=(const QuatElement &o) {
    for (std::size_t i = 0; i < 4; ++i) c[i] -= o.c[i];
    return *this;
  }
  QuatElement &operator*=(const Rational &s) {
    for (auto &v : c) v *= s;
    return *this;
  }
  friend QuatElement operator+(QuatElement a, const QuatElement &b) { return a += b; }
  friend QuatElement operator-(QuatElement a, const QuatElement &b) { return a -= b; }
  friend QuatElement operator*(QuatElement a, const Rational &s) { return a *= s; }
  friend QuatElement operator*(const Rational &s, QuatElement a) { return a *= s; }
  friend bool operator==(const QuatElement &, const QuatElement &) = default;

  bool is_zero() const { return c[0] == 0 && c[1] == 0 && c[2] == 0 && c[3] == 0; }

  std::string to_string() const {
    return "(" + exactnum::to_short_string(c[0]) + ", " + exactnum::to_short_string(c[1]) +
           ", " + exactnum::to_short_string(c[2]) + ", " + exactnum::to_short_string(c[3]) + ")";
  }
};

/// (a, b)_Q: i^2 = a, j^2 = b, k = ij = -ji.
class QuaternionAlgebra {
public:
  QuaternionAlgebra(std::int64_t a, std::int64_t b) : a_(a), b_(b) {
    require(a != 0 && b != 0, "quaternion algebra: structure constants must be nonzero");
    std::set<std::int64_t> candidates{2};
    for (auto p : exactnum::prime_divisors(a)) candidates.insert(p);
    for (auto p : exactnum::prime_divisors(b)) candidates.insert(p);
    D_ = 1;
    for (auto p : candidates)
      if (exactnum::hilbert_symbol(a, b, Place::prime(p)) == -1) {
        ramified_.insert(Place::prime(p));
        D_ *= p;
      }
    if (exactnum::hilbert_symbol(a, b, Place::infinity()) == -1) ramified_.insert(Place::infinity());
    if (ramified_.size() % 2 != 0) throw CertificateError("odd number of ramified places");
  }

  std::int64_t a() const { return a_; }
  std::int64_t b() const { return b_; }
  std::int64_t discriminant() const { return D_; }
  const std::set<Place> &ramified_places() const { return ramified_; }
  bool is_definite() const { return ramified_.count(Place::infinity()) > 0; }
  bool is_ramified_at(std::int64_t p) const { return D_ % p == 0; }

  QuatElement mul(const QuatElement &x, const QuatElement &y) const {
    const Rational A(static_cast<long>(a_)), B(static_cast<long>(b_));
    const auto &[x0, x1, x2, x3] = x.c;
    const auto &[y0, y1, y2, y3] = y.c;
    return {x0 * y0 + A * x1 * y1 + B * x2 * y2 - A * B * x3 * y3,
            x0 * y1 + x1 * y0 - B * x2 * y3 + B * x3 * y2,
            x0 * y2 + x2 * y0 + A * x1 * y3 - A * x3 * y1,
            x0 * y3 + x3 * y0 + x1 * y2 - x2 * y1};
  }

  QuatElement conjugate(const QuatElement &x) const { return {x[0], -x[1], -x[2], -x[3]}; }

  Rational reduced_norm(const QuatElement &x) const {
    const Rational A(static_cast<long>(a_)), B(static_cast<long>(b_));
    return x[0] * x[0] - A * x[1] * x[1] - B * x[2] * x[2] + A * B * x[3] * x[3];
  }

  Rational reduced_trace(const QuatElement &x) const { return 2 * x[0]; }

  /// (x, y) = trd(x conj(y))
  Rational bilinear(const QuatElement &x, const QuatElement &y) const {
    const Rational A(static_cast<long>(a_)), B(static_cast<long>(b_));
    return 2 * (x[0] * y[0] - A * x[1] * y[1] - B * x[2] * y[2] + A * B * x[3] * y[3]);
  }

  std::string to_string() const {
    return "(" + std::to_string(a_) + "," + std::to_string(b_) + ")";
  }

  friend bool operator==(const QuaternionAlgebra &x, const QuaternionAlgebra &y) {
    return x.a_ == y.a_ && x.b_ == y.b_;
  }

private:
  std::int64_t a_, b_, D_;
  std::set<Place> ramified_;
};

inline Rational reduced_norm(const QuaternionAlgebra &A, const QuatElement &x) { return A.reduced_norm(x); }
inline Rational reduced_trace(const QuaternionAlgebra &A, const QuatElement &x) { return A.reduced_trace(x); }
inline QuatElement conjugate(const QuaternionAlgebra &A, const QuatElement &x) { return A.conjugate(x); }

/// Squarefree integers 1, -1, 2, -2, 3, -3, 5, -5, 6, -6, ... up to |v| <= bound.
inline std::vector<std::int64_t> structure_constant_candidates(std::int64_t bound) {
  std::vector<std::int64_t> out{1, -1};
  for (std::int64_t v = 2; v <= bound; ++v)
    if (exactnum::is_squarefree(v)) {
      out.push_back(v);
      out.push_back(-v);
    }
  return out;
}

/// Deterministic (a, b) with finite ramification exactly the primes of D.
/// Pairs are scanned by (max index, index of a, index of b) in the candidate list.
inline QuaternionAlgebra construct_algebra(std::int64_t D) {
  require(D >= 1 && exactnum::is_squarefree(D), "construct_algebra: D must be squarefree and positive");
  for (std::int64_t bound = 8 * D + 8;; bound *= 2) {
    auto cand = structure_constant_candidates(bound);
    std::size_t n = cand.size();
    for (std::size_t top = 0; top < n; ++top)
      for (std::size_t ia = 0; ia <= top; ++ia)
        for (std::size_t ib = 0; ib <= top; ++ib) {
          if (std::max(ia, ib) != top) continue;
          std::int64_t a = cand[ia], b = cand[ib];
          // quick filter: every prime of D must divide 2ab
          bool ok = true;
          for (auto p : exactnum::prime_divisors(D))
            if (p != 2 && a % p != 0 && b % p != 0) ok = false;
          if (!ok) continue;
          QuaternionAlgebra A(a, b);
          if (A.discriminant() == D) return A;
        }
    if (bound > 1000000) throw CertificateError("construct_algebra: search exhausted");
  }
}

/// B_p = K + K pi with K unramified, O_K = Z_p + Z_p u, u^2 - t u + n = 0.
struct LocalRamifiedModel {
  std::int64_t p = 0, t = 0, n = 0;

  /// d_{k,l} = k^2 + k l t + l^2 n, the norm of k + l u.
  std::int64_t d(std::int64_t k, std::int64_t l) const { return k * k + k * l * t + l * l * n; }
};

/// Lexicographically least (t, n) in [0, p)^2 with x^2 - t x + n irreducible mod p.
inline LocalRamifiedModel local_ramified_model(std::int64_t p) {
  require(exactnum::is_prime(p), "local_ramified_model: p must be prime");
  for (std::int64_t t = 0; t < p; ++t)
    for (std::int64_t n = 0; n < p; ++n) {
      bool root = false;
      for (std::int64_t x = 0; x < p && !root; ++x) root = ((x * x - t * x + n) % p + p) % p == 0;
      if (!root) return {p, t, n};
    }
  throw CertificateError("no irreducible quadratic found");
}

inline LocalRamifiedModel local_ramified_model(const QuaternionAlgebra &A, std::int64_t p) {
  require(exactnum::is_prime(p) && A.is_ramified_at(p), "local_ramified_model: p must divide D");
  return local_ramified_model(p);
}

} // namespace quatmatch::quatalg
