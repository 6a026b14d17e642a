#pragma once

#include <cstdint>
#include <map>
#include <numeric>
#include <ostream>
#include <string>
#include <vector>

#include "quatmatch/exactnum/rational.hpp"

namespace quatmatch::exactnum {

namespace detail {

using IntPoly = std::vector<std::int64_t>; // ascending coefficients

inline IntPoly poly_divide_exact(IntPoly num, const IntPoly &den) {
  // den is monic
  IntPoly q(num.size() - den.size() + 1, 0);
  for (std::size_t i = q.size(); i-- > 0;) {
    std::int64_t c = num[i + den.size() - 1];
    q[i] = c;
    for (std::size_t j = 0; j < den.size(); ++j) num[i + j] -= c * den[j];
  }
  for (auto v : num)
    if (v != 0) throw CertificateError("cyclotomic polynomial division not exact");
  return q;
}

inline const IntPoly &cyclotomic_polynomial(long n) {
  thread_local std::map<long, IntPoly> cache;
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  IntPoly f(static_cast<std::size_t>(n) + 1, 0);
  f[0] = -1;
  f[static_cast<std::size_t>(n)] = 1;
  for (long d = 1; d < n; ++d)
    if (n % d == 0) f = poly_divide_exact(f, cyclotomic_polynomial(d));
  return cache.emplace(n, std::move(f)).first->second;
}

/// Row e holds x^e mod Phi_n in the power basis, 0 <= e < n.
inline const std::vector<IntPoly> &power_table(long n) {
  thread_local std::map<long, std::vector<IntPoly>> cache;
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  const IntPoly &phi = cyclotomic_polynomial(n);
  std::size_t deg = phi.size() - 1;
  std::vector<IntPoly> rows(static_cast<std::size_t>(n), IntPoly(deg, 0));
  IntPoly cur(deg, 0);
  cur[0] = 1;
  for (long e = 0; e < n; ++e) {
    rows[static_cast<std::size_t>(e)] = cur;
    // multiply by x
    std::int64_t top = cur[deg - 1];
    for (std::size_t k = deg - 1; k > 0; --k) cur[k] = cur[k - 1];
    cur[0] = 0;
    if (top != 0)
      for (std::size_t k = 0; k < deg; ++k) cur[k] -= top * phi[k];
  }
  return cache.emplace(n, std::move(rows)).first->second;
}

} // namespace detail

/// Element of Q(zeta_n), zeta_n = e(1/n), in the power basis 1, zeta, ...,
/// zeta^{phi(n)-1}. Values of different conductors are compared and combined
/// after lifting to the lcm conductor.
class Cyclotomic {
public:
  Cyclotomic() : n_(1), c_{Rational(0)} {}
  Cyclotomic(const Rational &r) : n_(1), c_{r} {}
  Cyclotomic(long v) : n_(1), c_{Rational(v)} {}

  /// zeta_n^e
  static Cyclotomic root_of_unity(long n, long e) {
    require(n >= 1, "root_of_unity: conductor must be positive");
    long r = ((e % n) + n) % n;
    std::vector<Rational> ex(static_cast<std::size_t>(n), Rational(0));
    ex[static_cast<std::size_t>(r)] = 1;
    return from_exponents(n, ex);
  }

  /// e(x) = exp(2 pi i x) for rational x.
  static Cyclotomic e(const Rational &x) {
    const Integer &den = x.get_den();
    require(den.fits_slong_p() && den <= 1000000, "e(x): denominator too large");
    long n = den.get_si();
    Integer a = mod(x.get_num(), den);
    return root_of_unity(n, a.get_si());
  }

  /// Reduce sum_e v[e] zeta_n^e, e in [0, n).
  static Cyclotomic from_exponents(long n, const std::vector<Rational> &v) {
    const auto &tab = detail::power_table(n);
    std::size_t deg = tab.empty() ? 1 : tab[0].size();
    Cyclotomic out;
    out.n_ = n;
    out.c_.assign(deg, Rational(0));
    for (std::size_t e = 0; e < v.size(); ++e) {
      if (v[e] == 0) continue;
      const auto &row = tab[e % static_cast<std::size_t>(n)];
      for (std::size_t k = 0; k < deg; ++k)
        if (row[k] != 0) out.c_[k] += v[e] * row[k];
    }
    return out;
  }

  long conductor() const { return n_; }
  const std::vector<Rational> &coefficients() const { return c_; }

  /// Same value in Q(zeta_m), n | m.
  Cyclotomic lift(long m) const {
    if (m == n_) return *this;
    require(m % n_ == 0, "lift: conductor does not divide target");
    long s = m / n_;
    std::vector<Rational> ex(static_cast<std::size_t>(m), Rational(0));
    for (std::size_t k = 0; k < c_.size(); ++k)
      ex[(k * static_cast<std::size_t>(s)) % static_cast<std::size_t>(m)] += c_[k];
    return from_exponents(m, ex);
  }

  bool is_rational() const {
    for (std::size_t k = 1; k < c_.size(); ++k)
      if (c_[k] != 0) return false;
    return true;
  }

  Rational rational_value() const {
    require(is_rational(), "cyclotomic value is not rational");
    return c_[0];
  }

  bool is_zero() const {
    for (const auto &v : c_)
      if (v != 0) return false;
    return true;
  }

  /// sigma_a: zeta -> zeta^a, gcd(a, n) = 1.
  Cyclotomic galois(long a) const {
    long am = ((a % n_) + n_) % n_;
    require(std::gcd(am, n_) == 1 || n_ == 1, "galois: exponent not a unit");
    std::vector<Rational> ex(static_cast<std::size_t>(n_), Rational(0));
    for (std::size_t k = 0; k < c_.size(); ++k)
      ex[(k * static_cast<std::size_t>(am)) % static_cast<std::size_t>(n_)] += c_[k];
    return from_exponents(n_, ex);
  }

  Cyclotomic conj() const { return galois(-1); }

  Rational norm() const {
    Cyclotomic prod(1);
    for (long a = 1; a <= n_; ++a)
      if (std::gcd(a, n_) == 1) prod *= galois(a);
    return prod.rational_value();
  }

  Cyclotomic inverse() const {
    if (is_zero()) throw PreconditionError("inverse of zero cyclotomic number");
    Cyclotomic rest(1);
    for (long a = 2; a <= n_; ++a)
      if (std::gcd(a, n_) == 1) rest *= galois(a);
    Rational nm = (rest * *this).rational_value();
    return rest * Cyclotomic(1 / nm);
  }

  Cyclotomic &operator+=(const Cyclotomic &o) {
    long m = std::lcm(n_, o.n_);
    Cyclotomic a = lift(m);
    Cyclotomic b = o.lift(m);
    for (std::size_t k = 0; k < a.c_.size(); ++k) a.c_[k] += b.c_[k];
    return *this = std::move(a);
  }

  Cyclotomic operator-() const {
    Cyclotomic r = *this;
    for (auto &v : r.c_) v = -v;
    return r;
  }

  Cyclotomic &operator-=(const Cyclotomic &o) { return *this += -o; }

  Cyclotomic &operator*=(const Cyclotomic &o) {
    long m = std::lcm(n_, o.n_);
    if (o.n_ == 1) {
      for (auto &v : c_) v *= o.c_[0];
      return *this;
    }
    if (n_ == 1) {
      Rational s = c_[0];
      *this = o;
      for (auto &v : c_) v *= s;
      return *this;
    }
    Cyclotomic a = lift(m);
    Cyclotomic b = o.lift(m);
    std::vector<Rational> ex(static_cast<std::size_t>(m), Rational(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
      if (a.c_[i] == 0) continue;
      for (std::size_t j = 0; j < b.c_.size(); ++j)
        if (b.c_[j] != 0) ex[(i + j) % static_cast<std::size_t>(m)] += a.c_[i] * b.c_[j];
    }
    return *this = from_exponents(m, ex);
  }

  Cyclotomic &operator/=(const Cyclotomic &o) { return *this *= o.inverse(); }

  friend Cyclotomic operator+(Cyclotomic a, const Cyclotomic &b) { return a += b; }
  friend Cyclotomic operator-(Cyclotomic a, const Cyclotomic &b) { return a -= b; }
  friend Cyclotomic operator*(Cyclotomic a, const Cyclotomic &b) { return a *= b; }
  friend Cyclotomic operator/(Cyclotomic a, const Cyclotomic &b) { return a /= b; }

  friend bool operator==(const Cyclotomic &a, const Cyclotomic &b) {
    long m = std::lcm(a.n_, b.n_);
    return a.lift(m).c_ == b.lift(m).c_;
  }

  /// Smallest conductor representation; the canonical form for printing.
  Cyclotomic reduced() const {
    for (long d = 1; d < n_; ++d) {
      if (n_ % d != 0) continue;
      // coefficients of the image of Q(zeta_d) are supported on multiples of n/d
      // only when phi(d)=phi(n); otherwise test by solving on the lifted basis.
      Cyclotomic cand = try_descend(d);
      if (cand.n_ == d) return cand;
    }
    return *this;
  }

  std::string to_string() const {
    Cyclotomic r = reduced();
    if (r.is_rational()) return to_short_string(r.c_[0]);
    std::string s;
    for (std::size_t k = 0; k < r.c_.size(); ++k) {
      if (r.c_[k] == 0) continue;
      if (!s.empty()) s += " + ";
      std::string coef = to_short_string(r.c_[k]);
      if (k == 0) {
        s += coef;
        continue;
      }
      if (coef == "1") coef.clear();
      else if (coef == "-1") coef = "-";
      else coef += "*";
      s += coef + "z" + std::to_string(r.n_) + (k > 1 ? "^" + std::to_string(k) : "");
    }
    return s;
  }

  friend std::ostream &operator<<(std::ostream &os, const Cyclotomic &c) {
    return os << c.to_string();
  }

private:
  Cyclotomic try_descend(long d) const {
    // Write the value as an element of Q(zeta_d) if possible: solve the
    // phi(d) unknowns from the lifted images of the power basis of Q(zeta_d).
    const auto &tab_d = detail::power_table(d);
    std::size_t kd = tab_d.empty() ? 1 : tab_d[0].size();
    std::size_t kn = c_.size();
    std::vector<std::vector<Rational>> cols;
    for (std::size_t k = 0; k < kd; ++k) {
      Cyclotomic basis = root_of_unity(d, static_cast<long>(k)).lift(n_);
      cols.push_back(basis.c_);
    }
    // augmented system kn x (kd + 1)
    std::vector<std::vector<Rational>> m(kn, std::vector<Rational>(kd + 1));
    for (std::size_t r = 0; r < kn; ++r) {
      for (std::size_t k = 0; k < kd; ++k) m[r][k] = cols[k][r];
      m[r][kd] = c_[r];
    }
    std::size_t row = 0;
    std::vector<std::size_t> pivots;
    for (std::size_t col = 0; col < kd && row < kn; ++col) {
      std::size_t piv = row;
      while (piv < kn && m[piv][col] == 0) ++piv;
      if (piv == kn) continue;
      std::swap(m[piv], m[row]);
      for (std::size_t r = 0; r < kn; ++r) {
        if (r == row || m[r][col] == 0) continue;
        Rational f = m[r][col] / m[row][col];
        for (std::size_t c = col; c <= kd; ++c) m[r][c] -= f * m[row][c];
      }
      pivots.push_back(col);
      ++row;
    }
    for (std::size_t r = row; r < kn; ++r)
      if (m[r][kd] != 0) return *this;
    Cyclotomic out;
    out.n_ = d;
    out.c_.assign(kd, Rational(0));
    for (std::size_t r = 0; r < pivots.size(); ++r) out.c_[pivots[r]] = m[r][kd] / m[r][pivots[r]];
    return out;
  }

  long n_;
  std::vector<Rational> c_;
};

} // namespace quatmatch::exactnum
