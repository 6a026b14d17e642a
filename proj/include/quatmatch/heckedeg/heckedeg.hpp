#pragma once

#include <array>
#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "quatmatch/exactnum/rational.hpp"
#include "quatmatch/orders/orders.hpp"
#include "quatmatch/quatalg/algebra.hpp"

namespace quatmatch::heckedeg {

using exactnum::Integer;
using exactnum::Rational;

/// Scaling of r' relative to deg T / vol.
enum class Normalization {
  Degree,          // r'(m) = deg T(m) / vol
  ThetaCoefficient // r'(m) = 2 deg T(m) / vol
};

inline int prime_factor_count(std::int64_t D) { return static_cast<int>(exactnum::prime_divisors(D).size()); }

inline void check_indefinite(std::int64_t D, std::int64_t N) {
  require(D > 1, "indefinite side: D must be > 1");
  require(exactnum::is_squarefree(D), "indefinite side: D must be squarefree");
  require(prime_factor_count(D) % 2 == 0, "indefinite side: D must have an even number of prime factors");
  require(N >= 1 && std::gcd(N, D) == 1, "indefinite side: N must be positive and coprime to D");
}

/// -(DN/12) prod_{p|N}(1 + 1/p) prod_{p|D}(1 - 1/p)
inline Rational volume(std::int64_t D, std::int64_t N) {
  check_indefinite(D, N);
  Rational v = exactnum::make_rational(-D * N, 12);
  for (auto p : exactnum::prime_divisors(N)) v *= exactnum::make_rational(p + 1, p);
  for (auto p : exactnum::prime_divisors(D)) v *= exactnum::make_rational(p - 1, p);
  return v;
}

inline std::int64_t local_degree_split(std::int64_t p, int k) {
  require(exactnum::is_prime(p) && k >= 0, "local_degree_split: prime p and k >= 0 required");
  return exactnum::sigma_prime_power(p, k);
}

/// Right ideals of norm p^k in the local Eichler order of level p.
inline std::int64_t local_degree_level(std::int64_t p, int k) {
  require(exactnum::is_prime(p) && k >= 0, "local_degree_level: prime p and k >= 0 required");
  return 2 * exactnum::sigma_prime_power(p, k) - 1;
}

inline std::int64_t local_degree_ramified(std::int64_t p, int k) {
  require(exactnum::is_prime(p) && k >= 0, "local_degree_ramified: prime p and k >= 0 required");
  return 1;
}

inline Integer deg_T(std::int64_t D, std::int64_t N, std::int64_t m) {
  check_indefinite(D, N);
  require(m >= 1, "deg_T: m must be positive");
  Integer deg = 1;
  for (auto [p, k] : exactnum::factorize(m)) {
    if (D % p == 0) {
      deg *= local_degree_ramified(p, k);
    } else if (N % p == 0) {
      if (N % (p * p) == 0) throw UnsupportedInput("deg_T: non-squarefree level at p=" + std::to_string(p));
      deg *= local_degree_level(p, k);
    } else {
      deg *= local_degree_split(p, k);
    }
  }
  return deg;
}

inline Rational r_prime(std::int64_t D, std::int64_t N, std::int64_t m,
                        Normalization norm = Normalization::Degree) {
  check_indefinite(D, N);
  require(m >= 0, "r_prime: m must be nonnegative");
  if (m == 0) return 1;
  Rational r = Rational(deg_T(D, N, m)) / volume(D, N);
  if (norm == Normalization::ThetaCoefficient) r *= 2;
  return r;
}

// ---------------------------------------------------------------------------
// finite orbit oracles

enum class LocalPattern { Split, Level, Ramified };

inline std::string to_string(LocalPattern pt) {
  switch (pt) {
  case LocalPattern::Split: return "split";
  case LocalPattern::Level: return "level";
  case LocalPattern::Ramified: return "ramified";
  }
  return "?";
}

namespace detail {

using Vec4 = std::array<std::int64_t, 4>;

inline std::int64_t md(std::int64_t a, std::int64_t m) {
  a %= m;
  return a < 0 ? a + m : a;
}

/// R / p^M R for one of the three local orders, in a fixed Z_p-basis.
///   split:    (a, b, c, d) -> [[a, b], [c, d]]
///   level:    (a, b, c, d) -> [[a, b], [p c, d]]
///   ramified: (a, b, c, d) -> (a + b u) + (c + d u) pi, pi^2 = p, pi r = conj(r) pi
class LocalRing {
public:
  LocalRing(LocalPattern pattern, std::int64_t p, int M) : pattern_(pattern), p_(p), M_(M) {
    require(exactnum::is_prime(p), "local ring: p must be prime");
    require(M >= 1 && exactnum::ipow(p, M) < (std::int64_t(1) << 20), "local ring: modulus out of range");
    mod_ = exactnum::ipow(p, M);
    if (pattern == LocalPattern::Ramified) {
      auto model = quatalg::local_ramified_model(p);
      t_ = model.t;
      n_ = model.n;
    }
  }

  std::int64_t p() const { return p_; }
  int M() const { return M_; }
  std::int64_t modulus() const { return mod_; }
  LocalPattern pattern() const { return pattern_; }

  Vec4 mul(const Vec4 &x, const Vec4 &y) const {
    const std::int64_t m = mod_;
    if (pattern_ == LocalPattern::Ramified) {
      // O_K multiplication: (a + b u)(c + d u) = ac - n bd + (ad + bc + t bd) u
      auto kmul = [&](std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d) {
        return std::array<std::int64_t, 2>{md(a * c - n_ * b % m * d, m), md(a * d + b * c + t_ * b % m * d, m)};
      };
      auto kconj = [&](std::int64_t a, std::int64_t b) { // conj(a + b u) = (a + t b) - b u
        return std::array<std::int64_t, 2>{md(a + t_ * b, m), md(-b, m)};
      };
      auto a1a2 = kmul(x[0], x[1], y[0], y[1]);
      auto b2c = kconj(y[2], y[3]);
      auto b1b2c = kmul(x[2], x[3], b2c[0], b2c[1]);
      auto a1b2 = kmul(x[0], x[1], y[2], y[3]);
      auto a2c = kconj(y[0], y[1]);
      auto b1a2c = kmul(x[2], x[3], a2c[0], a2c[1]);
      return {md(a1a2[0] + p_ * b1b2c[0], m), md(a1a2[1] + p_ * b1b2c[1], m), md(a1b2[0] + b1a2c[0], m),
              md(a1b2[1] + b1a2c[1], m)};
    }
    std::int64_t s = pattern_ == LocalPattern::Level ? p_ : 1;
    // [[a, b], [s c, d]] [[e, f], [s g, h]]
    std::int64_t a = x[0], b = x[1], c = x[2], d = x[3];
    std::int64_t e = y[0], f = y[1], g = y[2], h = y[3];
    return {md(a * e + s * b % m * g, m), md(a * f + b * h, m), md(c * e + d * g, m), md(s * c % m * f + d * h, m)};
  }

  std::int64_t nrd(const Vec4 &x) const {
    const std::int64_t m = mod_;
    if (pattern_ == LocalPattern::Ramified) {
      auto kn = [&](std::int64_t a, std::int64_t b) { return md(a * a + t_ * a % m * b + n_ * b % m * b, m); };
      return md(kn(x[0], x[1]) - p_ * kn(x[2], x[3]), m);
    }
    std::int64_t s = pattern_ == LocalPattern::Level ? p_ : 1;
    return md(x[0] * x[3] - s * x[1] % m * x[2], m);
  }

  /// Valuation of nrd(x); M if nrd(x) = 0 mod p^M.
  int nrd_valuation(const Vec4 &x) const {
    std::int64_t v = nrd(x);
    if (v == 0) return M_;
    return exactnum::valuation(v, p_);
  }

  Vec4 basis(int i) const {
    Vec4 e{0, 0, 0, 0};
    e[static_cast<std::size_t>(i)] = 1;
    return e;
  }

  /// Canonical form of the submodule x R + p^M R: HNF of its generators over Z.
  std::string ideal_key(const Vec4 &x) const {
    std::vector<Vec4> rows;
    for (int i = 0; i < 4; ++i) rows.push_back(mul(x, basis(i)));
    for (int i = 0; i < 4; ++i) {
      Vec4 e{0, 0, 0, 0};
      e[static_cast<std::size_t>(i)] = mod_;
      rows.push_back(e);
    }
    auto h = hnf(rows);
    std::string key;
    for (const auto &r : h)
      for (auto v : r) key += std::to_string(v) + ",";
    return key;
  }

  static std::vector<Vec4> hnf(std::vector<Vec4> rows) {
    std::size_t r = 0;
    for (std::size_t col = 0; col < 4 && r < rows.size(); ++col) {
      for (;;) {
        std::size_t best = rows.size();
        for (std::size_t i = r; i < rows.size(); ++i)
          if (rows[i][col] != 0 && (best == rows.size() || std::llabs(rows[i][col]) < std::llabs(rows[best][col])))
            best = i;
        if (best == rows.size()) break;
        std::swap(rows[r], rows[best]);
        bool done = true;
        for (std::size_t i = r + 1; i < rows.size(); ++i) {
          if (rows[i][col] == 0) continue;
          std::int64_t q = rows[i][col] / rows[r][col];
          for (std::size_t c = col; c < 4; ++c) rows[i][c] -= q * rows[r][c];
          if (rows[i][col] != 0) done = false;
        }
        if (done) break;
      }
      if (rows[r][col] == 0) continue;
      if (rows[r][col] < 0)
        for (auto &v : rows[r]) v = -v;
      for (std::size_t i = 0; i < r; ++i) {
        std::int64_t q = rows[i][col] / rows[r][col];
        if (rows[i][col] - q * rows[r][col] < 0) --q;
        for (std::size_t c = col; c < 4; ++c) rows[i][c] -= q * rows[r][c];
      }
      ++r;
    }
    rows.resize(r);
    return rows;
  }

private:
  LocalPattern pattern_;
  std::int64_t p_;
  int M_;
  std::int64_t mod_;
  std::int64_t t_ = 0, n_ = 0;
};

/// One generator for each right ideal of norm p^j, j = 0..k, built by
/// multiplying on the left by generators of the norm-p ideals.
inline std::vector<std::size_t> ideal_walk(const LocalRing &R, int k) {
  const std::int64_t p = R.p();
  // norm-p generators: residues mod p lifted to exact valuation one
  std::vector<Vec4> level1;
  std::set<std::string> seen1;
  std::int64_t total = exactnum::ipow(p, 4);
  for (std::int64_t code = 0; code < total; ++code) {
    Vec4 xbar{};
    std::int64_t t = code;
    for (std::size_t r = 0; r < 4; ++r, t /= p) xbar[r] = t % p;
    for (std::int64_t zc = 0; zc < total; ++zc) {
      Vec4 x = xbar;
      std::int64_t u = zc;
      for (std::size_t r = 0; r < 4; ++r, u /= p) x[r] += p * (u % p);
      if (R.nrd_valuation(x) != 1) continue;
      if (seen1.insert(R.ideal_key(x)).second) level1.push_back(x);
      break;
    }
  }
  std::vector<std::size_t> counts{1};
  std::vector<Vec4> current{R.basis(0)};
  if (R.pattern() != LocalPattern::Ramified) {
    // identity is (1, 0, 0, 1) in the matrix patterns
    current = {Vec4{1, 0, 0, 1}};
  }
  for (int j = 1; j <= k; ++j) {
    std::vector<Vec4> next;
    std::set<std::string> seen;
    for (const auto &y : level1)
      for (const auto &x : current) {
        Vec4 z = R.mul(y, x);
        if (R.nrd_valuation(z) != j) throw CertificateError("ideal_walk: product has the wrong norm");
        if (seen.insert(R.ideal_key(z)).second) next.push_back(z);
      }
    counts.push_back(next.size());
    current = std::move(next);
  }
  return counts;
}

} // namespace detail

/// Right ideals of norm p^k, i.e. orbits of {x : v(nrd x) = k} under right
/// multiplication by units, computed in R / p^M R.
inline std::int64_t oracle_local_orbits_at(LocalPattern pattern, std::int64_t p, int k, int M) {
  require(k >= 0, "oracle_local_orbits: k >= 0");
  require(M >= k + 2, "oracle_local_orbits: need M >= k + 2");
  detail::LocalRing R(pattern, p, M);
  return static_cast<std::int64_t>(detail::ideal_walk(R, k).back());
}

/// Orbit count with stability check at M and M + 1.
inline std::int64_t oracle_local_orbits(LocalPattern pattern, std::int64_t p, int k, int M) {
  std::int64_t a = oracle_local_orbits_at(pattern, p, k, M);
  std::int64_t b = oracle_local_orbits_at(pattern, p, k, M + 1);
  if (a != b)
    throw CertificateError("oracle_local_orbits: count not stable in M; increase M (" + std::to_string(a) +
                           " vs " + std::to_string(b) + ")");
  return a;
}

/// Exhaustive count over R / p^{k+1} R; feasible for p^{4(k+1)} up to ~10^7.
inline std::int64_t oracle_local_orbits_direct(LocalPattern pattern, std::int64_t p, int k) {
  int M = k + 1;
  detail::LocalRing R(pattern, p, M);
  std::int64_t q = R.modulus();
  require(q * q * q * q <= 20000000, "oracle_local_orbits_direct: ring too large for exhaustive search");
  std::set<std::string> seen;
  detail::Vec4 x{};
  for (x[0] = 0; x[0] < q; ++x[0])
    for (x[1] = 0; x[1] < q; ++x[1])
      for (x[2] = 0; x[2] < q; ++x[2])
        for (x[3] = 0; x[3] < q; ++x[3])
          if (R.nrd_valuation(x) == k) seen.insert(R.ideal_key(x));
  return static_cast<std::int64_t>(seen.size());
}

/// Index-p^k subgroups of Z^2: Hermite forms [[a, b], [0, d]], ad = p^k, 0 <= b < d.
inline std::int64_t count_index_subgroups(std::int64_t n) {
  std::int64_t c = 0;
  for (std::int64_t a = 1; a <= n; ++a)
    if (n % a == 0) c += n / a;
  return c;
}

/// Right ideals of norm m in the global order O (D, N from its algebra and
/// level), by exhaustive search over O / mO.
inline std::int64_t oracle_global_degree(const orders::OrderLattice &O, std::int64_t m) {
  require(m >= 1 && m * m * m * m <= 2000000, "oracle_global_degree: m out of range");
  const auto &A = O.algebra();
  auto b = O.basis();
  // multiplication table in O-coordinates
  std::array<std::array<std::array<std::int64_t, 4>, 4>, 4> tab{};
  for (std::size_t r = 0; r < 4; ++r)
    for (std::size_t s = 0; s < 4; ++s) {
      auto c = O.coordinates(A.mul(b[r], b[s]));
      if (!c) throw CertificateError("oracle_global_degree: lattice is not an order");
      for (std::size_t t = 0; t < 4; ++t) tab[r][s][t] = exactnum::mod((*c)[t], Integer(m)).get_si();
    }
  std::set<std::string> seen;
  std::array<std::int64_t, 4> x{};
  for (x[0] = 0; x[0] < m; ++x[0])
    for (x[1] = 0; x[1] < m; ++x[1])
      for (x[2] = 0; x[2] < m; ++x[2])
        for (x[3] = 0; x[3] < m; ++x[3]) {
          std::vector<detail::Vec4> rows;
          for (std::size_t s = 0; s < 4; ++s) {
            detail::Vec4 v{0, 0, 0, 0};
            for (std::size_t r = 0; r < 4; ++r)
              for (std::size_t t = 0; t < 4; ++t) v[t] = (v[t] + x[r] * tab[r][s][t]) % m;
            rows.push_back(v);
          }
          for (std::size_t i = 0; i < 4; ++i) {
            detail::Vec4 e{0, 0, 0, 0};
            e[i] = m;
            rows.push_back(e);
          }
          auto h = detail::LocalRing::hnf(rows);
          std::int64_t index = 1;
          for (std::size_t i = 0; i < h.size(); ++i) index *= h[i][i];
          if (h.size() != 4 || index != m * m) continue;
          std::string key;
          for (const auto &r : h)
            for (auto v : r) key += std::to_string(v) + ",";
          seen.insert(key);
        }
  return static_cast<std::int64_t>(seen.size());
}

} // namespace quatmatch::heckedeg
