#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "quatmatch/orders/lattice.hpp"

namespace quatmatch::classsets {

using exactnum::Integer;
using exactnum::Rational;
using orders::IntMatrix;
using orders::RatMatrix;

/// Even integral Gram matrix G; the quadratic form is Q(x) = x^T G x / 2.
struct QuadraticForm {
  std::vector<std::vector<std::int64_t>> gram;

  static QuadraticForm from_rational(const RatMatrix &g) {
    QuadraticForm f;
    f.gram.assign(g.size(), std::vector<std::int64_t>(g.size()));
    for (std::size_t r = 0; r < g.size(); ++r)
      for (std::size_t s = 0; s < g.size(); ++s) {
        if (g[r][s].get_den() != 1) throw PreconditionError("quadratic form: Gram matrix is not integral");
        if (r == s && g[r][r].get_num() % 2 != 0) throw PreconditionError("quadratic form: Gram diagonal is not even");
        if (!g[r][s].get_num().fits_slong_p()) throw UnsupportedInput("quadratic form: Gram entry too large");
        f.gram[r][s] = g[r][s].get_num().get_si();
      }
    return f;
  }

  std::size_t rank() const { return gram.size(); }

  std::int64_t value(const std::vector<std::int64_t> &x) const {
    std::int64_t s = 0;
    for (std::size_t r = 0; r < x.size(); ++r)
      for (std::size_t c = 0; c < x.size(); ++c) s += gram[r][c] * x[r] * x[c];
    return s / 2;
  }
};

namespace detail {

/// Gram-Schmidt data (mu, squared lengths) of a Gram matrix.
inline void gram_schmidt(const RatMatrix &g, RatMatrix &mu, std::vector<Rational> &bstar) {
  std::size_t n = g.size();
  mu.assign(n, std::vector<Rational>(n, Rational(0)));
  bstar.assign(n, Rational(0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      Rational s = g[i][j];
      for (std::size_t k = 0; k < j; ++k) s -= mu[j][k] * mu[i][k] * bstar[k];
      mu[i][j] = s / bstar[j];
    }
    Rational s = g[i][i];
    for (std::size_t k = 0; k < i; ++k) s -= mu[i][k] * mu[i][k] * bstar[k];
    if (s <= 0) throw PreconditionError("quadratic form is not positive definite");
    bstar[i] = s;
  }
}

} // namespace detail

/// LLL-reduced equivalent form (delta = 3/4), exact arithmetic.
inline QuadraticForm lll_reduce(const QuadraticForm &f) {
  std::size_t n = f.rank();
  std::vector<std::vector<std::int64_t>> g = f.gram;
  auto to_rat = [&]() {
    RatMatrix r(n, std::vector<Rational>(n));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) r[i][j] = Rational(static_cast<long>(g[i][j]));
    return r;
  };
  RatMatrix mu;
  std::vector<Rational> bstar;
  std::size_t k = 1;
  int guard = 0;
  while (k < n) {
    if (++guard > 100000) throw CertificateError("lll_reduce: no convergence");
    detail::gram_schmidt(to_rat(), mu, bstar);
    for (std::size_t j = k; j-- > 0;) {
      Rational m = mu[k][j];
      Integer q = exactnum::floor(m + Rational(1, 2));
      if (q == 0) continue;
      std::int64_t qi = q.get_si();
      // new b_k = b_k - q b_j
      std::int64_t gkk = g[k][k] - 2 * qi * g[k][j] + qi * qi * g[j][j];
      std::vector<std::int64_t> row(n);
      for (std::size_t t = 0; t < n; ++t) row[t] = g[k][t] - qi * g[j][t];
      row[k] = gkk;
      for (std::size_t t = 0; t < n; ++t) {
        g[k][t] = row[t];
        g[t][k] = row[t];
      }
      detail::gram_schmidt(to_rat(), mu, bstar);
    }
    Rational lhs = bstar[k];
    Rational rhs = (Rational(3, 4) - mu[k][k - 1] * mu[k][k - 1]) * bstar[k - 1];
    if (lhs >= rhs) {
      ++k;
    } else {
      std::swap(g[k], g[k - 1]);
      for (auto &row : g) std::swap(row[k], row[k - 1]);
      k = std::max<std::size_t>(k - 1, 1);
    }
  }
  return QuadraticForm{g};
}

/// Calls visit(Q(x)) for every nonzero x with Q(x) <= bound (both x and -x).
inline void enumerate_short_values(const QuadraticForm &form, std::int64_t bound,
                                   const std::function<void(std::int64_t)> &visit) {
  QuadraticForm f = lll_reduce(form);
  std::size_t n = f.rank();
  // q-decomposition of A = G/2: Q(x) = sum_i q_ii (x_i + sum_{j>i} q_ij x_j)^2
  RatMatrix q(n, std::vector<Rational>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) q[i][j] = exactnum::make_rational(static_cast<long>(f.gram[i][j]), 2);
  for (std::size_t i = 0; i < n; ++i) {
    if (q[i][i] <= 0) throw PreconditionError("quadratic form is not positive definite");
    for (std::size_t j = i + 1; j < n; ++j) {
      q[j][i] = q[i][j];
      q[i][j] /= q[i][i];
    }
    for (std::size_t k = i + 1; k < n; ++k)
      for (std::size_t l = k; l < n; ++l) q[k][l] -= q[k][i] * q[i][l];
  }
  std::vector<std::int64_t> x(n, 0);
  const auto &G = f.gram;

  // integer range of x with q_ii (x + c)^2 <= R
  auto range = [](const Rational &R, const Rational &qii, const Rational &c, Integer &lo, Integer &hi) {
    Rational t = R / qii;
    const Integer &b = c.get_den();
    const Integer &a = c.get_num();
    Rational s = t * Rational(b * b);
    Integer r = exactnum::isqrt(exactnum::floor(s));
    lo = exactnum::ceil_div(-a - r, b);
    hi = exactnum::floor_div(-a + r, b);
  };

  std::function<void(std::size_t, const Rational &)> rec = [&](std::size_t i, const Rational &R) {
    Rational c = 0;
    for (std::size_t j = i + 1; j < n; ++j) c += q[i][j] * Rational(static_cast<long>(x[j]));
    Integer lo, hi;
    range(R, q[i][i], c, lo, hi);
    if (lo > hi) return;
    if (i == 0) {
      std::int64_t s = 0, rest = 0;
      for (std::size_t j = 1; j < n; ++j) {
        s += G[0][j] * x[j];
        for (std::size_t k = 1; k < n; ++k) rest += G[j][k] * x[j] * x[k];
      }
      for (std::int64_t x0 = lo.get_si(); x0 <= hi.get_si(); ++x0) {
        std::int64_t v = (G[0][0] * x0 * x0 + 2 * x0 * s + rest) / 2;
        if (v <= bound && v > 0) visit(v);
      }
      return;
    }
    for (std::int64_t xi = lo.get_si(); xi <= hi.get_si(); ++xi) {
      x[i] = xi;
      Rational d = Rational(static_cast<long>(xi)) + c;
      rec(i - 1, R - q[i][i] * d * d);
    }
    x[i] = 0;
  };
  rec(n - 1, Rational(static_cast<long>(bound)));
}

/// theta[m] = #{x : Q(x) = m}, 0 <= m <= m_max.
inline std::vector<std::int64_t> theta_series(const QuadraticForm &f, std::int64_t m_max) {
  require(m_max >= 0, "theta_series: m_max must be nonnegative");
  std::vector<std::int64_t> theta(static_cast<std::size_t>(m_max) + 1, 0);
  theta[0] = 1;
  if (m_max == 0) return theta;
  enumerate_short_values(f, m_max, [&](std::int64_t v) { ++theta[static_cast<std::size_t>(v)]; });
  return theta;
}

inline std::int64_t count_vectors(const QuadraticForm &f, std::int64_t m) {
  require(m >= 1, "count_vectors: m must be positive");
  std::int64_t count = 0;
  enumerate_short_values(f, m, [&](std::int64_t v) {
    if (v == m) ++count;
  });
  return count;
}

/// r_L(m) for Q = nrd on an even integral lattice.
inline std::int64_t count_vectors(const orders::OrderLattice &L, std::int64_t m) {
  return count_vectors(QuadraticForm::from_rational(L.gram()), m);
}

inline std::vector<std::int64_t> theta_series(const orders::OrderLattice &L, std::int64_t m_max) {
  return theta_series(QuadraticForm::from_rational(L.gram()), m_max);
}

} // namespace quatmatch::classsets
