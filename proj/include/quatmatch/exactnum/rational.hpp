#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "quatmatch/error.hpp"

namespace quatmatch::exactnum {

using Integer = mpz_class;
/// GMP rationals are kept canonical (lowest terms, positive denominator)
/// by every arithmetic operation; `make_rational` canonicalizes raw input.
using Rational = mpq_class;

inline Rational make_rational(const Integer &num, const Integer &den) {
  require(den != 0, "rational with zero denominator");
  Rational r(num, den);
  r.canonicalize();
  return r;
}

inline Rational make_rational(long num, long den = 1) {
  return make_rational(Integer(num), Integer(den));
}

/// "num/den", always with an explicit denominator.
inline std::string to_string(const Rational &r) {
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

/// Shortest form: "num" for integers, "num/den" otherwise.
inline std::string to_short_string(const Rational &r) {
  if (r.get_den() == 1) return r.get_num().get_str();
  return to_string(r);
}

inline std::string to_string(const Integer &z) { return z.get_str(); }

inline Integer floor(const Rational &r) {
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return q;
}

inline Integer ceil(const Rational &r) {
  Integer q;
  mpz_cdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return q;
}

inline Integer isqrt(const Integer &n) {
  require(n >= 0, "isqrt of a negative integer");
  Integer r;
  mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
  return r;
}

inline bool is_integer(const Rational &r) { return r.get_den() == 1; }

inline Integer floor_div(const Integer &a, const Integer &b) {
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

inline Integer ceil_div(const Integer &a, const Integer &b) {
  Integer q;
  mpz_cdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

/// Least nonnegative residue.
inline Integer mod(const Integer &a, const Integer &m) {
  Integer r;
  mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
  if (r < 0) r += abs(m);
  return r;
}

inline Integer gcd(const Integer &a, const Integer &b) {
  Integer g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

inline Integer lcm(const Integer &a, const Integer &b) {
  Integer l;
  mpz_lcm(l.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return l;
}

/// Nonnegative generator of the fractional ideal a Z + b Z.
inline Rational gcd(const Rational &a, const Rational &b) {
  Integer den = lcm(a.get_den(), b.get_den());
  Integer na = a.get_num() * (den / a.get_den());
  Integer nb = b.get_num() * (den / b.get_den());
  return make_rational(gcd(na, nb), den);
}

/// p-adic valuation of a nonzero integer.
inline int valuation(Integer n, long p) {
  require(n != 0, "valuation of zero");
  int v = 0;
  while (mpz_divisible_ui_p(n.get_mpz_t(), static_cast<unsigned long>(p))) {
    n /= p;
    ++v;
  }
  return v;
}

inline int valuation(const Rational &r, long p) {
  return valuation(r.get_num(), p) - valuation(r.get_den(), p);
}

inline int valuation(std::int64_t n, std::int64_t p) {
  require(n != 0, "valuation of zero");
  int v = 0;
  while (n % p == 0) {
    n /= p;
    ++v;
  }
  return v;
}

inline bool is_prime(std::int64_t n) {
  if (n < 2) return false;
  for (std::int64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

/// Prime factorization of |n|, primes ascending.
inline std::vector<std::pair<std::int64_t, int>> factorize(std::int64_t n) {
  require(n != 0, "factorize(0)");
  if (n < 0) n = -n;
  std::vector<std::pair<std::int64_t, int>> out;
  for (std::int64_t d = 2; d * d <= n; ++d) {
    if (n % d != 0) continue;
    int e = 0;
    while (n % d == 0) {
      n /= d;
      ++e;
    }
    out.emplace_back(d, e);
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

inline std::vector<std::int64_t> prime_divisors(std::int64_t n) {
  std::vector<std::int64_t> ps;
  for (auto [p, e] : factorize(n)) ps.push_back(p);
  return ps;
}

inline bool is_squarefree(std::int64_t n) {
  if (n == 0) return false;
  for (auto [p, e] : factorize(n))
    if (e > 1) return false;
  return true;
}

inline std::int64_t ipow(std::int64_t b, int e) {
  std::int64_t r = 1;
  while (e-- > 0) r *= b;
  return r;
}

/// Sum of divisors 1 + p + ... + p^k.
inline std::int64_t sigma_prime_power(std::int64_t p, int k) {
  std::int64_t s = 0, t = 1;
  for (int i = 0; i <= k; ++i, t *= p) s += t;
  return s;
}

inline std::int64_t euler_phi(std::int64_t n) {
  std::int64_t r = n;
  for (auto p : prime_divisors(n)) r = r / p * (p - 1);
  return r;
}

/// Modular inverse of a unit a modulo m (m > 1).
inline std::int64_t inverse_mod(std::int64_t a, std::int64_t m) {
  std::int64_t g = m, x = 0, g1 = ((a % m) + m) % m, x1 = 1;
  while (g1 != 0) {
    std::int64_t q = g / g1;
    std::tie(g, g1) = std::pair{g1, g - q * g1};
    std::tie(x, x1) = std::pair{x1, x - q * x1};
  }
  require(g == 1, "inverse_mod: not a unit");
  return ((x % m) + m) % m;
}

} // namespace quatmatch::exactnum
