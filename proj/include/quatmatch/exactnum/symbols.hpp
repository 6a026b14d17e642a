#pragma once

#include <cstdint>
#include <string>

#include "quatmatch/exactnum/cyclotomic.hpp"
#include "quatmatch/exactnum/rational.hpp"

namespace quatmatch::exactnum {

/// A place of Q: a prime p, or the real place (p == 0).
struct Place {
  std::int64_t p = 0;
  static Place infinity() { return Place{0}; }
  static Place prime(std::int64_t q) {
    require(is_prime(q), "place: not a prime");
    return Place{q};
  }
  bool is_infinite() const { return p == 0; }
  std::string to_string() const { return p == 0 ? "inf" : std::to_string(p); }
  friend auto operator<=>(const Place &, const Place &) = default;
};

inline int kronecker_symbol(const Integer &a, const Integer &n) {
  require(n != 0, "kronecker_symbol: n must be nonzero");
  return mpz_kronecker(a.get_mpz_t(), n.get_mpz_t());
}

inline int kronecker_symbol(std::int64_t a, std::int64_t n) {
  return kronecker_symbol(Integer(static_cast<long>(a)), Integer(static_cast<long>(n)));
}

namespace detail {

/// Squarefree-equivalent integer for a nonzero rational (a*den^2 / square part
/// is not needed: num*den has the same square class).
inline Integer square_class_integer(const Rational &r) {
  require(r != 0, "hilbert_symbol: arguments must be nonzero");
  return r.get_num() * r.get_den();
}

inline int eps2(const Integer &u) { // (u-1)/2 mod 2
  return mod(u, 4) == 3 ? 1 : 0;
}

inline int omega2(const Integer &u) { // (u^2-1)/8 mod 2
  Integer r = mod(u, 8);
  return (r == 3 || r == 5) ? 1 : 0;
}

} // namespace detail

/// (a, b)_v in {+1, -1}.
inline int hilbert_symbol(const Rational &ra, const Rational &rb, Place v) {
  Integer a = detail::square_class_integer(ra);
  Integer b = detail::square_class_integer(rb);
  if (v.is_infinite()) return (a < 0 && b < 0) ? -1 : 1;
  long p = static_cast<long>(v.p);
  int alpha = valuation(a, p), beta = valuation(b, p);
  Integer u = a, w = b;
  for (int i = 0; i < alpha; ++i) u /= p;
  for (int i = 0; i < beta; ++i) w /= p;
  if (p == 2) {
    int e = detail::eps2(u) * detail::eps2(w) + alpha * detail::omega2(w) +
            beta * detail::omega2(u);
    return (e % 2 == 0) ? 1 : -1;
  }
  int s = 1;
  if ((alpha * beta) % 2 == 1 && (p % 4) == 3) s = -s;
  if (beta % 2 == 1) s *= kronecker_symbol(u, Integer(p));
  if (alpha % 2 == 1) s *= kronecker_symbol(w, Integer(p));
  return s;
}

inline int hilbert_symbol(std::int64_t a, std::int64_t b, Place v) {
  return hilbert_symbol(Rational(static_cast<long>(a)), Rational(static_cast<long>(b)), v);
}

/// Sign convention for the finite additive character.
enum class CharacterSign { Negative, Positive };

/// psi_p(x) = e(-{x}_p) (Negative, the default) or e({x}_p).
inline Cyclotomic additive_character(std::int64_t p, const Rational &x,
                                     CharacterSign sign = CharacterSign::Negative) {
  require(is_prime(p), "additive_character: p must be prime");
  Integer den = x.get_den();
  while (mpz_divisible_ui_p(den.get_mpz_t(), static_cast<unsigned long>(p))) den /= p;
  require(den == 1, "additive_character: denominator is not a power of p");
  Rational frac = x - Rational(floor(x));
  return Cyclotomic::e(sign == CharacterSign::Negative ? Rational(-frac) : frac);
}

} // namespace quatmatch::exactnum
