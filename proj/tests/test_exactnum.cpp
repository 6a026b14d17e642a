#include <gtest/gtest.h>

#include <random>

#include "quatmatch/exactnum/dft.hpp"
#include "quatmatch/exactnum/rational.hpp"
#include "quatmatch/exactnum/symbols.hpp"

using namespace quatmatch::exactnum;
using quatmatch::PreconditionError;

namespace {

std::int64_t md(std::int64_t a, std::int64_t m) { return ((a % m) + m) % m; }

// Legendre/Jacobi by squares mod p, multiplied over the factorization of n.
int jacobi_oracle(std::int64_t a, std::int64_t n) {
  int s = 1;
  for (auto [p, k] : factorize(n)) {
    int leg;
    if (md(a, p) == 0) {
      leg = 0;
    } else {
      leg = -1;
      for (std::int64_t x = 1; x < p; ++x)
        if (md(x * x - a, p) == 0) leg = 1;
    }
    for (int i = 0; i < k; ++i) s *= leg;
  }
  return s;
}

// Primitive solution of a x^2 + b y^2 = z^2 mod p^K; exact for |v(a)|,|v(b)| <= 1
// once K >= 2 v(gradient) + 1 (K = 3 for odd p, K = 5 for p = 2).
int hilbert_oracle(std::int64_t a, std::int64_t b, std::int64_t p) {
  const int K = p == 2 ? 5 : 3;
  const std::int64_t q = ipow(p, K);
  for (std::int64_t x = 0; x < q; ++x)
    for (std::int64_t y = 0; y < q; ++y)
      for (std::int64_t z = 0; z < q; ++z) {
        if (x % p == 0 && y % p == 0 && z % p == 0) continue;
        if (md(a * x * x + b * y * y - z * z, q) == 0) return 1;
      }
  return -1;
}

std::vector<std::int64_t> squarefree_range(std::int64_t lim) {
  std::vector<std::int64_t> out;
  for (std::int64_t n = -lim; n <= lim; ++n)
    if (n != 0 && is_squarefree(n < 0 ? -n : n)) out.push_back(n);
  return out;
}

} // namespace

TEST(Rational, CanonicalForm) {
  auto r = make_rational(6, -4);
  EXPECT_EQ(to_string(r), "-3/2");
  EXPECT_EQ(to_string(make_rational(4, 2)), "2/1");
  EXPECT_THROW(make_rational(1, 0), PreconditionError);
  EXPECT_EQ(floor(make_rational(-7, 2)), -4);
  EXPECT_EQ(ceil(make_rational(-7, 2)), -3);
  EXPECT_EQ(isqrt(Integer(99)), 9);
  EXPECT_EQ(isqrt(Integer(100)), 10);
}

TEST(Rational, ArithmeticHelpers) {
  EXPECT_EQ(valuation(Integer(48), 2), 4);
  EXPECT_EQ(valuation(make_rational(9, 8), 2), -3);
  EXPECT_EQ(sigma_prime_power(2, 3), 15);
  EXPECT_EQ(euler_phi(12), 4);
  EXPECT_EQ(md(5 * inverse_mod(5, 13), 13), 1);
  EXPECT_TRUE(is_squarefree(30));
  EXPECT_FALSE(is_squarefree(12));
  auto f = factorize(360);
  ASSERT_EQ(f.size(), 3u);
  EXPECT_EQ(f[0], std::make_pair(std::int64_t{2}, 3));
}

TEST(Kronecker, Examples) {
  EXPECT_EQ(kronecker_symbol(std::int64_t{2}, 7), 1);
  EXPECT_EQ(kronecker_symbol(std::int64_t{3}, 5), -1);
  for (std::int64_t a = -10; a <= 10; ++a) EXPECT_EQ(kronecker_symbol(a, 1), 1);
}

TEST(Kronecker, AgreesWithSquareSearchOnOddModuli) {
  for (std::int64_t n = 3; n <= 75; n += 2)
    for (std::int64_t a = -40; a <= 40; ++a) ASSERT_EQ(kronecker_symbol(a, n), jacobi_oracle(a, n)) << a << "/" << n;
}

TEST(Hilbert, Examples) {
  EXPECT_EQ(hilbert_symbol(-1, -1, Place::prime(2)), -1);
  EXPECT_EQ(hilbert_symbol(-1, -1, Place::infinity()), -1);
  for (std::int64_t p : {2, 3, 5, 7})
    for (std::int64_t b : {-7, -3, 2, 5, 6}) EXPECT_EQ(hilbert_symbol(1, b, Place::prime(p)), 1);
}

TEST(Hilbert, AgreesWithSolubilityOracle) {
  auto vals = squarefree_range(10);
  for (std::int64_t p : {2, 3, 5})
    for (auto a : vals)
      for (auto b : vals)
        ASSERT_EQ(hilbert_symbol(a, b, Place::prime(p)), hilbert_oracle(a, b, p)) << a << "," << b << " at " << p;
}

TEST(Hilbert, BilinearAndProductFormula) {
  auto vals = squarefree_range(15);
  for (auto a : vals)
    for (auto b : vals) {
      std::set<std::int64_t> primes{2};
      for (auto p : prime_divisors(a < 0 ? -a : a)) primes.insert(p);
      for (auto p : prime_divisors(b < 0 ? -b : b)) primes.insert(p);
      int prod = hilbert_symbol(a, b, Place::infinity());
      for (auto p : primes) prod *= hilbert_symbol(a, b, Place::prime(p));
      ASSERT_EQ(prod, 1) << a << "," << b;
      for (auto c : {-1, 2, 3, -5})
        for (std::int64_t p : {0, 2, 3, 5}) {
          Place v = p ? Place::prime(p) : Place::infinity();
          ASSERT_EQ(hilbert_symbol(a, b * c, v), hilbert_symbol(a, b, v) * hilbert_symbol(a, c, v));
        }
    }
}

TEST(Hilbert, AcceptsRationals) {
  // square classes: (a/c^2, b) = (a, b)
  EXPECT_EQ(hilbert_symbol(make_rational(-1, 9), make_rational(-1, 4), Place::prime(2)), -1);
  EXPECT_EQ(hilbert_symbol(make_rational(3, 2), Rational(5), Place::prime(5)),
            hilbert_symbol(6, 5, Place::prime(5)));
}

TEST(Cyclotomic, BasicIdentities) {
  auto z = Cyclotomic::e(make_rational(1, 3));
  EXPECT_TRUE((z * z * z - Cyclotomic(1)).is_zero());
  EXPECT_TRUE((Cyclotomic(1) + z + z * z).is_zero());
  EXPECT_EQ(Cyclotomic::e(make_rational(1, 2)), Cyclotomic(-1));
  EXPECT_EQ(Cyclotomic::e(make_rational(3, 6)), Cyclotomic(-1));
  // lcm lifting: e(1/4) e(1/6) = e(5/12)
  EXPECT_EQ(Cyclotomic::e(make_rational(1, 4)) * Cyclotomic::e(make_rational(1, 6)),
            Cyclotomic::e(make_rational(5, 12)));
  // e(1/12) + e(5/12) ... sum over primitive 12th roots is mu(12) = 0
  Cyclotomic s;
  for (long k : {1, 5, 7, 11}) s += Cyclotomic::e(make_rational(k, 12));
  EXPECT_TRUE(s.is_zero());
}

TEST(Cyclotomic, ConjugateNormInverse) {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> d(-4, 4);
  for (long n : {3, 4, 5, 8, 12, 15}) {
    Cyclotomic x;
    for (long k = 0; k < n; ++k) x += Cyclotomic(make_rational(d(rng), 1 + (k % 3))) * Cyclotomic::root_of_unity(n, k);
    if (x.is_zero()) continue;
    EXPECT_EQ(x * x.inverse(), Cyclotomic(1));
    auto xx = x * x.conj();
    EXPECT_EQ(xx.conj(), xx);
    EXPECT_FALSE(xx.is_zero());
  }
}

TEST(Cyclotomic, GaussSumSquare) {
  // (sum_x (x/p) e(x/p))^2 = (-1/p) p
  for (std::int64_t p : {3, 5, 7, 11, 13}) {
    Cyclotomic g;
    for (std::int64_t x = 1; x < p; ++x)
      g += Cyclotomic(kronecker_symbol(x, p)) * Cyclotomic::e(make_rational(x, p));
    auto g2 = g * g;
    ASSERT_TRUE(g2.is_rational());
    EXPECT_EQ(g2.rational_value(), Rational(kronecker_symbol(-1, p) * p));
  }
}

TEST(Cyclotomic, ReducedDescendsConductor) {
  auto x = Cyclotomic::e(make_rational(1, 3)).lift(12);
  EXPECT_EQ(x.reduced().conductor(), 3);
  EXPECT_EQ(x, Cyclotomic::e(make_rational(1, 3)));
}

TEST(AdditiveCharacter, Examples) {
  EXPECT_EQ(additive_character(3, Rational(0)), Cyclotomic(1));
  auto w = additive_character(3, make_rational(1, 3));
  EXPECT_EQ(w * w * w, Cyclotomic(1));
  EXPECT_FALSE(w == Cyclotomic(1));
  EXPECT_EQ(w, Cyclotomic::e(make_rational(-1, 3)));
  auto v = additive_character(2, make_rational(7, 4));
  EXPECT_EQ(v * v, Cyclotomic(-1));
  EXPECT_EQ(v * v * v * v, Cyclotomic(1));
  EXPECT_EQ(additive_character(2, make_rational(7, 4), CharacterSign::Positive), v.conj());
}

TEST(AdditiveCharacter, Homomorphism) {
  for (std::int64_t p : {2, 3, 5}) {
    std::vector<Rational> xs{Rational(0), make_rational(1, p), make_rational(3, p * p), make_rational(-5, p),
                             make_rational(7, 1)};
    for (const auto &x : xs)
      for (const auto &y : xs)
        ASSERT_EQ(additive_character(p, x + y), additive_character(p, x) * additive_character(p, y));
  }
  EXPECT_THROW(additive_character(3, make_rational(1, 2)), PreconditionError);
}

TEST(Dft, SmallMatrices) {
  auto a = dft_matrix(2);
  EXPECT_EQ(a[0][0], Cyclotomic(1));
  EXPECT_EQ(a[0][1], Cyclotomic(1));
  EXPECT_EQ(a[1][0], Cyclotomic(1));
  EXPECT_EQ(a[1][1], Cyclotomic(-1));
  auto b = dft_matrix(3);
  for (const auto &x : b[0]) EXPECT_EQ(x, Cyclotomic(1));
  EXPECT_EQ(b[1][1], Cyclotomic::e(make_rational(1, 3)));
}

TEST(Dft, Unitarity) {
  for (std::int64_t p : {2, 3, 5, 7, 11}) {
    auto a = dft_matrix(p);
    auto prod = multiply(a, conjugate_transpose(a));
    for (std::int64_t i = 0; i < p; ++i)
      for (std::int64_t j = 0; j < p; ++j)
        ASSERT_EQ(prod[i][j], Cyclotomic(i == j ? p : 0)) << p << " " << i << "," << j;
  }
}

TEST(Dft, CramerMatchesGaussianSolve) {
  for (std::int64_t p : {2, 3, 5}) {
    auto a = dft_matrix(p);
    EXPECT_FALSE(determinant(a).is_zero());
    std::vector<Cyclotomic> rhs;
    for (std::int64_t i = 0; i < p; ++i) rhs.push_back(Cyclotomic(make_rational(i + 1, 2)) + Cyclotomic::e(make_rational(i, p)));
    auto x = solve(a, rhs);
    EXPECT_EQ(x, cramer(a, rhs));
    EXPECT_EQ(multiply(a, x), rhs);
  }
}
