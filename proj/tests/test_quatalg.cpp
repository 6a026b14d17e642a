#include <gtest/gtest.h>

#include <random>

#include "quatmatch/quatalg/algebra.hpp"

using namespace quatmatch;
using namespace quatmatch::quatalg;
using exactnum::make_rational;
using exactnum::Place;
using exactnum::Rational;

namespace {

QuatElement random_element(std::mt19937 &rng) {
  std::uniform_int_distribution<int> num(-9, 9), den(1, 5);
  QuatElement x;
  for (int i = 0; i < 4; ++i) x.c[static_cast<std::size_t>(i)] = make_rational(num(rng), den(rng));
  return x;
}

} // namespace

TEST(ConstructAlgebra, Examples) {
  auto A1 = construct_algebra(1);
  EXPECT_EQ(A1.a(), 1);
  EXPECT_EQ(A1.b(), 1);
  EXPECT_TRUE(A1.ramified_places().empty());

  auto A2 = construct_algebra(2);
  EXPECT_EQ(A2.a(), -1);
  EXPECT_EQ(A2.b(), -1);
  EXPECT_EQ(A2.ramified_places(), (std::set<Place>{Place::infinity(), Place::prime(2)}));

  auto A6 = construct_algebra(6);
  EXPECT_EQ(A6.a(), -1);
  EXPECT_EQ(A6.b(), 3);
  EXPECT_EQ(A6.ramified_places(), (std::set<Place>{Place::prime(2), Place::prime(3)}));
  EXPECT_FALSE(A6.is_definite());
}

TEST(ConstructAlgebra, RamificationMatchesDiscriminantUpTo210) {
  for (std::int64_t D = 1; D <= 210; ++D) {
    if (!exactnum::is_squarefree(D)) continue;
    auto A = construct_algebra(D);
    auto primes = exactnum::prime_divisors(D);
    std::set<Place> want;
    for (auto p : primes) want.insert(Place::prime(p));
    bool definite = primes.size() % 2 == 1;
    if (definite) want.insert(Place::infinity());
    ASSERT_EQ(A.ramified_places(), want) << "D=" << D;
    ASSERT_EQ(A.ramified_places().size() % 2, 0u);
    ASSERT_EQ(A.discriminant(), D);
    if (definite) {
      ASSERT_LT(A.a(), 0) << "D=" << D;
      ASSERT_LT(A.b(), 0) << "D=" << D;
    }
    // recompute the ramification set by brute force over all places dividing 2ab
    for (std::int64_t p = 2; p <= 2 * std::abs(A.a() * A.b()); ++p) {
      if (!exactnum::is_prime(p)) continue;
      ASSERT_EQ(exactnum::hilbert_symbol(A.a(), A.b(), Place::prime(p)) == -1, D % p == 0);
    }
  }
}

TEST(ConstructAlgebra, RejectsBadInput) {
  EXPECT_THROW(construct_algebra(12), PreconditionError);
  EXPECT_THROW(construct_algebra(0), PreconditionError);
}

TEST(QuatElement, NormTraceExamples) {
  auto A = construct_algebra(2);
  QuatElement one = QuatElement::scalar(1);
  EXPECT_EQ(reduced_norm(A, one), 1);
  EXPECT_EQ(reduced_trace(A, one), 2);
  QuatElement x{Rational(0), Rational(1), Rational(1), Rational(1)};
  EXPECT_EQ(reduced_norm(A, x), 3);
  EXPECT_EQ(reduced_trace(A, x), 0);
  EXPECT_EQ(A.mul(x, x), QuatElement::scalar(-3));
}

TEST(QuatElement, MultiplicativeNormAndAntiInvolution) {
  std::mt19937 rng(2024);
  for (std::int64_t D : {1, 2, 3, 6, 10, 30}) {
    auto A = construct_algebra(D);
    for (int it = 0; it < 40; ++it) {
      auto x = random_element(rng), y = random_element(rng), z = random_element(rng);
      ASSERT_EQ(reduced_norm(A, A.mul(x, y)), reduced_norm(A, x) * reduced_norm(A, y));
      ASSERT_EQ(conjugate(A, A.mul(x, y)), A.mul(conjugate(A, y), conjugate(A, x)));
      ASSERT_EQ(A.mul(A.mul(x, y), z), A.mul(x, A.mul(y, z)));
      // x + conj(x) = trd(x), x conj(x) = nrd(x)
      ASSERT_EQ(x + conjugate(A, x), QuatElement::scalar(reduced_trace(A, x)));
      ASSERT_EQ(A.mul(x, conjugate(A, x)), QuatElement::scalar(reduced_norm(A, x)));
      // polarization is bilinear
      auto pol = [&](const QuatElement &u, const QuatElement &v) -> Rational {
        return reduced_norm(A, u + v) - reduced_norm(A, u) - reduced_norm(A, v);
      };
      ASSERT_EQ(pol(x + z, y), pol(x, y) + pol(z, y));
      ASSERT_EQ(pol(x, y), A.bilinear(x, y));
    }
  }
}

TEST(LocalRamifiedModel, Examples) {
  auto m3 = local_ramified_model(3);
  EXPECT_EQ(m3.t, 0);
  EXPECT_EQ(m3.n, 1);
  EXPECT_EQ(m3.d(1, 0), 1);
  EXPECT_EQ(m3.d(0, 1), 1);
  EXPECT_EQ(m3.d(1, 1), 2);
  auto m2 = local_ramified_model(2);
  EXPECT_EQ(m2.t, 1);
  EXPECT_EQ(m2.n, 1);
  EXPECT_EQ(m2.d(1, 1), 3);
  for (std::int64_t p : {2, 3, 5, 7, 11}) {
    auto m = local_ramified_model(p);
    EXPECT_EQ(m.d(0, 0), 0);
    // norm form of the unramified extension is anisotropic mod p
    for (std::int64_t k = 0; k < p; ++k)
      for (std::int64_t l = 0; l < p; ++l)
        if (k || l) {
          ASSERT_NE(m.d(k, l) % p, 0);
        }
  }
  EXPECT_THROW(local_ramified_model(construct_algebra(2), 3), PreconditionError);
}
