#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "quatmatch/orders/lattice.hpp"

namespace quatmatch::orders {

/// Z<1, i, j, k>
inline OrderLattice standard_order(const QuaternionAlgebra &A) {
  return OrderLattice(A, {QuatElement::basis(0), QuatElement::basis(1), QuatElement::basis(2),
                          QuatElement::basis(3)});
}

/// Reduced discriminant of an integral lattice: sqrt |det gram|.
inline Integer reduced_discriminant(const OrderLattice &O) {
  Integer d = dual_index(O);
  Integer r = exactnum::isqrt(d);
  if (r * r != d) throw CertificateError("Gram determinant of an order is not a square");
  return r;
}

namespace detail {

inline bool all_integral(const OrderLattice &L) {
  const auto &A = L.algebra();
  for (const auto &e : L.basis()) {
    if (A.reduced_trace(e).get_den() != 1 || A.reduced_norm(e).get_den() != 1) return false;
  }
  auto g = L.gram();
  for (const auto &row : g)
    for (const auto &v : row)
      if (v.get_den() != 1) return false;
  return true;
}

/// Smallest ring containing O and z, if it stays integral.
inline std::optional<OrderLattice> ring_closure(const OrderLattice &O, const QuatElement &z,
                                                int max_rounds = 32) {
  auto gens = O.basis();
  gens.push_back(z);
  OrderLattice L(O.algebra(), gens);
  for (int round = 0; round < max_rounds; ++round) {
    if (!all_integral(L)) return std::nullopt;
    OrderLattice next = lattice_sum(L, lattice_product(L, L));
    if (next == L) return L;
    L = next;
  }
  return std::nullopt;
}

} // namespace detail

/// A maximal order: saturate Z<1,i,j,k> prime by prime until the reduced
/// discriminant equals D.
inline OrderLattice maximal_order(const QuaternionAlgebra &A) {
  const std::int64_t D = A.discriminant();
  OrderLattice O = standard_order(A);
  for (int guard = 0; guard < 64; ++guard) {
    Integer d = reduced_discriminant(O);
    if (d == D) break;
    bool enlarged = false;
    for (auto [p, e] : exactnum::factorize(d.get_si())) {
      int target = (D % p == 0) ? 1 : 0;
      if (e <= target) continue;
      // candidates y/p with y running over O/pO
      auto b = O.basis();
      std::int64_t total = exactnum::ipow(p, 4);
      for (std::int64_t code = 1; code < total && !enlarged; ++code) {
        QuatElement y;
        std::int64_t t = code;
        for (std::size_t r = 0; r < 4; ++r, t /= p) y += b[r] * Rational(static_cast<long>(t % p));
        QuatElement z = y * exactnum::make_rational(1, static_cast<long>(p));
        if (A.reduced_trace(z).get_den() != 1 || A.reduced_norm(z).get_den() != 1) continue;
        auto closed = detail::ring_closure(O, z);
        if (!closed) continue;
        O = *closed;
        enlarged = true;
      }
      if (enlarged) break;
      throw CertificateError("maximal_order: saturation failed at p=" + std::to_string(p));
    }
  }
  if (reduced_discriminant(O) != D || !O.is_order())
    throw CertificateError("maximal_order: saturation did not reach discriminant D");
  O.level_D = D;
  O.level_N = 1;
  return O;
}

/// Element coordinates reduced mod m in the lattice basis; x must lie in L.
inline std::vector<Integer> coords_mod(const OrderLattice &L, const QuatElement &x, const Integer &m) {
  auto c = L.coordinates(x);
  if (!c) throw CertificateError("coords_mod: element outside the lattice");
  for (auto &v : *c) v = exactnum::mod(v, m);
  return *c;
}

inline bool congruent_mod(const OrderLattice &L, const QuatElement &x, const QuatElement &y,
                          const Integer &m) {
  for (const auto &v : coords_mod(L, x - y, m))
    if (v != 0) return false;
  return true;
}

/// Matrix-unit frame of O/p^k O ~ M_2(Z/p^k).
struct LocalSplitting {
  std::int64_t p = 0;
  int k = 0;
  std::array<std::array<QuatElement, 2>, 2> e; // e[i][j] ~ E_ij

  /// Image of x in M_2(Z/p^k): entry (i, j) is the scalar c with
  /// e_ii x e_jj = c e_ij.
  std::array<std::array<Integer, 2>, 2> matrix_of(const OrderLattice &O, const QuatElement &x) const;
};

namespace detail {

inline QuatElement reduce_element(const OrderLattice &O, const QuatElement &x, const Integer &m) {
  return O.element(coords_mod(O, x, m));
}

/// Scalar c with y = c * u mod m, where u is nonzero mod p; nullopt if none.
inline std::optional<Integer> scalar_ratio(const OrderLattice &O, const QuatElement &y,
                                           const QuatElement &u, std::int64_t p, const Integer &m) {
  auto cy = coords_mod(O, y, m), cu = coords_mod(O, u, m);
  std::size_t piv = 4;
  for (std::size_t i = 0; i < 4; ++i)
    if (exactnum::mod(cu[i], Integer(static_cast<long>(p))) != 0) {
      piv = i;
      break;
    }
  if (piv == 4) return std::nullopt;
  Integer inv;
  mpz_invert(inv.get_mpz_t(), cu[piv].get_mpz_t(), m.get_mpz_t());
  Integer c = exactnum::mod(cy[piv] * inv, m);
  for (std::size_t i = 0; i < 4; ++i)
    if (exactnum::mod(cy[i] - c * cu[i], m) != 0) return std::nullopt;
  return c;
}

} // namespace detail

inline std::array<std::array<Integer, 2>, 2> LocalSplitting::matrix_of(const OrderLattice &O,
                                                                       const QuatElement &x) const {
  Integer m = exactnum::ipow(p, k);
  const auto &A = O.algebra();
  std::array<std::array<Integer, 2>, 2> out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      QuatElement y = A.mul(A.mul(e[i][i], x), e[j][j]);
      auto c = detail::scalar_ratio(O, y, e[i][j], p, m);
      if (!c) throw CertificateError("matrix_of: entry is not a multiple of the matrix unit");
      out[i][j] = *c;
    }
  return out;
}

/// Nontrivial idempotent mod p from an element with nrd = 0, trd != 0 mod p.
inline QuatElement idempotent_mod_p(const OrderLattice &O, std::int64_t p) {
  const auto &A = O.algebra();
  auto b = O.basis();
  std::int64_t total = exactnum::ipow(p, 4);
  Integer P(static_cast<long>(p));
  for (std::int64_t code = 1; code < total; ++code) {
    QuatElement x;
    std::int64_t t = code;
    for (std::size_t r = 0; r < 4; ++r, t /= p) x += b[r] * Rational(static_cast<long>(t % p));
    Integer n = A.reduced_norm(x).get_num(), tr = A.reduced_trace(x).get_num();
    if (exactnum::mod(n, P) != 0 || exactnum::mod(tr, P) == 0) continue;
    Integer inv;
    mpz_invert(inv.get_mpz_t(), tr.get_mpz_t(), P.get_mpz_t());
    return detail::reduce_element(O, x * Rational(inv), P);
  }
  throw PreconditionError("no idempotent mod " + std::to_string(p) + ": order is not split there");
}

inline LocalSplitting local_splitting(const OrderLattice &O, std::int64_t p, int k = 1) {
  const auto &A = O.algebra();
  require(exactnum::is_prime(p), "local_splitting: p must be prime");
  require(!A.is_ramified_at(p), "local_splitting: algebra is ramified at p");
  require(k >= 1, "local_splitting: k >= 1");
  Integer m = exactnum::ipow(p, k);
  QuatElement e = idempotent_mod_p(O, p);
  for (int prec = 1; prec < k; prec *= 2) {
    QuatElement e2 = A.mul(e, e);
    QuatElement e3 = A.mul(e2, e);
    e = detail::reduce_element(O, e2 * Rational(3) - e3 * Rational(2), m);
  }
  QuatElement one = QuatElement::scalar(1);
  QuatElement f = one - e;
  LocalSplitting S;
  S.p = p;
  S.k = k;
  S.e[0][0] = e;
  S.e[1][1] = f;
  auto b = O.basis();
  Integer P(static_cast<long>(p));
  bool found = false;
  for (const auto &y : b) {
    QuatElement u = A.mul(A.mul(e, y), f);
    bool nz = false;
    for (auto &v : coords_mod(O, u, P)) nz = nz || v != 0;
    if (!nz) continue;
    for (const auto &z : b) {
      QuatElement g = A.mul(A.mul(f, z), e);
      auto lam = detail::scalar_ratio(O, A.mul(u, g), e, p, m);
      if (!lam || exactnum::mod(*lam, P) == 0) continue;
      Integer inv;
      mpz_invert(inv.get_mpz_t(), lam->get_mpz_t(), m.get_mpz_t());
      S.e[0][1] = detail::reduce_element(O, u, m);
      S.e[1][0] = detail::reduce_element(O, g * Rational(inv), m);
      found = true;
      break;
    }
    if (found) break;
  }
  if (!found) throw CertificateError("local_splitting: no matrix-unit frame found");
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int r = 0; r < 2; ++r)
        for (int s = 0; s < 2; ++s) {
          QuatElement lhs = A.mul(S.e[i][j], S.e[r][s]);
          QuatElement rhs = (j == r) ? S.e[i][s] : QuatElement();
          if (!congruent_mod(O, lhs, rhs, m)) throw CertificateError("local_splitting: matrix-unit relation fails");
        }
  if (!congruent_mod(O, S.e[0][0] + S.e[1][1], one, m)) throw CertificateError("local_splitting: units do not sum to 1");
  return S;
}

/// {x in O : (1-e) x e in pO} for a rank-one idempotent e mod p.
inline OrderLattice eichler_order_at(const OrderLattice &O, std::int64_t p) {
  const auto &A = O.algebra();
  QuatElement e = idempotent_mod_p(O, p);
  QuatElement f = QuatElement::scalar(1) - e;
  auto b = O.basis();
  Integer P(static_cast<long>(p));
  // matrix of x -> f x e mod p in the basis of O; rows = images of b[r]
  std::vector<std::vector<std::int64_t>> img(4, std::vector<std::int64_t>(4));
  for (std::size_t r = 0; r < 4; ++r) {
    auto c = coords_mod(O, A.mul(A.mul(f, b[r]), e), P);
    for (std::size_t s = 0; s < 4; ++s) img[r][s] = c[s].get_si();
  }
  std::vector<QuatElement> gens;
  for (const auto &x : b) gens.push_back(x * Rational(static_cast<long>(p)));
  std::int64_t total = exactnum::ipow(p, 4);
  // kernel vectors: enumerate all of F_p^4 (p is small for Eichler levels)
  for (std::int64_t code = 1; code < total; ++code) {
    std::array<std::int64_t, 4> v{};
    std::int64_t t = code;
    for (std::size_t r = 0; r < 4; ++r, t /= p) v[r] = t % p;
    bool zero = true;
    for (std::size_t s = 0; s < 4 && zero; ++s) {
      std::int64_t acc = 0;
      for (std::size_t r = 0; r < 4; ++r) acc += v[r] * img[r][s];
      zero = acc % p == 0;
    }
    if (!zero) continue;
    QuatElement x;
    for (std::size_t r = 0; r < 4; ++r) x += b[r] * Rational(static_cast<long>(v[r]));
    gens.push_back(x);
  }
  OrderLattice out(A, gens);
  return out;
}

/// Eichler order of squarefree level N inside a maximal order.
inline OrderLattice eichler_order(const OrderLattice &Omax, std::int64_t N) {
  const std::int64_t D = Omax.algebra().discriminant();
  require(N >= 1, "eichler_order: N must be positive");
  require(std::gcd(N, D) == 1, "eichler_order: gcd(N, D) must be 1");
  if (!exactnum::is_squarefree(N)) throw UnsupportedInput("eichler_order: only squarefree levels are supported");
  OrderLattice O = Omax;
  for (auto p : exactnum::prime_divisors(N)) O = eichler_order_at(O, p);
  if (!O.is_order()) throw CertificateError("eichler_order: result is not closed under multiplication");
  if (reduced_discriminant(O) != Integer(static_cast<long>(D * N)))
    throw CertificateError("eichler_order: reduced discriminant is not DN");
  O.level_D = D;
  O.level_N = N;
  return O;
}

} // namespace quatmatch::orders
