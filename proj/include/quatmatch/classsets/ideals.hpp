#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "quatmatch/classsets/enumerate.hpp"
#include "quatmatch/orders/orders.hpp"

namespace quatmatch::classsets {

using orders::OrderLattice;
using quatalg::QuatElement;

struct RightIdeal {
  OrderLattice lattice;
  Rational nrd;

  static RightIdeal unit(const OrderLattice &O) { return {O, Rational(1)}; }
};

/// Gram matrix of the lattice scaled by 1/s.
inline RatMatrix scaled_gram(const OrderLattice &L, const Rational &s) {
  auto g = L.gram();
  for (auto &row : g)
    for (auto &v : row) v /= s;
  return g;
}

inline bool is_right_ideal(const RightIdeal &I, const OrderLattice &O) {
  return I.lattice.contains(orders::lattice_product(I.lattice, O));
}

/// O_l(I) = I conj(I) / nrd(I)
inline OrderLattice left_order(const RightIdeal &I) {
  auto prod = orders::lattice_product(I.lattice, orders::lattice_conjugate(I.lattice));
  return orders::lattice_scale(prod, 1 / I.nrd);
}

/// I ~ J iff I conj(J) has a vector of reduced norm nrd(I) nrd(J).
inline bool ideals_equivalent(const RightIdeal &I, const RightIdeal &J) {
  auto prod = orders::lattice_product(I.lattice, orders::lattice_conjugate(J.lattice));
  auto form = QuadraticForm::from_rational(scaled_gram(prod, I.nrd * J.nrd));
  return count_vectors(form, 1) > 0;
}

/// Right sub-ideals J of I with [I : J] = l^2, i.e. J = l I + v O for v of
/// rank one in I / l I.
inline std::vector<RightIdeal> p_neighbors(const RightIdeal &I, const OrderLattice &O, std::int64_t l) {
  const auto &A = O.algebra();
  require(exactnum::is_prime(l), "p_neighbors: l must be prime");
  if (A.is_ramified_at(l)) throw PreconditionError("p_neighbors: no local splitting at a ramified prime");
  require(O.level_N == 0 || O.level_N % l != 0, "p_neighbors: l divides the level");
  auto b = I.lattice.basis();
  auto ob = O.basis();
  Rational L(static_cast<long>(l));
  Rational target = I.lattice.gram_determinant() * L * L * L * L;
  std::vector<RightIdeal> out;
  std::set<std::string> seen;
  std::int64_t total = exactnum::ipow(l, 4);
  for (std::int64_t code = 1; code < total; ++code) {
    std::array<std::int64_t, 4> v{};
    std::int64_t t = code;
    for (std::size_t r = 0; r < 4; ++r, t /= l) v[r] = t % l;
    // projective normalization: first nonzero coordinate is 1
    std::size_t first = 0;
    while (v[first] == 0) ++first;
    if (v[first] != 1) continue;
    QuatElement x;
    for (std::size_t r = 0; r < 4; ++r) x += b[r] * Rational(static_cast<long>(v[r]));
    Rational q = A.reduced_norm(x) / (I.nrd * L);
    if (q.get_den() != 1) continue;
    std::vector<QuatElement> gens;
    for (const auto &e : b) gens.push_back(e * L);
    for (const auto &o : ob) gens.push_back(A.mul(x, o));
    OrderLattice J(A, gens);
    if (J.gram_determinant() != target) continue;
    if (!seen.insert(J.canonical_text()).second) continue;
    out.push_back({J, I.nrd * L});
  }
  if (out.size() != static_cast<std::size_t>(l + 1))
    throw CertificateError("p_neighbors: expected l+1 neighbors, found " + std::to_string(out.size()));
  return out;
}

} // namespace quatmatch::classsets
