#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <string>
#include <vector>

#include "quatmatch/classsets/ideals.hpp"

namespace quatmatch::classsets {

/// DN/12 prod_{p|D}(1 - 1/p) prod_{p|N}(1 + 1/p)
inline Rational eichler_mass(std::int64_t D, std::int64_t N) {
  Rational m = exactnum::make_rational(static_cast<long>(D * N), 12);
  for (auto p : exactnum::prime_divisors(D)) m *= exactnum::make_rational(static_cast<long>(p - 1), static_cast<long>(p));
  for (auto p : exactnum::prime_divisors(N)) m *= exactnum::make_rational(static_cast<long>(p + 1), static_cast<long>(p));
  return m;
}

/// |O^x| / 2 for a definite order.
inline std::int64_t unit_weight(const OrderLattice &O) {
  require(O.algebra().is_definite(), "unit_weight: algebra must be definite");
  std::int64_t units = count_vectors(O, 1);
  if (units % 2 != 0 || units == 0) throw CertificateError("unit_weight: odd unit count");
  return units / 2;
}

struct IdealClassSet {
  std::int64_t D = 0, N = 0;
  OrderLattice order;
  std::vector<RightIdeal> representatives;
  std::vector<std::int64_t> weights;
  Rational mass;
  std::int64_t traversal_prime = 0;

  std::size_t class_number() const { return representatives.size(); }
};

inline std::int64_t default_traversal_prime(std::int64_t D, std::int64_t N, std::int64_t after = 1) {
  for (std::int64_t l = after + 1;; ++l)
    if (exactnum::is_prime(l) && (D * N) % l != 0) return l;
}

inline void sort_classes(IdealClassSet &cs) {
  std::vector<std::size_t> idx(cs.representatives.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::vector<std::string> keys;
  for (const auto &I : cs.representatives) keys.push_back(I.lattice.canonical_text());
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    const auto &Ia = cs.representatives[a], &Ib = cs.representatives[b];
    if (Ia.nrd != Ib.nrd) return Ia.nrd < Ib.nrd;
    return keys[a] < keys[b];
  });
  std::vector<RightIdeal> reps;
  std::vector<std::int64_t> ws;
  for (auto i : idx) {
    reps.push_back(cs.representatives[i]);
    ws.push_back(cs.weights[i]);
  }
  cs.representatives = std::move(reps);
  cs.weights = std::move(ws);
}

/// Class set by neighbor traversal from O, stopped by the mass certificate.
inline IdealClassSet compute_class_set(const OrderLattice &O, std::int64_t traversal_prime = 0) {
  const auto &A = O.algebra();
  require(A.is_definite(), "ideal_class_set: algebra must be definite");
  std::int64_t D = A.discriminant();
  std::int64_t N = O.level_N > 0 ? O.level_N : 1;
  require(std::gcd(N, D) == 1, "ideal_class_set: level must be coprime to D");
  IdealClassSet cs{D, N, O, {}, {}, eichler_mass(D, N), 0};
  std::int64_t l = traversal_prime > 0 ? traversal_prime : default_traversal_prime(D, N);
  require((D * N) % l != 0 && exactnum::is_prime(l), "ideal_class_set: traversal prime must not divide DN");
  cs.traversal_prime = l;

  RightIdeal unit = RightIdeal::unit(O);
  cs.representatives.push_back(unit);
  cs.weights.push_back(unit_weight(O));
  Rational total = exactnum::make_rational(1, cs.weights[0]);
  std::deque<RightIdeal> queue{unit};
  while (total < cs.mass && !queue.empty()) {
    RightIdeal I = queue.front();
    queue.pop_front();
    for (auto &J : p_neighbors(I, O, l)) {
      bool known = false;
      for (const auto &K : cs.representatives)
        if (ideals_equivalent(J, K)) {
          known = true;
          break;
        }
      if (known) continue;
      std::int64_t w = unit_weight(left_order(J));
      cs.representatives.push_back(J);
      cs.weights.push_back(w);
      total += exactnum::make_rational(1, w);
      queue.push_back(J);
      if (total >= cs.mass) break;
    }
  }
  if (total != cs.mass)
    throw CertificateError("ideal_class_set: mass mismatch, found " + exactnum::to_string(total) +
                           " expected " + exactnum::to_string(cs.mass));
  sort_classes(cs);
  return cs;
}

struct GenusLattice {
  std::size_t i = 0, j = 0;
  OrderLattice lattice;
  Rational scale; // nrd(I_i) nrd(I_j)
  QuadraticForm form;
};

/// L_ij = I_j conj(I_i) with form nrd / (nrd(I_i) nrd(I_j)).
inline GenusLattice genus_lattice(const IdealClassSet &cs, std::size_t i, std::size_t j) {
  const auto &Ii = cs.representatives[i], &Ij = cs.representatives[j];
  auto L = orders::lattice_product(Ij.lattice, orders::lattice_conjugate(Ii.lattice));
  Rational s = Ii.nrd * Ij.nrd;
  auto g = scaled_gram(L, s);
  QuadraticForm f = QuadraticForm::from_rational(g);
  Rational det = orders::determinant(g);
  Rational dn(static_cast<long>(cs.D * cs.N));
  if (det != dn * dn) throw CertificateError("genus_lattice: Gram determinant is not (DN)^2");
  return {i, j, L, s, f};
}

inline std::vector<std::vector<GenusLattice>> genus_lattices(const IdealClassSet &cs) {
  std::size_t h = cs.class_number();
  std::vector<std::vector<GenusLattice>> out(h);
  for (std::size_t i = 0; i < h; ++i)
    for (std::size_t j = 0; j < h; ++j) out[i].push_back(genus_lattice(cs, i, j));
  return out;
}

/// Weighted genus average of theta series, coefficients 0..m_max.
inline std::vector<Rational> genus_theta(const IdealClassSet &cs, std::int64_t m_max) {
  std::size_t h = cs.class_number();
  std::vector<Rational> acc(static_cast<std::size_t>(m_max) + 1, Rational(0));
  Rational wsum = 0;
  for (std::size_t i = 0; i < h; ++i)
    for (std::size_t j = i; j < h; ++j) {
      Rational wt = exactnum::make_rational(1, cs.weights[i] * cs.weights[j]);
      if (i != j) wt *= 2; // L_ji is isometric to L_ij by conjugation
      wsum += wt;
      auto th = theta_series(genus_lattice(cs, i, j).form, m_max);
      for (std::size_t m = 0; m < th.size(); ++m) acc[m] += wt * Rational(static_cast<long>(th[m]));
    }
  for (auto &v : acc) v /= wsum;
  return acc;
}

inline Rational genus_average(const IdealClassSet &cs, std::int64_t m) {
  require(m >= 1, "genus_average: m must be positive");
  return genus_theta(cs, m)[static_cast<std::size_t>(m)];
}

} // namespace quatmatch::classsets
