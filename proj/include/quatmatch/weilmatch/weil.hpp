#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "quatmatch/exactnum/cyclotomic.hpp"
#include "quatmatch/exactnum/dft.hpp"
#include "quatmatch/exactnum/symbols.hpp"
#include "quatmatch/quatalg/algebra.hpp"

namespace quatmatch::weilmatch {

using exactnum::CharacterSign;
using exactnum::Cyclotomic;
using exactnum::Integer;
using exactnum::Rational;

enum class SpaceKind { Split, Ramified };

/// Local quadratic space at p, modelled on L^#/L = (Z/p)^2 for L = L_1^sp
/// (split) or L^ra (ramified). A coset index (x, y) stands for
///   split:    [[0, y/p], [x, 0]] + L_1^sp,  Q = -x y / p
///   ramified: (x + y u) / pi + L^ra,         Q = -d_{x,y} / p
struct LocalQuadSpace {
  std::int64_t p = 2;
  SpaceKind kind = SpaceKind::Split;
  int gamma = 1; // Weil index
  CharacterSign sign = CharacterSign::Negative;
  quatalg::LocalRamifiedModel model{};

  static LocalQuadSpace split(std::int64_t p, int gamma = 1, CharacterSign s = CharacterSign::Negative) {
    require(exactnum::is_prime(p), "local space: p must be prime");
    return {p, SpaceKind::Split, gamma, s, {}};
  }
  static LocalQuadSpace ramified(std::int64_t p, int gamma = -1, CharacterSign s = CharacterSign::Negative) {
    require(exactnum::is_prime(p), "local space: p must be prime");
    return {p, SpaceKind::Ramified, gamma, s, quatalg::local_ramified_model(p)};
  }

  std::size_t size() const { return static_cast<std::size_t>(p * p); }
  std::size_t index(std::int64_t x, std::int64_t y) const {
    return static_cast<std::size_t>(md(x) + p * md(y));
  }
  std::pair<std::int64_t, std::int64_t> coords(std::size_t idx) const {
    return {static_cast<std::int64_t>(idx) % p, static_cast<std::int64_t>(idx) / p};
  }
  std::int64_t md(std::int64_t v) const { return ((v % p) + p) % p; }

  /// p Q(mu) as an integer (well defined mod p).
  std::int64_t pq(std::int64_t x, std::int64_t y) const {
    if (kind == SpaceKind::Split) return -x * y;
    return -model.d(x, y);
  }

  /// p (mu, nu)
  std::int64_t pbil(std::int64_t x1, std::int64_t y1, std::int64_t x2, std::int64_t y2) const {
    return pq(x1 + x2, y1 + y2) - pq(x1, y1) - pq(x2, y2);
  }

  /// [L^# : L]
  std::int64_t dual_index() const { return p * p; }
  /// vol(L) = [L^# : L]^{-1/2}
  Rational lattice_volume() const { return exactnum::make_rational(1, p); }

  Cyclotomic psi(const Rational &x) const { return exactnum::additive_character(p, x, sign); }
  Cyclotomic psi_over_p(std::int64_t a) const { return psi(exactnum::make_rational(md(a), p)); }
};

/// Function on L^#/L with cyclotomic values.
struct SchwartzFunction {
  LocalQuadSpace space;
  std::vector<Cyclotomic> values;

  explicit SchwartzFunction(LocalQuadSpace s) : space(s), values(s.size(), Cyclotomic(0)) {}

  const Cyclotomic &at(std::int64_t x, std::int64_t y) const { return values[space.index(x, y)]; }
  Cyclotomic &at(std::int64_t x, std::int64_t y) { return values[space.index(x, y)]; }

  friend bool operator==(const SchwartzFunction &a, const SchwartzFunction &b) {
    return a.space.p == b.space.p && a.space.kind == b.space.kind && a.values == b.values;
  }
};

/// Finite rational combination of coset indicators.
struct SchwartzCombo {
  LocalQuadSpace space;
  std::map<std::pair<std::int64_t, std::int64_t>, Rational> terms;

  explicit SchwartzCombo(LocalQuadSpace s) : space(s) {}

  SchwartzCombo &add(std::int64_t x, std::int64_t y, const Rational &c) {
    auto key = std::make_pair(space.md(x), space.md(y));
    terms[key] += c;
    if (terms[key] == 0) terms.erase(key);
    return *this;
  }

  SchwartzCombo &add(const SchwartzCombo &o, const Rational &c) {
    for (const auto &[k, v] : o.terms) add(k.first, k.second, c * v);
    return *this;
  }

  SchwartzFunction function() const {
    SchwartzFunction f(space);
    for (const auto &[k, v] : terms) f.at(k.first, k.second) = v;
    return f;
  }
};

// ---------------------------------------------------------------------------
// standard functions

/// char(mu_{x,y} + L)
inline SchwartzCombo coset_indicator(const LocalQuadSpace &V, std::int64_t x, std::int64_t y) {
  return SchwartzCombo(V).add(x, y, 1);
}

/// char(L): the zero coset.
inline SchwartzCombo char_lattice(const LocalQuadSpace &V) { return coset_indicator(V, 0, 0); }

/// char(L^#): all cosets.
inline SchwartzCombo char_dual(const LocalQuadSpace &V) {
  SchwartzCombo c(V);
  for (std::int64_t x = 0; x < V.p; ++x)
    for (std::int64_t y = 0; y < V.p; ++y) c.add(x, y, 1);
  return c;
}

/// char(L_0^sp) = sum of the cosets mu_{x,0}.
inline SchwartzCombo char_l0(const LocalQuadSpace &V) {
  require(V.kind == SpaceKind::Split, "char_l0: split space required");
  SchwartzCombo c(V);
  for (std::int64_t x = 0; x < V.p; ++x) c.add(x, 0, 1);
  return c;
}

inline SchwartzCombo phi_sp(const LocalQuadSpace &V, int i) {
  require(V.kind == SpaceKind::Split, "phi_sp: split space required");
  if (i == 0) return char_l0(V);
  if (i == 1) return char_lattice(V);
  if (i == 2) return char_dual(V);
  throw PreconditionError("phi_sp: index must be 0, 1 or 2");
}

// ---------------------------------------------------------------------------
// group action

struct CosetRep {
  enum class Kind { Identity, W, WN, N, M, NMinus };
  Kind kind = Kind::Identity;
  Rational param = 0;

  static CosetRep identity() { return {Kind::Identity, 0}; }
  static CosetRep w() { return {Kind::W, 0}; }
  static CosetRep wn(std::int64_t i) { return {Kind::WN, Rational(static_cast<long>(i))}; }
  static CosetRep n(const Rational &b) { return {Kind::N, b}; }
  static CosetRep m(const Rational &a) { return {Kind::M, a}; }
  static CosetRep n_minus(const Rational &c) { return {Kind::NMinus, c}; }

  std::string to_string() const {
    switch (kind) {
    case Kind::Identity: return "1";
    case Kind::W: return "w";
    case Kind::WN: return "w n(" + exactnum::to_short_string(param) + ")";
    case Kind::N: return "n(" + exactnum::to_short_string(param) + ")";
    case Kind::M: return "m(" + exactnum::to_short_string(param) + ")";
    case Kind::NMinus: return "n_-(" + exactnum::to_short_string(param) + ")";
    }
    return "?";
  }
};

namespace detail {

/// b mod p for a p-integral rational b.
inline std::int64_t residue(const Rational &b, std::int64_t p) {
  Integer P(static_cast<long>(p));
  if (exactnum::mod(b.get_den(), P) == 0)
    throw UnsupportedInput("Weil action: parameter is not p-integral (needs a finer coset resolution)");
  Integer inv;
  Integer den = b.get_den();
  mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), P.get_mpz_t());
  return exactnum::mod(b.get_num() * inv, P).get_si();
}

inline SchwartzFunction act_n(std::int64_t b, const SchwartzFunction &f) {
  const auto &V = f.space;
  SchwartzFunction g(V);
  for (std::size_t idx = 0; idx < V.size(); ++idx) {
    if (f.values[idx].is_zero()) continue;
    auto [x, y] = V.coords(idx);
    g.values[idx] = V.psi_over_p(b * V.pq(x, y)) * f.values[idx];
  }
  return g;
}

/// Coefficients of c as a combination of zeta_n^e, e in [0, n); nullopt if
/// c does not lie in Q(zeta_n).
inline std::optional<std::vector<Rational>> exponent_vector(const Cyclotomic &c, long n) {
  if (n % c.conductor() != 0) return std::nullopt;
  auto lifted = c.lift(n);
  std::vector<Rational> v(static_cast<std::size_t>(n), Rational(0));
  for (std::size_t k = 0; k < lifted.coefficients().size(); ++k) v[k] = lifted.coefficients()[k];
  return v;
}

/// omega(w) f (nu) = gamma vol(L) sum_mu f(mu) psi((nu, mu))
inline SchwartzFunction act_w(const SchwartzFunction &f) {
  const auto &V = f.space;
  const long p = static_cast<long>(V.p);
  const std::size_t P = static_cast<std::size_t>(p);
  Rational scale = V.lattice_volume() * V.gamma;
  // psi((nu, mu)) = zeta_p^{s * pbil}, s = -1 for the negative convention
  const std::int64_t s = V.sign == CharacterSign::Negative ? -1 : 1;
  std::vector<std::pair<std::size_t, std::vector<Rational>>> support;
  for (std::size_t mu = 0; mu < V.size(); ++mu) {
    if (f.values[mu].is_zero()) continue;
    auto ev = exponent_vector(f.values[mu], p);
    if (!ev) throw UnsupportedInput("Weil action: value outside Q(zeta_p)");
    support.emplace_back(mu, std::move(*ev));
  }
  SchwartzFunction g(V);
  std::vector<Rational> acc(P);
  for (std::size_t nu = 0; nu < V.size(); ++nu) {
    auto [x1, y1] = V.coords(nu);
    for (auto &a : acc) a = 0;
    for (const auto &[mu, ev] : support) {
      auto [x2, y2] = V.coords(mu);
      std::size_t shift = static_cast<std::size_t>(V.md(s * V.pbil(x1, y1, x2, y2)));
      for (std::size_t e = 0; e < P; ++e)
        if (ev[e] != 0) acc[(e + shift) % P] += ev[e];
    }
    for (auto &a : acc) a *= scale;
    g.values[nu] = Cyclotomic::from_exponents(p, acc);
  }
  return g;
}

/// f(x) -> f(a x), a a unit
inline SchwartzFunction act_m(std::int64_t a, const SchwartzFunction &f) {
  const auto &V = f.space;
  SchwartzFunction g(V);
  for (std::size_t idx = 0; idx < V.size(); ++idx) {
    auto [x, y] = V.coords(idx);
    g.values[idx] = f.at(a * x, a * y);
  }
  return g;
}

} // namespace detail

/// omega(g) f for a generator word g.
inline SchwartzFunction weil_act(const CosetRep &g, const SchwartzFunction &f) {
  const auto &V = f.space;
  switch (g.kind) {
  case CosetRep::Kind::Identity: return f;
  case CosetRep::Kind::W: return detail::act_w(f);
  case CosetRep::Kind::WN: return detail::act_w(detail::act_n(detail::residue(g.param, V.p), f));
  case CosetRep::Kind::N: return detail::act_n(detail::residue(g.param, V.p), f);
  case CosetRep::Kind::M: {
    std::int64_t a = detail::residue(g.param, V.p);
    if (a == 0) throw UnsupportedInput("Weil action: m(a) implemented for units a only");
    return detail::act_m(a, f);
  }
  case CosetRep::Kind::NMinus: {
    // n_-(c) = w^{-1} n(-c) w, omega(w^{-1}) f = omega(w) f(-x) since gamma^2 = 1
    std::int64_t c = detail::residue(g.param, V.p);
    auto h = detail::act_n(-c, detail::act_w(f));
    return detail::act_m(V.p - 1, detail::act_w(h));
  }
  }
  return f;
}

inline SchwartzFunction weil_act(const CosetRep &g, const SchwartzCombo &phi) {
  return weil_act(g, phi.function());
}

/// lambda(phi)(g) = omega(g) phi (0)
inline Cyclotomic lambda_eval(const SchwartzFunction &f, const CosetRep &g) {
  const auto &V = f.space;
  if (g.kind == CosetRep::Kind::W || g.kind == CosetRep::Kind::WN) {
    // only the value at 0 is needed: gamma vol(L) sum_mu psi(i Q(mu)) f(mu)
    std::int64_t i = g.kind == CosetRep::Kind::WN ? detail::residue(g.param, V.p) : 0;
    Cyclotomic s;
    for (std::size_t mu = 0; mu < V.size(); ++mu) {
      if (f.values[mu].is_zero()) continue;
      auto [x, y] = V.coords(mu);
      s += V.psi_over_p(i * V.pq(x, y)) * f.values[mu];
    }
    return s * Cyclotomic(V.lattice_volume() * V.gamma);
  }
  return weil_act(g, f).at(0, 0);
}

inline Cyclotomic lambda_eval(const SchwartzCombo &phi, const CosetRep &g) {
  return lambda_eval(phi.function(), g);
}

enum class Level { K0, K0Plus, K };

inline std::string to_string(Level l) {
  switch (l) {
  case Level::K0: return "K_0(p)";
  case Level::K0Plus: return "K_0^+(p)";
  case Level::K: return "K(p)";
  }
  return "?";
}

/// Double-coset transversal on which a section of the given level is determined.
inline std::vector<CosetRep> transversal(Level l, std::int64_t p) {
  if (l == Level::K) {
    std::vector<CosetRep> t{CosetRep::identity()};
    for (std::int64_t i = 0; i < p; ++i) t.push_back(CosetRep::wn(i));
    return t;
  }
  return {CosetRep::identity(), CosetRep::w()};
}

/// Generators of the level subgroup, parameters over residues mod p.
inline std::vector<CosetRep> level_generators(Level l, std::int64_t p) {
  std::vector<CosetRep> gens;
  Rational P(static_cast<long>(p));
  for (std::int64_t r = 0; r < p; ++r) {
    Rational b(static_cast<long>(r));
    switch (l) {
    case Level::K0:
      gens.push_back(CosetRep::n(b));
      gens.push_back(CosetRep::n_minus(P * b));
      break;
    case Level::K0Plus:
      gens.push_back(CosetRep::n(P * b));
      gens.push_back(CosetRep::n_minus(b));
      break;
    case Level::K:
      gens.push_back(CosetRep::n(P * b));
      gens.push_back(CosetRep::n_minus(P * b));
      break;
    }
  }
  if (l != Level::K)
    for (std::int64_t a = 1; a < p; ++a) gens.push_back(CosetRep::m(Rational(static_cast<long>(a))));
  gens.push_back(CosetRep::m(Rational(static_cast<long>(p + 1))));
  // parameters act through their residues; keep one word per residue
  std::vector<CosetRep> unique;
  std::set<std::pair<int, std::int64_t>> seen;
  for (const auto &g : gens)
    if (seen.emplace(static_cast<int>(g.kind), detail::residue(g.param, p)).second) unique.push_back(g);
  return unique;
}

/// Each generator fixes phi, and hence every lambda value on the transversal.
inline bool verify_k_invariance(const SchwartzCombo &phi, Level level) {
  const auto f = phi.function();
  const auto &p = phi.space.p;
  for (const auto &k : level_generators(level, p)) {
    auto g = weil_act(k, f);
    if (!(g == f)) return false;
    for (const auto &t : transversal(level, p))
      if (!(lambda_eval(g, t) == lambda_eval(f, t))) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// matching

/// lambda values on a transversal.
inline std::vector<Cyclotomic> lambda_section(const SchwartzCombo &phi, const std::vector<CosetRep> &t) {
  std::vector<Cyclotomic> out;
  auto f = phi.function();
  for (const auto &g : t) out.push_back(lambda_eval(f, g));
  return out;
}

struct MatchingCheck {
  std::string name;
  std::vector<std::string> points;
  std::vector<Cyclotomic> lhs, rhs;
  bool holds = false;
};

struct LocalSpaces {
  LocalQuadSpace sp, ra;
  static LocalSpaces standard(std::int64_t p, CharacterSign s = CharacterSign::Negative) {
    return {LocalQuadSpace::split(p, 1, s), LocalQuadSpace::ramified(p, -1, s)};
  }
};

inline MatchingCheck compare_sections(std::string name, const SchwartzCombo &ra, const SchwartzCombo &sp,
                                      Level level) {
  MatchingCheck c;
  c.name = std::move(name);
  auto t = transversal(level, ra.space.p);
  for (const auto &g : t) c.points.push_back(g.to_string());
  c.lhs = lambda_section(ra, t);
  c.rhs = lambda_section(sp, t);
  c.holds = c.lhs == c.rhs && verify_k_invariance(ra, level) && verify_k_invariance(sp, level);
  return c;
}

/// Both matchings of the local proposition at p.
inline std::vector<MatchingCheck> prop_3_1_checks(const LocalSpaces &S) {
  const std::int64_t p = S.sp.p;
  Rational pm1(static_cast<long>(p - 1));
  SchwartzCombo rhs1(S.sp);
  rhs1.add(phi_sp(S.sp, 0), Rational(-2) / pm1).add(phi_sp(S.sp, 1), Rational(static_cast<long>(p + 1)) / pm1);
  SchwartzCombo rhs2(S.sp);
  rhs2.add(phi_sp(S.sp, 0), Rational(static_cast<long>(2 * p)) / pm1)
      .add(phi_sp(S.sp, 2), Rational(static_cast<long>(-(p + 1))) / pm1);
  return {compare_sections("phi_ra ~ -2/(p-1) phi_0 + (p+1)/(p-1) phi_1", char_lattice(S.ra), rhs1, Level::K0),
          compare_sections("phi_ra# ~ 2p/(p-1) phi_0 - (p+1)/(p-1) phi_2", char_dual(S.ra), rhs2, Level::K0Plus)};
}

inline bool verify_prop_3_1(const LocalSpaces &S) {
  for (const auto &c : prop_3_1_checks(S))
    if (!c.holds) return false;
  return true;
}

inline bool verify_prop_3_1(std::int64_t p) { return verify_prop_3_1(LocalSpaces::standard(p)); }

/// (p+1) x (p+1) matrix of lambda values: rows 1, w n(0..p-1); columns
/// phi_0, phi_{1,0..p-1}.
inline exactnum::CycMatrix basis_value_matrix(const LocalQuadSpace &sp) {
  auto t = transversal(Level::K, sp.p);
  std::vector<SchwartzCombo> fs{phi_sp(sp, 0)};
  for (std::int64_t j = 0; j < sp.p; ++j) fs.push_back(coset_indicator(sp, 1, j));
  exactnum::CycMatrix m(t.size(), std::vector<Cyclotomic>(fs.size()));
  for (std::size_t c = 0; c < fs.size(); ++c) {
    auto col = lambda_section(fs[c], t);
    for (std::size_t r = 0; r < t.size(); ++r) m[r][c] = col[r];
  }
  return m;
}

inline bool verify_basis_lemma(const LocalQuadSpace &sp) {
  auto m = basis_value_matrix(sp);
  if (exactnum::determinant(m).is_zero()) return false;
  const std::int64_t p = sp.p;
  auto t = transversal(Level::K, p);
  std::map<std::int64_t, std::vector<Cyclotomic>> by_product;
  for (std::int64_t a = 0; a < p; ++a)
    for (std::int64_t b = 0; b < p; ++b) {
      if (a == 0 && b == 0) continue;
      auto phi = coset_indicator(sp, a, b);
      if (!verify_k_invariance(phi, Level::K)) return false;
      auto sec = lambda_section(phi, t);
      auto [it, inserted] = by_product.emplace((a * b) % p, sec);
      if (!inserted && !(it->second == sec)) return false;
    }
  return true;
}

inline bool verify_basis_lemma(std::int64_t p) { return verify_basis_lemma(LocalQuadSpace::split(p)); }

/// Coefficients det(A_j)/det(A) with A = (e(ij/p)) and column j replaced by
/// (-e(-i d/p))_i, together with the same vector by inverse DFT.
struct MatchCoefficients {
  std::vector<Cyclotomic> cramer, inverse_dft;
  bool agree = false;
  std::vector<Rational> values; // rational form when agree
};

inline MatchCoefficients match_coefficients(std::int64_t p, std::int64_t k, std::int64_t l,
                                            const quatalg::LocalRamifiedModel &model) {
  require(model.p == p, "match_coefficients: model is for a different prime");
  require((k % p + p) % p != 0 || (l % p + p) % p != 0, "match_coefficients: (k, l) must be nonzero mod p");
  auto A = exactnum::dft_matrix(p);
  std::int64_t d = model.d(k, l);
  std::vector<Cyclotomic> col;
  for (std::int64_t i = 0; i < p; ++i)
    col.push_back(-Cyclotomic::e(exactnum::make_rational(-i * d, p)));
  MatchCoefficients out;
  out.cramer = exactnum::cramer(A, col);
  // A^{-1} = conj(A)^T / p
  auto inv = exactnum::conjugate_transpose(A);
  out.inverse_dft = exactnum::multiply(inv, col);
  for (auto &v : out.inverse_dft) v *= Cyclotomic(exactnum::make_rational(1, p));
  out.agree = out.cramer == out.inverse_dft;
  if (out.agree) {
    for (const auto &v : out.cramer) {
      if (!v.is_rational()) {
        out.agree = false;
        out.values.clear();
        break;
      }
      out.values.push_back(v.rational_value());
    }
  }
  return out;
}

inline MatchCoefficients match_coefficients(std::int64_t p, std::int64_t k, std::int64_t l) {
  return match_coefficients(p, k, l, quatalg::local_ramified_model(p));
}

/// Solve lambda^ra(phi_{k,l}) = b lambda(phi_0) + sum_j c_j lambda(phi_{1,j})
/// against the computed sections on the full K(p) transversal.
/// Returns (b, c_0, ..., c_{p-1}).
inline std::vector<Cyclotomic> matching_coefficients_from_sections(const LocalSpaces &S, std::int64_t k,
                                                                   std::int64_t l) {
  auto m = basis_value_matrix(S.sp);
  auto rhs = lambda_section(coset_indicator(S.ra, k, l), transversal(Level::K, S.ra.p));
  return exactnum::solve(m, rhs);
}

/// The matching combination sum_j c_j phi_{1,j} built from given coefficients.
inline SchwartzCombo combo_from_coefficients(const LocalQuadSpace &sp, const std::vector<Rational> &c) {
  SchwartzCombo out(sp);
  for (std::size_t j = 0; j < c.size(); ++j)
    if (c[j] != 0) out.add(1, static_cast<std::int64_t>(j), c[j]);
  return out;
}

} // namespace quatmatch::weilmatch
