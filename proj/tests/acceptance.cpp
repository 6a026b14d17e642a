// One line per acceptance criterion; exit status is nonzero if any fails.
#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "quatmatch/quatmatch.hpp"

using namespace quatmatch;
using exactnum::make_rational;
using exactnum::Rational;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

classsets::ClassSetCache &shared_cache() {
  static classsets::ClassSetCache cache;
  return cache;
}

std::int64_t sigma_odd(std::int64_t m) {
  std::int64_t s = 0;
  for (std::int64_t d = 1; d <= m; d += 2)
    if (m % d == 0) s += d;
  return s;
}

std::string describe_failure(const verify::VerificationReport &r) {
  if (!r.error.empty()) return r.tcase.key() + ": " + r.error;
  std::size_t bad = 0;
  const verify::Row *first = nullptr;
  for (const auto &row : r.rows)
    if (!row.pass) {
      ++bad;
      if (!first) first = &row;
    }
  if (!first) return r.tcase.key() + ": ok";
  return r.tcase.key() + ": " + std::to_string(bad) + "/" + std::to_string(r.rows.size()) + " rows differ, first m=" +
         std::to_string(first->m) + " lhs=" + exactnum::to_string(first->lhs) +
         " rhs=" + exactnum::to_string(first->rhs);
}

Outcome c1() {
  for (std::int64_t p : {2, 3, 5, 7, 11})
    if (!weilmatch::verify_prop_3_1(p)) return {false, "fails at p=" + std::to_string(p)};
  return {true, "p in {2,3,5,7,11}"};
}

Outcome c2() {
  for (std::int64_t p : {2, 3, 5}) {
    if (!weilmatch::verify_basis_lemma(p)) return {false, "basis lemma fails at p=" + std::to_string(p)};
    auto model = quatalg::local_ramified_model(p);
    for (std::int64_t k = 0; k < p; ++k)
      for (std::int64_t l = 0; l < p; ++l) {
        if (k == 0 && l == 0) continue;
        auto mc = weilmatch::match_coefficients(p, k, l, model);
        if (!mc.agree) return {false, "Cramer and inverse DFT disagree at p=" + std::to_string(p)};
        std::int64_t target = ((-model.d(k, l)) % p + p) % p;
        for (std::int64_t j = 0; j < p; ++j)
          if (mc.values[static_cast<std::size_t>(j)] != (j == target ? -1 : 0))
            return {false, "coefficient pattern wrong at p=" + std::to_string(p)};
      }
  }
  return {true, "p in {2,3,5}, all (k,l) != (0,0)"};
}

Outcome c3() {
  auto th = classsets::genus_theta(*shared_cache().get(2, 1), 100);
  for (std::int64_t m = 1; m <= 100; ++m)
    if (th[static_cast<std::size_t>(m)] != Rational(24 * sigma_odd(m)))
      return {false, "mismatch at m=" + std::to_string(m)};
  return {true, "r_{2,1}(m) = 24 sigma_odd(m), m <= 100"};
}

Outcome c4() {
  std::vector<std::pair<std::int64_t, std::int64_t>> grid{{2, 1}, {3, 1}, {2, 3}, {3, 2}, {5, 1}, {2, 5}, {30, 1}};
  std::ostringstream os;
  for (auto [D, N] : grid) {
    auto cs = shared_cache().get(D, N);
    Rational total = 0;
    for (auto w : cs->weights) total += make_rational(1, w);
    Rational want = make_rational(D * N, 12);
    for (auto p : exactnum::prime_divisors(D)) want *= make_rational(p - 1, p);
    for (auto p : exactnum::prime_divisors(N)) want *= make_rational(p + 1, p);
    if (total != want) return {false, "(" + std::to_string(D) + "," + std::to_string(N) + ") sum " + exactnum::to_string(total)};
    os << " H" << D << "," << N << "=" << cs->class_number();
  }
  return {true, "all 7 levels;" + os.str()};
}

Outcome c5() {
  using heckedeg::LocalPattern;
  for (auto pt : {LocalPattern::Split, LocalPattern::Level, LocalPattern::Ramified})
    for (std::int64_t p : {2, 3, 5, 7})
      for (int k = 0; k <= 3; ++k) {
        std::int64_t closed = pt == LocalPattern::Split   ? heckedeg::local_degree_split(p, k)
                              : pt == LocalPattern::Level ? heckedeg::local_degree_level(p, k)
                                                          : heckedeg::local_degree_ramified(p, k);
        auto orbits = heckedeg::oracle_local_orbits(pt, p, k, k + 2);
        if (orbits != closed)
          return {false, heckedeg::to_string(pt) + " p=" + std::to_string(p) + " k=" + std::to_string(k) +
                             ": oracle " + std::to_string(orbits) + " closed " + std::to_string(closed)};
      }
  return {true, "split/level/ramified, p <= 7, k <= 3, stable at M and M+1"};
}

Outcome from_reports(const std::vector<verify::VerificationReport> &reps, const std::string &ok) {
  for (const auto &r : reps)
    if (!r.passed()) return {false, describe_failure(r)};
  return {true, ok};
}

Outcome c6() {
  verify::Engine E(shared_cache());
  return from_reports({verify::check_theorem_1_1(E, 1, 2, 3, 1, 50)}, "(1,2,3,1), m <= 50");
}

Outcome c7() {
  verify::Engine E(shared_cache());
  Rational r = heckedeg::r_prime(6, 1, 1);
  if (r != -6) return {false, "r'_{6,1}(1) = " + exactnum::to_string(r)};
  return from_reports({verify::check_theorem_1_4(E, 2, 3, 1, 50), verify::check_theorem_1_4(E, 3, 2, 1, 50)},
                      "(2,3,1) and (3,2,1), m <= 50");
}

Outcome c8() {
  verify::Engine E(shared_cache());
  auto rep = verify::check_theorem_1_5(E, 6, 5, 1, 30);
  Outcome o = from_reports({rep}, "(6,5,1), m <= 30");
  Rational avg = E.definite(30, 1, 1);
  if (o.pass && avg != make_rational(3, 2)) return {false, "r_{30,1}(1) = " + exactnum::to_string(avg)};
  if (!o.pass) o.detail += "; r_{30,1}(1) = " + exactnum::to_string(avg) + ", indefinite side 3/2";
  return o;
}

Outcome c9() {
  verify::Engine E(shared_cache());
  std::vector<verify::VerificationReport> reps;
  for (const auto &c : verify::theorem_1_3_sweep(100)) reps.push_back(verify::check(E, c));
  return from_reports(reps, std::to_string(reps.size()) + " cases, m <= 100");
}

std::map<std::string, std::string> report_files(const std::filesystem::path &d) {
  std::map<std::string, std::string> out;
  for (const auto &e : std::filesystem::directory_iterator(d)) {
    std::ifstream in(e.path(), std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    out[e.path().filename().string()] = s.str();
  }
  return out;
}

Outcome c10() {
  auto base = std::filesystem::temp_directory_path() / "quatmatch_acceptance_determinism";
  std::filesystem::remove_all(base);
  verify::SuiteConfig cfg;
  cfg.cases = verify::default_grid();
  auto run = [&](const std::filesystem::path &cache_dir, const std::filesystem::path &out,
                 classsets::ClassSetCache::Stats &stats) {
    classsets::ClassSetCache cache(cache_dir);
    auto res = verify::run_suite(cfg, cache);
    verify::write_reports(res, cfg.normalization, out);
    stats = cache.stats();
  };
  classsets::ClassSetCache::Stats s1, s2, s3;
  run(base / "cache1", base / "cold1", s1);
  run(base / "cache2", base / "cold2", s2);
  run(base / "cache1", base / "warm", s3);
  auto a = report_files(base / "cold1"), b = report_files(base / "cold2"), c = report_files(base / "warm");
  std::filesystem::remove_all(base);
  if (s1.computed == 0 || s2.computed == 0) return {false, "cold run did not compute class sets"};
  if (s3.computed != 0 || s3.disk_hits == 0) return {false, "warm run did not read the cache"};
  if (a != b) return {false, "cold runs differ"};
  if (a != c) return {false, "warm run differs from cold run"};
  return {true, std::to_string(a.size()) + " report files identical across 2 cold + 1 warm run"};
}

} // namespace

int main() {
  std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"local matching identities", c1},
      {"basis lemma and coefficient vectors", c2},
      {"classical theta cross-check", c3},
      {"mass certificates", c4},
      {"Hecke degree local rules vs orbit oracle", c5},
      {"definite identity at (1,2,3,1)", c6},
      {"mixed identity, indefinite side from degrees", c7},
      {"mixed identity, definite side on B(30)", c8},
      {"indefinite identity sweeps", c9},
      {"report determinism", c10},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception &e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    failed += o.pass ? 0 : 1;
    std::cout << "criterion " << std::setw(2) << i + 1 << ": " << (o.pass ? "PASS" : "FAIL") << "  "
              << criteria[i].first << " [" << o.detail << "] (" << std::fixed << std::setprecision(2) << secs
              << " s)" << std::endl;
  }
  std::cout << (failed ? std::to_string(failed) + " criteria failed" : std::string("all criteria pass")) << std::endl;
  return failed ? 1 : 0;
}
