#pragma once

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"

#include "quatmatch/classsets/cache.hpp"
#include "quatmatch/heckedeg/heckedeg.hpp"

namespace quatmatch::verify {

using exactnum::Rational;
using heckedeg::Normalization;

enum class Theorem { T1_1, T1_3, T1_4, T1_5 };

inline std::string theorem_id(Theorem t) {
  switch (t) {
  case Theorem::T1_1: return "1.1";
  case Theorem::T1_3: return "1.3";
  case Theorem::T1_4: return "1.4";
  case Theorem::T1_5: return "1.5";
  }
  return "?";
}

inline std::optional<Theorem> parse_theorem(const std::string &s) {
  if (s == "1.1") return Theorem::T1_1;
  if (s == "1.3") return Theorem::T1_3;
  if (s == "1.4") return Theorem::T1_4;
  if (s == "1.5") return Theorem::T1_5;
  return std::nullopt;
}

inline std::string to_string(Normalization n) { return n == Normalization::Degree ? "degree" : "theta"; }

inline std::optional<Normalization> parse_normalization(const std::string &s) {
  if (s == "degree") return Normalization::Degree;
  if (s == "theta") return Normalization::ThetaCoefficient;
  return std::nullopt;
}

struct TheoremCase {
  Theorem theorem = Theorem::T1_1;
  std::int64_t D = 1, N = 1, p = 0, q = 0;
  std::int64_t m_max = 1;

  bool uses_q() const { return theorem == Theorem::T1_1 || theorem == Theorem::T1_3; }

  std::string key() const {
    std::string k = "thm" + theorem_id(theorem) + "_D" + std::to_string(D) + "_p" + std::to_string(p);
    if (uses_q()) k += "_q" + std::to_string(q);
    return k + "_N" + std::to_string(N);
  }

  /// Throws PreconditionError naming the violated constraint.
  void validate() const {
    auto count = [](std::int64_t n) { return static_cast<int>(exactnum::prime_divisors(n).size()); };
    require(D >= 1 && exactnum::is_squarefree(D), key() + ": D must be squarefree and positive");
    require(N >= 1 && exactnum::is_squarefree(N), key() + ": N must be squarefree and positive");
    require(m_max >= 1, key() + ": m_max must be positive");
    require(exactnum::is_prime(p) && D % p != 0, key() + ": p must be a prime not dividing D");
    if (uses_q()) {
      require(exactnum::is_prime(q) && D % q != 0, key() + ": q must be a prime not dividing D");
      require(p != q, key() + ": p and q must differ");
    }
    std::int64_t bad = D * p * (uses_q() ? q : 1);
    require(std::gcd(N, bad) == 1, key() + ": N must be coprime to D, p" + (uses_q() ? ", q" : ""));
    switch (theorem) {
    case Theorem::T1_1:
      require(count(D) % 2 == 0, key() + ": D must have an even number of prime factors");
      break;
    case Theorem::T1_3:
    case Theorem::T1_4:
      require(count(D) % 2 == 1, key() + ": D must have an odd number of prime factors");
      break;
    case Theorem::T1_5:
      require(D > 1 && count(D) % 2 == 0, key() + ": D must be > 1 with an even number of prime factors");
      break;
    }
  }
};

struct Row {
  std::int64_t m = 0;
  Rational lhs, rhs;
  bool pass = false;
  std::string note;
};

struct VerificationReport {
  TheoremCase tcase;
  std::vector<Row> rows;
  std::string error;

  bool passed() const {
    if (!error.empty()) return false;
    for (const auto &r : rows)
      if (!r.pass) return false;
    return true;
  }
};

/// Both sides of the identities; caches genus theta series per (D, N).
class Engine {
public:
  Engine(classsets::ClassSetCache &cache, Normalization norm = Normalization::Degree)
      : cache_(cache), norm_(norm) {}

  Normalization normalization() const { return norm_; }

  /// r_{D,N}(0..m_max) for definite B(D).
  std::vector<Rational> definite_series(std::int64_t D, std::int64_t N, std::int64_t m_max) {
    auto key = std::make_pair(D, N);
    {
      std::lock_guard lock(mutex_);
      auto it = theta_.find(key);
      if (it != theta_.end() && static_cast<std::int64_t>(it->second.size()) > m_max) return it->second;
    }
    auto cs = cache_.get(D, N);
    auto th = classsets::genus_theta(*cs, m_max);
    std::lock_guard lock(mutex_);
    auto &slot = theta_[key];
    if (slot.size() < th.size()) slot = th;
    return slot;
  }

  Rational definite(std::int64_t D, std::int64_t N, std::int64_t m) {
    return definite_series(D, N, m)[static_cast<std::size_t>(m)];
  }

  Rational indefinite(std::int64_t D, std::int64_t N, std::int64_t m) { return heckedeg::r_prime(D, N, m, norm_); }

private:
  classsets::ClassSetCache &cache_;
  Normalization norm_;
  std::mutex mutex_;
  std::map<std::pair<std::int64_t, std::int64_t>, std::vector<Rational>> theta_;
};

namespace detail {

inline Rational w_minus(std::int64_t p) { return exactnum::make_rational(-2, p - 1); }
inline Rational w_plus(std::int64_t p) { return exactnum::make_rational(p + 1, p - 1); }

template <class F> VerificationReport build_report(const TheoremCase &c, F &&sides) {
  VerificationReport rep{c, {}, {}};
  try {
    c.validate();
    for (std::int64_t m = 1; m <= c.m_max; ++m) {
      auto [l, r] = sides(m);
      rep.rows.push_back({m, l, r, l == r, {}});
    }
  } catch (const std::exception &e) {
    rep.error = e.what();
  }
  return rep;
}

} // namespace detail

inline VerificationReport check_theorem_1_1(Engine &E, std::int64_t D, std::int64_t p, std::int64_t q,
                                            std::int64_t N, std::int64_t m_max) {
  TheoremCase c{Theorem::T1_1, D, N, p, q, m_max};
  return detail::build_report(c, [&](std::int64_t m) {
    Rational lhs = detail::w_minus(q) * E.definite(D * p, N, m) + detail::w_plus(q) * E.definite(D * p, N * q, m);
    Rational rhs = detail::w_minus(p) * E.definite(D * q, N, m) + detail::w_plus(p) * E.definite(D * q, N * p, m);
    return std::pair{lhs, rhs};
  });
}

inline VerificationReport check_theorem_1_3(Engine &E, std::int64_t D, std::int64_t p, std::int64_t q,
                                            std::int64_t N, std::int64_t m_max) {
  TheoremCase c{Theorem::T1_3, D, N, p, q, m_max};
  return detail::build_report(c, [&](std::int64_t m) {
    Rational lhs =
        detail::w_minus(q) * E.indefinite(D * p, N, m) + detail::w_plus(q) * E.indefinite(D * p, N * q, m);
    Rational rhs =
        detail::w_minus(p) * E.indefinite(D * q, N, m) + detail::w_plus(p) * E.indefinite(D * q, N * p, m);
    return std::pair{lhs, rhs};
  });
}

inline VerificationReport check_theorem_1_4(Engine &E, std::int64_t D, std::int64_t p, std::int64_t N,
                                            std::int64_t m_max) {
  TheoremCase c{Theorem::T1_4, D, N, p, 0, m_max};
  return detail::build_report(c, [&](std::int64_t m) {
    Rational lhs = E.indefinite(D * p, N, m);
    Rational rhs = detail::w_minus(p) * E.definite(D, N, m) + detail::w_plus(p) * E.definite(D, N * p, m);
    return std::pair{lhs, rhs};
  });
}

inline VerificationReport check_theorem_1_5(Engine &E, std::int64_t D, std::int64_t p, std::int64_t N,
                                            std::int64_t m_max) {
  TheoremCase c{Theorem::T1_5, D, N, p, 0, m_max};
  return detail::build_report(c, [&](std::int64_t m) {
    Rational lhs = E.definite(D * p, N, m);
    Rational rhs = detail::w_minus(p) * E.indefinite(D, N, m) + detail::w_plus(p) * E.indefinite(D, N * p, m);
    return std::pair{lhs, rhs};
  });
}

inline VerificationReport check(Engine &E, const TheoremCase &c) {
  switch (c.theorem) {
  case Theorem::T1_1: return check_theorem_1_1(E, c.D, c.p, c.q, c.N, c.m_max);
  case Theorem::T1_3: return check_theorem_1_3(E, c.D, c.p, c.q, c.N, c.m_max);
  case Theorem::T1_4: return check_theorem_1_4(E, c.D, c.p, c.N, c.m_max);
  case Theorem::T1_5: return check_theorem_1_5(E, c.D, c.p, c.N, c.m_max);
  }
  return {};
}

// ---------------------------------------------------------------------------
// grids

/// Smallest squarefree n > 1 coprime to c, and the product of the two
/// smallest primes coprime to c.
inline std::vector<std::int64_t> small_levels(std::int64_t c) {
  std::vector<std::int64_t> primes;
  for (std::int64_t l = 2; primes.size() < 2; ++l)
    if (exactnum::is_prime(l) && c % l != 0) primes.push_back(l);
  return {1, primes[0], primes[0] * primes[1]};
}

inline std::vector<TheoremCase> theorem_1_3_sweep(std::int64_t m_max = 100) {
  std::vector<TheoremCase> out;
  const std::vector<std::int64_t> pool{2, 3, 5, 7};
  for (std::int64_t D : {2, 3, 5})
    for (std::size_t a = 0; a < pool.size(); ++a)
      for (std::size_t b = a + 1; b < pool.size(); ++b) {
        std::int64_t p = pool[a], q = pool[b];
        if (D % p == 0 || D % q == 0) continue;
        for (auto N : small_levels(D * p * q)) out.push_back({Theorem::T1_3, D, N, p, q, m_max});
      }
  return out;
}

inline std::vector<TheoremCase> default_grid() {
  std::vector<TheoremCase> g{{Theorem::T1_1, 1, 1, 2, 3, 50},
                             {Theorem::T1_4, 2, 1, 3, 0, 50},
                             {Theorem::T1_4, 3, 1, 2, 0, 50},
                             {Theorem::T1_5, 6, 1, 5, 0, 30}};
  for (auto &c : theorem_1_3_sweep(100)) g.push_back(c);
  return g;
}

// ---------------------------------------------------------------------------
// configuration

/// Pinned value for one side of one row; a mismatch fails the row.
struct Expectation {
  std::string key;
  std::int64_t m = 0;
  std::optional<Rational> lhs, rhs;
};

struct SuiteConfig {
  std::vector<TheoremCase> cases;
  std::vector<Expectation> expectations;
  std::filesystem::path cache_dir;
  std::filesystem::path report_dir;
  Normalization normalization = Normalization::Degree;
  std::string format = "table";
  unsigned threads = 0; // 0: hardware concurrency
};

namespace detail {

inline std::string trim(const std::string &s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline std::int64_t to_int(const std::string &field, const std::string &v) {
  try {
    std::size_t pos = 0;
    long long x = std::stoll(v, &pos);
    if (pos == v.size()) return x;
  } catch (const std::exception &) {
  }
  throw PreconditionError("config: field '" + field + "' is not an integer: '" + v + "'");
}

inline Rational to_rational(const std::string &field, const std::string &v) {
  Rational r;
  if (v.empty() || r.set_str(v, 10) != 0 || r.get_den() == 0)
    throw PreconditionError("config: field '" + field + "' is not a rational: '" + v + "'");
  r.canonicalize();
  return r;
}

/// "k1=v1 k2=v2 ..." after a leading positional token.
inline std::map<std::string, std::string> parse_fields(std::istringstream &is, const std::string &what) {
  std::map<std::string, std::string> f;
  std::string tok;
  while (is >> tok) {
    auto eq = tok.find('=');
    if (eq == std::string::npos || eq == 0) throw PreconditionError("config: " + what + ": expected key=value, got '" + tok + "'");
    f[tok.substr(0, eq)] = tok.substr(eq + 1);
  }
  return f;
}

inline TheoremCase parse_case(const std::string &spec, std::int64_t default_m) {
  std::istringstream is(spec);
  std::string thm;
  is >> thm;
  auto t = parse_theorem(thm);
  if (!t) throw PreconditionError("config: case: unknown theorem '" + thm + "'");
  auto f = parse_fields(is, "case");
  TheoremCase c{*t, 1, 1, 0, 0, default_m};
  for (const auto &[k, v] : f) {
    if (k == "D") c.D = to_int("D", v);
    else if (k == "N") c.N = to_int("N", v);
    else if (k == "p") c.p = to_int("p", v);
    else if (k == "q") c.q = to_int("q", v);
    else if (k == "m_max") c.m_max = to_int("m_max", v);
    else throw PreconditionError("config: case: unknown field '" + k + "'");
  }
  return c;
}

} // namespace detail

/// key = value lines; '#' comments; repeatable 'case' and 'expect' keys.
///   case = 1.4 D=2 p=3 N=1 m_max=50
///   expect = thm1.4_D2_p3_N1 m=1 lhs=-6 rhs=-6
inline SuiteConfig parse_config(std::istream &in) {
  SuiteConfig cfg;
  std::int64_t default_m = 50;
  std::vector<std::string> case_specs;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) throw PreconditionError("config line " + std::to_string(lineno) + ": expected key = value");
    std::string key = detail::trim(line.substr(0, eq)), val = detail::trim(line.substr(eq + 1));
    if (key == "case") case_specs.push_back(val);
    else if (key == "expect") {
      std::istringstream is(val);
      Expectation e;
      is >> e.key;
      auto f = detail::parse_fields(is, "expect");
      for (const auto &[k, v] : f) {
        if (k == "m") e.m = detail::to_int("m", v);
        else if (k == "lhs") e.lhs = detail::to_rational("lhs", v);
        else if (k == "rhs") e.rhs = detail::to_rational("rhs", v);
        else throw PreconditionError("config: expect: unknown field '" + k + "'");
      }
      if (e.m < 1) throw PreconditionError("config: expect: field 'm' must be a positive integer");
      cfg.expectations.push_back(e);
    } else if (key == "m_max") default_m = detail::to_int("m_max", val);
    else if (key == "cache_dir") cfg.cache_dir = val;
    else if (key == "report_dir") cfg.report_dir = val;
    else if (key == "format") {
      if (val != "table" && val != "json" && val != "csv") throw PreconditionError("config: field 'format' must be table, json or csv");
      cfg.format = val;
    } else if (key == "normalization") {
      auto n = parse_normalization(val);
      if (!n) throw PreconditionError("config: field 'normalization' must be degree or theta");
      cfg.normalization = *n;
    } else if (key == "threads") cfg.threads = static_cast<unsigned>(detail::to_int("threads", val));
    else throw PreconditionError("config line " + std::to_string(lineno) + ": unknown field '" + key + "'");
  }
  for (const auto &s : case_specs) {
    cfg.cases.push_back(detail::parse_case(s, default_m));
    try {
      cfg.cases.back().validate();
    } catch (const PreconditionError &e) {
      throw PreconditionError(std::string("config: case: ") + e.what());
    }
  }
  return cfg;
}

// ---------------------------------------------------------------------------
// suite

struct SuiteResult {
  std::vector<VerificationReport> reports;
  std::vector<std::string> warnings;
  int exit_code = 0;
};

inline void apply_expectations(VerificationReport &rep, const std::vector<Expectation> &ex) {
  for (const auto &e : ex) {
    if (e.key != rep.tcase.key()) continue;
    for (auto &row : rep.rows) {
      if (row.m != e.m) continue;
      if (e.lhs && *e.lhs != row.lhs) {
        row.pass = false;
        row.note = "lhs differs from expected " + exactnum::to_string(*e.lhs);
      }
      if (e.rhs && *e.rhs != row.rhs) {
        row.pass = false;
        row.note += std::string(row.note.empty() ? "" : "; ") + "rhs differs from expected " + exactnum::to_string(*e.rhs);
      }
    }
  }
}

inline SuiteResult run_suite(const SuiteConfig &cfg, classsets::ClassSetCache &cache) {
  SuiteResult res;
  if (cfg.cases.empty()) res.warnings.push_back("empty case list; nothing to verify");
  Engine E(cache, cfg.normalization);
  res.reports.resize(cfg.cases.size());
  unsigned nthreads = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
  nthreads = std::min<unsigned>(nthreads, static_cast<unsigned>(std::max<std::size_t>(1, cfg.cases.size())));
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t i; (i = next++) < cfg.cases.size();) res.reports[i] = check(E, cfg.cases[i]);
  };
  if (nthreads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < nthreads; ++t) pool.emplace_back(worker);
    for (auto &t : pool) t.join();
  }
  for (auto &r : res.reports) apply_expectations(r, cfg.expectations);
  for (const auto &e : cfg.expectations) {
    bool found = false;
    for (const auto &r : res.reports) found = found || (r.tcase.key() == e.key && e.m <= r.tcase.m_max);
    if (!found) res.warnings.push_back("expectation for " + e.key + " m=" + std::to_string(e.m) + " matches no row");
  }
  for (const auto &r : res.reports)
    if (!r.passed()) res.exit_code = 1;
  return res;
}

// ---------------------------------------------------------------------------
// output

inline std::string case_csv(const VerificationReport &r) {
  std::ostringstream os;
  os << "m,lhs,rhs,pass\n";
  for (const auto &row : r.rows)
    os << row.m << "," << exactnum::to_string(row.lhs) << "," << exactnum::to_string(row.rhs) << ","
       << (row.pass ? "true" : "false") << "\n";
  return os.str();
}

inline nlohmann::ordered_json case_json(const VerificationReport &r, bool with_rows) {
  nlohmann::ordered_json j;
  j["key"] = r.tcase.key();
  j["theorem"] = theorem_id(r.tcase.theorem);
  j["D"] = r.tcase.D;
  j["N"] = r.tcase.N;
  j["p"] = r.tcase.p;
  if (r.tcase.uses_q()) j["q"] = r.tcase.q;
  j["m_max"] = r.tcase.m_max;
  j["pass"] = r.passed();
  if (!r.error.empty()) j["error"] = r.error;
  nlohmann::ordered_json failed = nlohmann::ordered_json::array();
  for (const auto &row : r.rows)
    if (!row.pass) {
      nlohmann::ordered_json f;
      f["m"] = row.m;
      f["lhs"] = exactnum::to_string(row.lhs);
      f["rhs"] = exactnum::to_string(row.rhs);
      if (!row.note.empty()) f["note"] = row.note;
      failed.push_back(f);
    }
  j["failed_rows"] = failed;
  if (with_rows) {
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto &row : r.rows)
      rows.push_back({{"m", row.m},
                      {"lhs", exactnum::to_string(row.lhs)},
                      {"rhs", exactnum::to_string(row.rhs)},
                      {"pass", row.pass}});
    j["rows"] = rows;
  }
  return j;
}

inline nlohmann::ordered_json summary_json(const SuiteResult &res, Normalization norm, bool with_rows = false) {
  nlohmann::ordered_json j;
  j["normalization"] = to_string(norm);
  j["all_pass"] = res.exit_code == 0;
  nlohmann::ordered_json cases = nlohmann::ordered_json::array();
  for (const auto &r : res.reports) cases.push_back(case_json(r, with_rows));
  j["cases"] = cases;
  return j;
}

/// One CSV per case plus summary.json; contents depend only on the results.
inline void write_reports(const SuiteResult &res, Normalization norm, const std::filesystem::path &dir) {
  std::filesystem::create_directories(dir);
  for (const auto &r : res.reports) {
    std::ofstream out(dir / (r.tcase.key() + ".csv"), std::ios::trunc);
    out << case_csv(r);
    if (!out) throw std::runtime_error("cannot write report for " + r.tcase.key());
  }
  std::ofstream out(dir / "summary.json", std::ios::trunc);
  out << summary_json(res, norm).dump(2) << "\n";
  if (!out) throw std::runtime_error("cannot write summary.json");
}

inline std::string format_result(const SuiteResult &res, Normalization norm, const std::string &format) {
  std::ostringstream os;
  if (format == "json") {
    os << summary_json(res, norm, true).dump(2) << "\n";
  } else if (format == "csv") {
    os << "case,m,lhs,rhs,pass\n";
    for (const auto &r : res.reports)
      for (const auto &row : r.rows)
        os << r.tcase.key() << "," << row.m << "," << exactnum::to_string(row.lhs) << ","
           << exactnum::to_string(row.rhs) << "," << (row.pass ? "true" : "false") << "\n";
  } else {
    for (const auto &r : res.reports) {
      std::size_t failed = 0;
      for (const auto &row : r.rows) failed += row.pass ? 0 : 1;
      os << (r.passed() ? "PASS " : "FAIL ") << r.tcase.key() << "  m=1.." << r.tcase.m_max;
      if (!r.error.empty()) os << "  error: " << r.error;
      else os << "  rows " << r.rows.size() - failed << "/" << r.rows.size();
      os << "\n";
      std::size_t shown = 0;
      for (const auto &row : r.rows)
        if (!row.pass && shown++ < 5)
          os << "    m=" << row.m << "  lhs=" << exactnum::to_string(row.lhs) << "  rhs=" << exactnum::to_string(row.rhs)
             << (row.note.empty() ? "" : "  (" + row.note + ")") << "\n";
    }
  }
  return os.str();
}

} // namespace quatmatch::verify
