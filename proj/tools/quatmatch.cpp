#include <chrono>
#include <cstdlib>
#include <iomanip>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "quatmatch/quatmatch.hpp"

namespace {

using namespace quatmatch;
using exactnum::to_string;

constexpr int kUsageError = 2;

std::filesystem::path resolve_cache_dir(const std::string &flag, const std::filesystem::path &from_config) {
  if (!flag.empty()) return flag;
  if (const char *env = std::getenv("QUATMATCH_CACHE_DIR"); env && *env) return env;
  return from_config;
}

struct VerifyArgs {
  std::string theorem = "all", cache_dir, report_dir, config, format, normalization;
  std::int64_t D = 0, N = 1, p = 0, q = 0, m_max = 0;
  unsigned threads = 0;
};

std::vector<verify::TheoremCase> cases_from_flags(const VerifyArgs &a, std::int64_t default_m) {
  using verify::Theorem;
  std::int64_t m = a.m_max ? a.m_max : default_m;
  if (a.theorem == "all" && a.D == 0) {
    auto g = verify::default_grid();
    if (a.m_max)
      for (auto &c : g) c.m_max = a.m_max;
    return g;
  }
  if (a.D == 0) throw PreconditionError("verify: --D is required unless --theorem all");
  if (a.p == 0) throw PreconditionError("verify: --p is required");
  if (a.theorem != "all") {
    auto t = verify::parse_theorem(a.theorem);
    if (!t) throw PreconditionError("verify: unknown theorem '" + a.theorem + "'");
    verify::TheoremCase c{*t, a.D, a.N, a.p, a.q, m};
    if (c.uses_q() && a.q == 0) throw PreconditionError("verify: --q is required for theorem " + a.theorem);
    if (!c.uses_q() && a.q != 0) throw PreconditionError("verify: --q is not used by theorem " + a.theorem);
    c.validate();
    return {c};
  }
  // every theorem whose constraints admit the given parameters
  std::vector<verify::TheoremCase> out;
  for (auto t : {Theorem::T1_1, Theorem::T1_3, Theorem::T1_4, Theorem::T1_5}) {
    verify::TheoremCase c{t, a.D, a.N, a.p, 0, m};
    if (c.uses_q()) {
      if (a.q == 0) continue;
      c.q = a.q;
    }
    try {
      c.validate();
      out.push_back(c);
    } catch (const PreconditionError &) {
    }
  }
  if (out.empty()) throw PreconditionError("verify: no theorem applies to the given parameters");
  return out;
}

int cmd_verify(const VerifyArgs &a) {
  verify::SuiteConfig cfg;
  bool from_config = !a.config.empty();
  if (from_config) {
    std::ifstream in(a.config);
    if (!in) throw PreconditionError("verify: cannot read config file '" + a.config + "'");
    cfg = verify::parse_config(in);
  }
  // explicit flags select cases; otherwise the config's list (or the default grid)
  if (!from_config || a.D != 0 || a.theorem != "all") {
    cfg.cases = cases_from_flags(a, 50);
  } else if (a.m_max) {
    for (auto &c : cfg.cases) c.m_max = a.m_max;
  }
  if (!a.format.empty()) cfg.format = a.format;
  if (!a.report_dir.empty()) cfg.report_dir = a.report_dir;
  if (!a.normalization.empty()) cfg.normalization = *verify::parse_normalization(a.normalization);
  if (a.threads) cfg.threads = a.threads;
  cfg.cache_dir = resolve_cache_dir(a.cache_dir, cfg.cache_dir);

  classsets::ClassSetCache cache(cfg.cache_dir);
  auto t0 = std::chrono::steady_clock::now();
  auto res = verify::run_suite(cfg, cache);
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  for (const auto &w : res.warnings) std::cerr << "warning: " << w << "\n";
  std::cout << verify::format_result(res, cfg.normalization, cfg.format);
  if (!cfg.report_dir.empty()) verify::write_reports(res, cfg.normalization, cfg.report_dir);
  auto st = cache.stats();
  std::cerr << "cases " << res.reports.size() << ", " << (res.exit_code ? "FAILED" : "all rows pass") << ", "
            << std::fixed << std::setprecision(2) << secs << " s; class sets: " << st.computed << " computed, "
            << st.disk_hits << " from disk, " << st.memory_hits << " memory hits, " << st.rejected
            << " rejected cache entries\n";
  return res.exit_code;
}

int cmd_classset(std::int64_t D, std::int64_t N, const std::string &cache_dir) {
  classsets::ClassSetCache cache(resolve_cache_dir(cache_dir, {}));
  auto cs = cache.get(D, N);
  std::cout << "D=" << cs->D << " N=" << cs->N << "\n";
  std::cout << "order " << cs->order.canonical_text() << "\n";
  std::cout << "class number " << cs->class_number() << "\n";
  std::cout << "mass " << to_string(cs->mass) << "\n";
  std::cout << "traversal prime " << cs->traversal_prime << "\n";
  for (std::size_t i = 0; i < cs->class_number(); ++i) {
    const auto &I = cs->representatives[i];
    std::cout << "class " << i << ": nrd " << to_string(I.nrd) << ", weight " << cs->weights[i] << ", lattice "
              << I.lattice.canonical_text() << "\n";
  }
  return 0;
}

void print_row(const std::string &label, const std::vector<exactnum::Cyclotomic> &v) {
  std::cout << "  " << label << ":";
  for (const auto &c : v) std::cout << "  " << c.to_string();
  std::cout << "\n";
}

int cmd_local(std::int64_t p) {
  require(exactnum::is_prime(p), "local: --p must be prime");
  auto S = weilmatch::LocalSpaces::standard(p);
  bool all = true;
  std::cout << "local matching at p=" << p << "\n";
  for (const auto &c : weilmatch::prop_3_1_checks(S)) {
    std::cout << (c.holds ? "PASS " : "FAIL ") << c.name << "\n";
    std::cout << "  points:";
    for (const auto &g : c.points) std::cout << "  " << g;
    std::cout << "\n";
    print_row("ramified", c.lhs);
    print_row("split   ", c.rhs);
    all = all && c.holds;
  }
  bool basis = weilmatch::verify_basis_lemma(p);
  std::cout << (basis ? "PASS " : "FAIL ") << "basis value matrix invertible, values depend on ab mod p\n";
  all = all && basis;
  auto model = quatalg::local_ramified_model(p);
  std::cout << "coefficients c_j for phi_ra(k,l) ~ sum_j c_j phi_(1,j):\n";
  for (std::int64_t k = 0; k < p; ++k)
    for (std::int64_t l = 0; l < p; ++l) {
      if (k == 0 && l == 0) continue;
      auto mc = weilmatch::match_coefficients(p, k, l, model);
      std::cout << "  (k,l)=(" << k << "," << l << ") d=" << model.d(k, l) << (mc.agree ? " " : " MISMATCH ");
      for (const auto &v : mc.values) std::cout << " " << to_string(v);
      std::cout << "\n";
      all = all && mc.agree;
    }
  return all ? 0 : 1;
}

int cmd_degree(std::int64_t D, std::int64_t N, std::int64_t m) {
  auto deg = heckedeg::deg_T(D, N, m);
  std::cout << "deg T(" << m << ") on D=" << D << " N=" << N << ": " << deg.get_str() << "\n";
  std::cout << "volume " << to_string(heckedeg::volume(D, N)) << "\n";
  std::cout << "r' (degree) " << to_string(heckedeg::r_prime(D, N, m, heckedeg::Normalization::Degree)) << "\n";
  std::cout << "r' (theta) " << to_string(heckedeg::r_prime(D, N, m, heckedeg::Normalization::ThetaCoefficient))
            << "\n";
  return 0;
}

int cmd_oracle(const std::string &pattern, std::int64_t p, int k, int M) {
  heckedeg::LocalPattern pt;
  std::int64_t closed;
  if (pattern == "split") {
    pt = heckedeg::LocalPattern::Split;
    closed = heckedeg::local_degree_split(p, k);
  } else if (pattern == "level") {
    pt = heckedeg::LocalPattern::Level;
    closed = heckedeg::local_degree_level(p, k);
  } else if (pattern == "ramified") {
    pt = heckedeg::LocalPattern::Ramified;
    closed = heckedeg::local_degree_ramified(p, k);
  } else {
    throw PreconditionError("oracle: --pattern must be split, level or ramified");
  }
  if (M == 0) M = k + 2;
  auto count = heckedeg::oracle_local_orbits(pt, p, k, M);
  std::cout << pattern << " p=" << p << " k=" << k << ": oracle " << count << " (stable at M=" << M << "," << M + 1
            << "), closed form " << closed << (count == closed ? "  OK" : "  MISMATCH") << "\n";
  return count == closed ? 0 : 1;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"quatmatch: exact verification of quaternionic representation-number identities"};
  app.require_subcommand(1);

  VerifyArgs va;
  auto *verify_cmd = app.add_subcommand("verify", "check theorem identities on a parameter grid");
  verify_cmd->add_option("--theorem", va.theorem, "1.1, 1.3, 1.4, 1.5 or all")
      ->check(CLI::IsMember({"1.1", "1.3", "1.4", "1.5", "all"}));
  verify_cmd->add_option("--D", va.D, "discriminant");
  verify_cmd->add_option("--N", va.N, "level");
  verify_cmd->add_option("--p", va.p, "prime p");
  verify_cmd->add_option("--q", va.q, "prime q (1.1 and 1.3)");
  verify_cmd->add_option("--m-max", va.m_max, "largest m checked")->check(CLI::PositiveNumber);
  verify_cmd->add_option("--cache-dir", va.cache_dir, "class-set cache directory (env QUATMATCH_CACHE_DIR)");
  verify_cmd->add_option("--format", va.format, "stdout format")->check(CLI::IsMember({"table", "json", "csv"}));
  verify_cmd->add_option("--report-dir", va.report_dir, "write per-case CSV and summary.json here");
  verify_cmd->add_option("--config", va.config, "key = value config file");
  verify_cmd->add_option("--normalization", va.normalization, "indefinite-side scaling")
      ->check(CLI::IsMember({"degree", "theta"}));
  verify_cmd->add_option("--threads", va.threads, "worker threads (0: all cores)");

  std::int64_t D = 0, N = 1, m = 0, p = 0;
  int k = 0, M = 0;
  std::string cache_dir, pattern;
  auto *classset_cmd = app.add_subcommand("classset", "right ideal classes of a definite Eichler order");
  classset_cmd->add_option("--D", D, "discriminant")->required();
  classset_cmd->add_option("--N", N, "level");
  classset_cmd->add_option("--cache-dir", cache_dir, "class-set cache directory");

  auto *local_cmd = app.add_subcommand("local", "local matching tables at a prime");
  local_cmd->add_option("--p", p, "prime")->required();

  auto *degree_cmd = app.add_subcommand("degree", "Hecke degree on an indefinite Eichler order");
  degree_cmd->add_option("--D", D, "discriminant")->required();
  degree_cmd->add_option("--N", N, "level");
  degree_cmd->add_option("--m", m, "index")->required();

  auto *oracle_cmd = app.add_subcommand("oracle", "local ideal count against the closed form");
  oracle_cmd->add_option("--pattern", pattern, "split, level or ramified")->required();
  oracle_cmd->add_option("--p", p, "prime")->required();
  oracle_cmd->add_option("--k", k, "exponent")->required();
  oracle_cmd->add_option("--M", M, "working precision (default k+2)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kUsageError;
  }

  try {
    if (*verify_cmd) return cmd_verify(va);
    if (*classset_cmd) return cmd_classset(D, N, cache_dir);
    if (*local_cmd) return cmd_local(p);
    if (*degree_cmd) return cmd_degree(D, N, m);
    if (*oracle_cmd) return cmd_oracle(pattern, p, k, M);
  } catch (const PreconditionError &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const UnsupportedInput &e) {
    std::cerr << "unsupported: " << e.what() << "\n";
    return kUsageError;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
