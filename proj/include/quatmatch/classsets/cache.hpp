#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <sstream>
#include <string>

#include "quatmatch/classsets/classset.hpp"

namespace quatmatch::classsets {

inline constexpr const char *kCacheHeader = "quatmatch-classset 1";

inline OrderLattice eichler_order_for(std::int64_t D, std::int64_t N) {
  auto A = quatalg::construct_algebra(D);
  return orders::eichler_order(orders::maximal_order(A), N);
}

inline std::string serialize_class_set(const IdealClassSet &cs) {
  std::ostringstream os;
  os << kCacheHeader << "\n";
  os << "D " << cs.D << "\n";
  os << "N " << cs.N << "\n";
  os << "algebra " << cs.order.algebra().a() << " " << cs.order.algebra().b() << "\n";
  os << "order " << cs.order.canonical_text() << "\n";
  os << "traversal_prime " << cs.traversal_prime << "\n";
  os << "mass " << exactnum::to_string(cs.mass) << "\n";
  os << "classes " << cs.class_number() << "\n";
  for (std::size_t i = 0; i < cs.class_number(); ++i)
    os << "class " << exactnum::to_string(cs.representatives[i].nrd) << " " << cs.weights[i] << " "
       << cs.representatives[i].lattice.canonical_text() << "\n";
  os << "end\n";
  return os.str();
}

namespace detail {

inline std::string expect_key(std::istream &is, const std::string &key) {
  std::string line;
  if (!std::getline(is, line)) throw PreconditionError("cache: missing '" + key + "'");
  if (line.rfind(key + " ", 0) != 0) throw PreconditionError("cache: expected '" + key + "'");
  return line.substr(key.size() + 1);
}

inline Rational parse_rational(const std::string &s) {
  Rational r;
  if (r.set_str(s, 10) != 0) throw PreconditionError("cache: bad rational '" + s + "'");
  Rational c = r;
  c.canonicalize();
  if (c.get_den() <= 0 || exactnum::to_string(c) != s) throw PreconditionError("cache: rational not canonical");
  return c;
}

inline std::int64_t parse_int(const std::string &s) {
  std::size_t pos = 0;
  long long v = std::stoll(s, &pos);
  if (pos != s.size()) throw PreconditionError("cache: bad integer '" + s + "'");
  return v;
}

} // namespace detail

/// Parse and fully re-certify a serialized class set. Throws on any
/// inconsistency; nothing in the file is trusted.
inline IdealClassSet deserialize_class_set(const std::string &text, std::int64_t D, std::int64_t N) {
  std::istringstream is(text);
  std::string line;
  if (!std::getline(is, line) || line != kCacheHeader) throw PreconditionError("cache: bad header");
  if (detail::parse_int(detail::expect_key(is, "D")) != D) throw PreconditionError("cache: D mismatch");
  if (detail::parse_int(detail::expect_key(is, "N")) != N) throw PreconditionError("cache: N mismatch");
  OrderLattice O = eichler_order_for(D, N);
  {
    std::ostringstream alg;
    alg << O.algebra().a() << " " << O.algebra().b();
    if (detail::expect_key(is, "algebra") != alg.str()) throw PreconditionError("cache: algebra mismatch");
  }
  if (detail::expect_key(is, "order") != O.canonical_text()) throw PreconditionError("cache: order mismatch");
  IdealClassSet cs{D, N, O, {}, {}, eichler_mass(D, N), 0};
  cs.traversal_prime = detail::parse_int(detail::expect_key(is, "traversal_prime"));
  if (detail::parse_rational(detail::expect_key(is, "mass")) != cs.mass) throw PreconditionError("cache: mass mismatch");
  std::int64_t h = detail::parse_int(detail::expect_key(is, "classes"));
  if (h < 1 || h > 100000) throw PreconditionError("cache: bad class count");
  Rational total = 0;
  for (std::int64_t c = 0; c < h; ++c) {
    std::istringstream ls(detail::expect_key(is, "class"));
    std::string nrd_s, w_s;
    ls >> nrd_s >> w_s;
    std::string rest;
    std::getline(ls, rest);
    if (!rest.empty() && rest[0] == ' ') rest.erase(0, 1);
    RightIdeal I{OrderLattice::from_canonical_text(O.algebra(), rest), detail::parse_rational(nrd_s)};
    if (!is_right_ideal(I, O)) throw PreconditionError("cache: class is not a right ideal");
    if (orders::lattice_norm(I.lattice) != I.nrd) throw PreconditionError("cache: wrong ideal norm");
    std::int64_t w = detail::parse_int(w_s);
    if (w != unit_weight(left_order(I))) throw PreconditionError("cache: wrong unit weight");
    cs.representatives.push_back(I);
    cs.weights.push_back(w);
    total += exactnum::make_rational(1, w);
  }
  if (!std::getline(is, line) || line != "end") throw PreconditionError("cache: missing end marker");
  if (total != cs.mass) throw PreconditionError("cache: mass certificate fails");
  for (std::size_t i = 0; i < cs.class_number(); ++i)
    for (std::size_t j = i + 1; j < cs.class_number(); ++j)
      if (ideals_equivalent(cs.representatives[i], cs.representatives[j]))
        throw PreconditionError("cache: representatives are not pairwise inequivalent");
  IdealClassSet sorted = cs;
  sort_classes(sorted);
  if (serialize_class_set(sorted) != text) throw PreconditionError("cache: entry not in canonical order");
  return cs;
}

/// Class sets keyed by (D, N): memory first, then a directory of text files.
/// Concurrent readers, one writer per computation.
class ClassSetCache {
public:
  struct Stats {
    std::size_t memory_hits = 0, disk_hits = 0, computed = 0, rejected = 0;
  };

  explicit ClassSetCache(std::filesystem::path dir = {}) : dir_(std::move(dir)) {}

  const std::filesystem::path &directory() const { return dir_; }

  std::filesystem::path file_for(std::int64_t D, std::int64_t N) const {
    return dir_ / ("classset_D" + std::to_string(D) + "_N" + std::to_string(N) + ".txt");
  }

  std::shared_ptr<const IdealClassSet> get(std::int64_t D, std::int64_t N) {
    auto key = std::make_pair(D, N);
    {
      std::shared_lock lock(mutex_);
      auto it = memory_.find(key);
      if (it != memory_.end()) {
        bump(&Stats::memory_hits);
        return it->second;
      }
    }
    std::unique_lock lock(mutex_);
    auto it = memory_.find(key);
    if (it != memory_.end()) {
      bump(&Stats::memory_hits);
      return it->second;
    }
    std::shared_ptr<const IdealClassSet> cs;
    if (!dir_.empty()) cs = load(D, N);
    if (cs) {
      bump(&Stats::disk_hits);
    } else {
      cs = std::make_shared<IdealClassSet>(compute_class_set(eichler_order_for(D, N)));
      bump(&Stats::computed);
      if (!dir_.empty()) store(*cs);
    }
    memory_.emplace(key, cs);
    return cs;
  }

  Stats stats() const {
    std::lock_guard lock(stats_mutex_);
    return stats_;
  }

private:
  void bump(std::size_t Stats::*field) {
    std::lock_guard lock(stats_mutex_);
    ++(stats_.*field);
  }

  std::shared_ptr<const IdealClassSet> load(std::int64_t D, std::int64_t N) {
    auto path = file_for(D, N);
    std::ifstream in(path);
    if (!in) return nullptr;
    std::stringstream buf;
    buf << in.rdbuf();
    try {
      return std::make_shared<IdealClassSet>(deserialize_class_set(buf.str(), D, N));
    } catch (const std::exception &e) {
      bump(&Stats::rejected);
      std::cerr << "warning: discarding cache entry " << path.string() << ": " << e.what() << "\n";
      return nullptr;
    }
  }

  void store(const IdealClassSet &cs) {
    std::filesystem::create_directories(dir_);
    auto path = file_for(cs.D, cs.N);
    auto tmp = path;
    tmp += ".tmp";
    {
      std::ofstream out(tmp, std::ios::trunc);
      out << serialize_class_set(cs);
      if (!out) throw std::runtime_error("cache: cannot write " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
  }

  std::filesystem::path dir_;
  mutable std::shared_mutex mutex_;
  std::map<std::pair<std::int64_t, std::int64_t>, std::shared_ptr<const IdealClassSet>> memory_;
  mutable std::mutex stats_mutex_;
  Stats stats_;
};

} // namespace quatmatch::classsets
