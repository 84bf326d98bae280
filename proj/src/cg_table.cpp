#include <cmath>
#include <mutex>
#include <shared_mutex>
#include <stdexcept>
#include <unordered_map>

#include "sphtp/angular.hpp"
#include "sphtp/errors.hpp"

namespace sphtp {

namespace {

long double log_fact(int n) { return std::lgamma(static_cast<long double>(n) + 1.0L); }

std::shared_ptr<const CgTable> build_table(int j1, int j2, int j3) {
  auto table = std::make_shared<CgTable>();
  table->j1 = j1;
  table->j2 = j2;
  table->j3 = j3;
  const int n2 = 2 * j2 + 1;
  std::vector<long double> v(static_cast<std::size_t>((2 * j1 + 1) * n2), 0.0L);
  auto at = [&](int m1, int m2) -> long double& {
    return v[static_cast<std::size_t>((m1 + j1) * n2 + (m2 + j2))];
  };

  // Highest weight M = j3.
  const long double log_common = log_fact(2 * j3 + 1) + log_fact(j1 + j2 - j3) -
                                 log_fact(j1 + j2 + j3 + 1) - log_fact(j3 + j1 - j2) -
                                 log_fact(j3 - j1 + j2);
  for (int m1 = std::max(-j1, j3 - j2); m1 <= std::min(j1, j3 + j2); ++m1) {
    const int m2 = j3 - m1;
    const long double lg =
        log_common + log_fact(j1 + m1) + log_fact(j2 + m2) - log_fact(j1 - m1) - log_fact(j2 - m2);
    const long double sign = ((j1 - m1) % 2 == 0) ? 1.0L : -1.0L;
    at(m1, m2) = sign * std::exp(0.5L * lg);
  }

  // J- lowering, M = j3-1 .. -j3.
  for (int big_m = j3 - 1; big_m >= -j3; --big_m) {
    const long double norm =
        std::sqrt(static_cast<long double>(j3 + big_m + 1) * static_cast<long double>(j3 - big_m));
    for (int m1 = std::max(-j1, big_m - j2); m1 <= std::min(j1, big_m + j2); ++m1) {
      const int m2 = big_m - m1;
      long double acc = 0.0L;
      if (m1 < j1) {
        acc += std::sqrt(static_cast<long double>((j1 + m1 + 1) * (j1 - m1))) * at(m1 + 1, m2);
      }
      if (m2 < j2) {
        acc += std::sqrt(static_cast<long double>((j2 + m2 + 1) * (j2 - m2))) * at(m1, m2 + 1);
      }
      at(m1, m2) = acc / norm;
    }
  }

  table->values.assign(v.begin(), v.end());
  return table;
}

bool cacheable(int j1, int j2) {
  return (2 * j1 + 1) * (2 * j2 + 1) <= 1024 || std::min(j1, j2) <= 2;
}

struct TableCache {
  std::shared_mutex mutex;
  std::unordered_map<std::uint64_t, std::shared_ptr<const CgTable>> map;
};

TableCache& table_cache() {
  static TableCache cache;
  return cache;
}

}  // namespace

std::shared_ptr<const CgTable> cg_table(int j1, int j2, int j3) {
  if (!triangle(j1, j2, j3)) {
    throw TriangleViolation("cg_table: labels (" + std::to_string(j1) + "," + std::to_string(j2) +
                            "," + std::to_string(j3) + ") do not couple");
  }
  if (!cacheable(j1, j2)) return build_table(j1, j2, j3);
  const std::uint64_t key = static_cast<std::uint64_t>(j1) << 40 |
                            static_cast<std::uint64_t>(j2) << 20 | static_cast<std::uint64_t>(j3);
  auto& cache = table_cache();
  {
    std::shared_lock lock(cache.mutex);
    if (auto it = cache.map.find(key); it != cache.map.end()) return it->second;
  }
  auto table = build_table(j1, j2, j3);
  std::unique_lock lock(cache.mutex);
  return cache.map.try_emplace(key, std::move(table)).first->second;
}

}  // namespace sphtp
