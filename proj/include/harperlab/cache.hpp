#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "harperlab/interval_set.hpp"

namespace harperlab {

struct CacheKey {
  std::string model;
  double lambda = 0.0;
  std::int64_t p = 0;
  std::int64_t q = 1;
  double tol = 0.0;
};

/**
 * Content-keyed band cache: one JSON file per (model, p, q, tol) under a
 * cache directory. Writes go through a temp file and rename, so concurrent
 * runs are safe. Unreadable or inconsistent entries count as misses with a
 * warning on stderr.
 */
class Cache {
 public:
  explicit Cache(std::string dir);
  std::optional<BandSet> get(const CacheKey& key) const;
  void put(const CacheKey& key, const BandSet& bands) const;
  const std::string& dir() const { return dir_; }
  static std::string key_hash(const CacheKey& key);

 private:
  std::string path_for(const CacheKey& key) const;
  std::string dir_;
};

// HARPERLAB_CACHE_DIR, or ".harperlab-cache" when unset.
std::string default_cache_dir();

}  // namespace harperlab
