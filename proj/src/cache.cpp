#include "harperlab/cache.hpp"

#include <cmath>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "harperlab/io_util.hpp"

namespace harperlab {

namespace {
// bump to invalidate all entries when band semantics change
constexpr const char* kCacheVersion = "1";

std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}
}  // namespace

std::string default_cache_dir() {
  if (const char* env = std::getenv("HARPERLAB_CACHE_DIR"); env && *env) return env;
  return ".harperlab-cache";
}

Cache::Cache(std::string dir) : dir_(std::move(dir)) { ensure_dir(dir_); }

std::string Cache::key_hash(const CacheKey& key) {
  std::ostringstream ss;
  ss << key.model << '|' << fmt_double(key.lambda) << '|' << key.p << '/' << key.q
     << '|' << fmt_double(key.tol) << "|v" << kCacheVersion;
  std::uint64_t h = fnv1a64(ss.str());
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string Cache::path_for(const CacheKey& key) const {
  return join_path(dir_, key_hash(key) + ".json");
}

std::optional<BandSet> Cache::get(const CacheKey& key) const {
  std::string path = path_for(key);
  if (!std::filesystem::exists(path)) return std::nullopt;
  try {
    nlohmann::json j = nlohmann::json::parse(read_file(path));
    if (j.at("model").get<std::string>() != key.model ||
        j.at("p").get<std::int64_t>() != key.p ||
        j.at("q").get<std::int64_t>() != key.q ||
        j.at("tol").get<double>() != key.tol)
      throw std::runtime_error("key fields do not match");
    std::vector<Interval> iv;
    for (const auto& pair : j.at("bands")) {
      if (!pair.is_array() || pair.size() != 2) throw std::runtime_error("bad band entry");
      double lo = pair[0].get<double>(), hi = pair[1].get<double>();
      if (!std::isfinite(lo) || !std::isfinite(hi) || lo > hi)
        throw std::runtime_error("bad band endpoints");
      if (!iv.empty() && lo < iv.back().lo) throw std::runtime_error("bands out of order");
      iv.push_back({lo, hi});
    }
    return BandSet(std::move(iv), 0.0);
  } catch (const std::exception& e) {
    std::cerr << "warning: discarding corrupt cache entry " << path << " (" << e.what()
              << ")\n";
    return std::nullopt;
  }
}

void Cache::put(const CacheKey& key, const BandSet& bands) const {
  nlohmann::json j;
  j["model"] = key.model;
  if (key.model.rfind("amo", 0) == 0)
    j["lambda"] = key.lambda;
  else
    j["lambda"] = nullptr;
  j["p"] = key.p;
  j["q"] = key.q;
  j["tol"] = key.tol;
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& iv : bands.intervals()) arr.push_back({iv.lo, iv.hi});
  j["bands"] = std::move(arr);
  j["created_at"] = static_cast<std::int64_t>(std::time(nullptr));
  atomic_write_file(path_for(key), j.dump());
}

}  // namespace harperlab
