#pragma once

#include <filesystem>
#include <optional>
#include <string>

namespace ballotlens::ingest {

struct CachedResponse {
  int status = 0;
  std::string body;
};

// Content-addressed on-disk response cache. Entries are keyed by
// SHA-256(endpoint + "\n" + query) and written via a temp file plus an
// atomic rename, so concurrent writers are safe.
class DiskCache {
public:
  explicit DiskCache(std::filesystem::path dir);

  static std::string key(const std::string& endpoint, const std::string& query);

  std::optional<CachedResponse> get(const std::string& endpoint, const std::string& query) const;
  void put(const std::string& endpoint, const std::string& query, const CachedResponse& response);

  const std::filesystem::path& dir() const { return dir_; }

private:
  std::filesystem::path dir_;
};

}  // namespace ballotlens::ingest
