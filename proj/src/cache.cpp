#include "ballotlens/cache.hpp"

#include <openssl/evp.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "ballotlens/errors.hpp"
#include "json.hpp"

namespace ballotlens::ingest {

namespace fs = std::filesystem;

DiskCache::DiskCache(fs::path dir) : dir_(std::move(dir)) { fs::create_directories(dir_); }

std::string DiskCache::key(const std::string& endpoint, const std::string& query) {
  const std::string material = endpoint + "\n" + query;
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(material.data(), material.size(), digest, &len, EVP_sha256(), nullptr);
  static const char* hex = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[digest[i] >> 4]);
    out.push_back(hex[digest[i] & 0xf]);
  }
  return out;
}

std::optional<CachedResponse> DiskCache::get(const std::string& endpoint,
                                             const std::string& query) const {
  fs::path p = dir_ / (key(endpoint, query) + ".json");
  std::ifstream in(p, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream ss;
  ss << in.rdbuf();
  auto j = nlohmann::json::parse(ss.str(), nullptr, false);
  if (j.is_discarded()) return std::nullopt;  // torn write, treat as miss
  CachedResponse r;
  r.status = j.value("status", 0);
  r.body = j.value("body", std::string());
  return r;
}

void DiskCache::put(const std::string& endpoint, const std::string& query,
                    const CachedResponse& response) {
  nlohmann::json j;
  j["status"] = response.status;
  j["body"] = response.body;
  fs::path final_path = dir_ / (key(endpoint, query) + ".json");
  fs::path tmp = final_path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cache write failed: " + tmp.string());
    out << j.dump();
  }
  fs::rename(tmp, final_path);
}

}  // namespace ballotlens::ingest
