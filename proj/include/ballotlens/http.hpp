#pragma once

#include <functional>
#include <map>
#include <memory>
#include <string>

namespace ballotlens::ingest {

struct HttpResponse {
  int status = 0;
  std::string body;
  std::map<std::string, std::string> headers;
};

// Minimal GET-only transport seam; fakes stand in for the network in tests.
class Transport {
public:
  virtual ~Transport() = default;
  virtual HttpResponse get(const std::string& host, const std::string& path) = 0;
};

// Real HTTPS transport over cpp-httplib.
class HttplibTransport : public Transport {
public:
  explicit HttplibTransport(std::string user_agent = "ballotlens/1.0");
  HttpResponse get(const std::string& host, const std::string& path) override;

private:
  std::string user_agent_;
};

// Always refuses: --offline runs must be served entirely from cache.
class OfflineTransport : public Transport {
public:
  HttpResponse get(const std::string& host, const std::string& path) override;
};

// 3 attempts, exponential backoff from 1 s, honoring Retry-After hints.
// The sleeper is injectable so tests do not actually wait.
class RetryingTransport : public Transport {
public:
  RetryingTransport(Transport& inner, int max_attempts = 3,
                    std::function<void(double)> sleep_seconds = nullptr);
  HttpResponse get(const std::string& host, const std::string& path) override;

private:
  Transport& inner_;
  int max_attempts_;
  std::function<void(double)> sleep_;
};

}  // namespace ballotlens::ingest
