#include "ballotlens/http.hpp"

#include <chrono>
#include <thread>

#include "ballotlens/errors.hpp"
#include "httplib.h"

namespace ballotlens::ingest {

HttplibTransport::HttplibTransport(std::string user_agent) : user_agent_(std::move(user_agent)) {}

HttpResponse HttplibTransport::get(const std::string& host, const std::string& path) {
  httplib::SSLClient client(host);
  client.set_connection_timeout(10);
  client.set_read_timeout(30);
  httplib::Headers headers = {{"User-Agent", user_agent_}};
  auto res = client.Get(path, headers);
  if (!res) throw TransportError("no response from " + host + path);
  HttpResponse out;
  out.status = res->status;
  out.body = res->body;
  for (const auto& [k, v] : res->headers) out.headers[k] = v;
  return out;
}

HttpResponse OfflineTransport::get(const std::string& host, const std::string& path) {
  throw TransportError("offline: refusing network request to " + host + path);
}

RetryingTransport::RetryingTransport(Transport& inner, int max_attempts,
                                     std::function<void(double)> sleep_seconds)
    : inner_(inner), max_attempts_(max_attempts), sleep_(std::move(sleep_seconds)) {
  if (!sleep_) {
    sleep_ = [](double s) {
      std::this_thread::sleep_for(std::chrono::duration<double>(s));
    };
  }
}

HttpResponse RetryingTransport::get(const std::string& host, const std::string& path) {
  double backoff = 1.0;
  std::string last;
  for (int attempt = 1; attempt <= max_attempts_; ++attempt) {
    try {
      auto res = inner_.get(host, path);
      if (res.status == 429 || res.status >= 500) {
        double wait = backoff;
        auto it = res.headers.find("Retry-After");
        if (it != res.headers.end()) {
          try {
            wait = std::stod(it->second);
          } catch (...) {
          }
        }
        last = "status " + std::to_string(res.status) + " from " + host;
        if (attempt < max_attempts_) {
          sleep_(wait);
          backoff *= 2.0;
          continue;
        }
        if (res.status == 429) throw RateLimited(last);
        throw TransportError(last);
      }
      return res;
    } catch (const RateLimited&) {
      throw;
    } catch (const TransportError& e) {
      last = e.what();
      if (attempt < max_attempts_) {
        sleep_(backoff);
        backoff *= 2.0;
        continue;
      }
      throw TransportError("giving up after " + std::to_string(max_attempts_) +
                           " attempts: " + last);
    }
  }
  throw TransportError(last);  // unreachable
}

}  // namespace ballotlens::ingest
