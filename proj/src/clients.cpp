#include "ballotlens/clients.hpp"

#include <algorithm>
#include <map>

#include "ballotlens/errors.hpp"
#include "json.hpp"

namespace ballotlens::ingest {

namespace {

constexpr const char* kWikiHost = "wikimedia.org";
constexpr const char* kGdeltHost = "api.gdeltproject.org";

// Fetch through the cache: hits replay the stored verdict (including 404),
// misses go to the network and are persisted before interpretation.
CachedResponse cached_get(Transport& transport, DiskCache& cache, const std::string& endpoint,
                          const std::string& query, const std::string& host,
                          const std::string& path) {
  if (auto hit = cache.get(endpoint, query)) return *hit;
  HttpResponse res = transport.get(host, path);
  CachedResponse entry{res.status, res.body};
  cache.put(endpoint, query, entry);
  return entry;
}

}  // namespace

std::vector<std::string> default_channels() {
  // CNN + MSNBC + Fox News; local CBS affiliates are appended from config.
  return {"CNN", "MSNBC", "FOXNEWS"};
}

std::string percent_encode(const std::string& s) {
  static const char* hex = "0123456789ABCDEF";
  std::string out;
  for (unsigned char c : s) {
    if (std::isalnum(c) || c == '-' || c == '_' || c == '.' || c == '~') {
      out.push_back(static_cast<char>(c));
    } else {
      out.push_back('%');
      out.push_back(hex[c >> 4]);
      out.push_back(hex[c & 0xf]);
    }
  }
  return out;
}

// --- pageviews ---

std::string PageviewsClient::cache_query(const std::string& title, const DateRange& window) {
  return title + "|" + to_yyyymmdd(window.begin) + "|" + to_yyyymmdd(window.end);
}

std::string PageviewsClient::request_path(const std::string& title, const DateRange& window) {
  return "/api/rest_v1/metrics/pageviews/per-article/en.wikipedia/all-access/user/" +
         percent_encode(title) + "/daily/" + to_yyyymmdd(window.begin) + "00/" +
         to_yyyymmdd(window.end) + "00";
}

PageviewsClient::PageviewsClient(Transport& transport, DiskCache& cache)
    : transport_(transport), cache_(cache) {}

DailySeries PageviewsClient::fetch(const std::string& title, const DateRange& window) {
  if (title.empty()) throw InvalidQuery("empty article title");
  auto res = cached_get(transport_, cache_, kEndpoint, cache_query(title, window), kWikiHost,
                        request_path(title, window));
  if (res.status == 404) throw PageNotFound(title);
  if (res.status != 200)
    throw TransportError("pageviews: status " + std::to_string(res.status) + " for " + title);

  auto j = nlohmann::json::parse(res.body, nullptr, false);
  if (j.is_discarded()) throw TransportError("pageviews: unparsable body for " + title);

  DailySeries s;
  s.metric = Metric::Pageviews;
  s.start_date = window.begin;
  s.counts.assign(static_cast<std::size_t>(window.length_days()), 0);
  const std::int64_t day0 = to_days(window.begin);
  for (const auto& item : j.value("items", nlohmann::json::array())) {
    std::string ts = item.value("timestamp", "");
    if (ts.size() < 8) continue;
    Date d = parse_iso(ts.substr(0, 4) + "-" + ts.substr(4, 2) + "-" + ts.substr(6, 2));
    std::int64_t idx = to_days(d) - day0;
    if (idx < 0 || idx >= static_cast<std::int64_t>(s.counts.size())) continue;
    s.counts[static_cast<std::size_t>(idx)] = item.value("views", std::int64_t{0});
  }
  return s;
}

// --- tv mentions ---

std::string TvMentionsClient::cache_query(const std::string& full_name, const std::string& channel,
                                          const DateRange& window) {
  return full_name + "|" + channel + "|" + to_yyyymmdd(window.begin) + "|" +
         to_yyyymmdd(window.end);
}

std::string TvMentionsClient::request_path(const std::string& full_name,
                                           const std::string& channel, const DateRange& window) {
  // Name quoted so first and last name must be mentioned consecutively.
  std::string query = percent_encode("\"" + full_name + "\" station:" + channel);
  return "/api/v2/tv/tv?query=" + query + "&mode=timelinevolraw&format=json&datanorm=raw" +
         "&startdatetime=" + to_yyyymmdd(window.begin) + "000000" +
         "&enddatetime=" + to_yyyymmdd(window.end) + "235959";
}

TvMentionsClient::TvMentionsClient(Transport& transport, DiskCache& cache)
    : transport_(transport), cache_(cache) {}

DailySeries TvMentionsClient::fetch(const std::string& full_name,
                                    const std::vector<std::string>& channels,
                                    const DateRange& window) {
  if (full_name.empty()) throw InvalidQuery("empty candidate name");
  if (channels.empty()) throw InvalidQuery("empty channel list");

  DailySeries s;
  s.metric = Metric::TvMentions;
  s.start_date = window.begin;
  s.counts.assign(static_cast<std::size_t>(window.length_days()), 0);
  const std::int64_t day0 = to_days(window.begin);

  for (const auto& channel : channels) {
    auto res = cached_get(transport_, cache_, kEndpoint, cache_query(full_name, channel, window),
                          kGdeltHost, request_path(full_name, channel, window));
    if (res.status != 200)
      throw TransportError("tv mentions: status " + std::to_string(res.status) + " for " +
                           full_name + " on " + channel);
    auto j = nlohmann::json::parse(res.body, nullptr, false);
    if (j.is_discarded()) throw TransportError("tv mentions: unparsable body for " + full_name);
    for (const auto& series : j.value("timeline", nlohmann::json::array())) {
      for (const auto& point : series.value("data", nlohmann::json::array())) {
        std::string ts = point.value("date", "");
        if (ts.size() < 8) continue;
        Date d = parse_iso(ts.substr(0, 4) + "-" + ts.substr(4, 2) + "-" + ts.substr(6, 2));
        std::int64_t idx = to_days(d) - day0;
        if (idx < 0 || idx >= static_cast<std::int64_t>(s.counts.size())) continue;
        s.counts[static_cast<std::size_t>(idx)] +=
            static_cast<std::int64_t>(point.value("value", 0.0));
      }
    }
  }
  return s;
}

}  // namespace ballotlens::ingest
