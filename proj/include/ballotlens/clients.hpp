#pragma once

#include <string>
#include <vector>

#include "ballotlens/cache.hpp"
#include "ballotlens/dates.hpp"
#include "ballotlens/http.hpp"
#include "ballotlens/types.hpp"

namespace ballotlens::ingest {

// Default TV channel set; the local-CBS affiliate list is configurable
// because no canonical enumeration exists.
std::vector<std::string> default_channels();

std::string percent_encode(const std::string& s);

// Wikimedia REST per-article daily pageviews (en.wikipedia, all-access,
// agent class "user"). Responses are cached, including 404s, so offline
// runs can replay page-absence verdicts.
class PageviewsClient {
public:
  static constexpr const char* kEndpoint = "pageviews";
  static std::string cache_query(const std::string& title, const DateRange& window);
  static std::string request_path(const std::string& title, const DateRange& window);

  PageviewsClient(Transport& transport, DiskCache& cache);

  // One count per day in the window; missing days are zero-filled.
  // Throws PageNotFound, TransportError, RateLimited.
  DailySeries fetch(const std::string& title, const DateRange& window);

private:
  Transport& transport_;
  DiskCache& cache_;
};

// GDELT TV keyword-timeline queries, one cached request per channel,
// summed across the channel list.
class TvMentionsClient {
public:
  static constexpr const char* kEndpoint = "tvmentions";
  static std::string cache_query(const std::string& full_name, const std::string& channel,
                                 const DateRange& window);
  static std::string request_path(const std::string& full_name, const std::string& channel,
                                  const DateRange& window);

  TvMentionsClient(Transport& transport, DiskCache& cache);

  // Throws InvalidQuery on an empty name or channel list.
  DailySeries fetch(const std::string& full_name, const std::vector<std::string>& channels,
                    const DateRange& window);

private:
  Transport& transport_;
  DiskCache& cache_;
};

}  // namespace ballotlens::ingest
