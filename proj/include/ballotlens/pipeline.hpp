#pragma once

#include <string>
#include <vector>

#include "ballotlens/config.hpp"
#include "ballotlens/features.hpp"

namespace ballotlens::cli {

struct FetchSummary {
  int cached = 0;     // served from cache
  int fetched = 0;    // pulled over the network
  int failed = 0;     // hard transport failures
  std::vector<std::string> missing_pages;  // PageNotFound verdicts
};

// Stage entry points; they throw structured errors. run_command maps them
// to the exit-code contract: 0 ok, 1 validation/model, 2 config,
// 3 network.
FetchSummary cmd_fetch(const PipelineConfig& cfg);
void cmd_features(const PipelineConfig& cfg);
void cmd_fit(const PipelineConfig& cfg);
void cmd_report(const PipelineConfig& cfg);

int run_command(const PipelineConfig& cfg, const std::string& command);

// Raw dataset assembled from input files plus the response cache.
features::RawDataset load_raw_dataset(const PipelineConfig& cfg);

}  // namespace ballotlens::cli
