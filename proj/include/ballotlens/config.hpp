#pragma once

#include <optional>
#include <string>
#include <vector>

namespace ballotlens::cli {

struct PipelineConfig {
  std::vector<int> years;
  std::vector<std::string> chambers = {"House", "Senate"};
  std::string results_path;
  std::string receipts_path;
  std::string overrides_path;
  std::string cache_dir = "cache";
  std::vector<std::string> channels;  // empty = default set
  bool offline = false;
  std::string out_dir = "out";
  std::vector<std::string> models;    // empty = full registry
  std::vector<int> weeks;             // empty = all 52
  bool cumulative = true;
  std::string user_agent = "ballotlens/1.0";

  void validate() const;  // throws ConfigError
};

// Minimal TOML subset: key = value with strings, integers, booleans and
// flat arrays thereof; '#' comments; table headers ignored. Throws
// ConfigError with the offending line number.
PipelineConfig load_config(const std::string& path);
PipelineConfig parse_config(const std::string& text, const std::string& origin = "config");

}  // namespace ballotlens::cli
