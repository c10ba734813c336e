#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ballotlens/config.hpp"
#include "ballotlens/errors.hpp"
#include "ballotlens/pipeline.hpp"
#include "ballotlens/synth.hpp"

using ballotlens::cli::PipelineConfig;

namespace {

// Parses "3", "0-5", "3,7,11" into week numbers.
std::vector<int> parse_weeks(const std::string& text) {
  std::vector<int> weeks;
  std::string token;
  auto flush = [&]() {
    if (token.empty()) return;
    auto dash = token.find('-');
    if (dash != std::string::npos && dash > 0) {
      int a = std::stoi(token.substr(0, dash));
      int b = std::stoi(token.substr(dash + 1));
      for (int w = a; w <= b; ++w) weeks.push_back(w);
    } else {
      weeks.push_back(std::stoi(token));
    }
    token.clear();
  };
  for (char c : text) {
    if (c == ',') {
      flush();
    } else {
      token.push_back(c);
    }
  }
  flush();
  return weeks;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ballotlens: congressional-race attention pipeline"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand

  std::string config_path, out_dir, cache_dir, models_csv, weeks_spec;
  bool offline = false;
  std::optional<bool> cumulative;
  app.add_option("--config", config_path, "TOML config file");
  app.add_flag("--offline", offline, "forbid network access; fail on cache miss");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--cache", cache_dir, "response cache directory");
  app.add_option("--models", models_csv, "comma-separated registry model names");
  app.add_option("--weeks", weeks_spec, "week selection, e.g. 0-51 or 3,7,11");
  app.add_option("--cumulative", cumulative, "use cumulative weekly ratios (true/false)");

  for (const char* name : {"fetch", "features", "fit", "report", "all"})
    app.add_subcommand(name);
  auto* synth_cmd = app.add_subcommand("synth", "generate the synthetic fixture corpus");
  std::string synth_dir = "synth_corpus";
  std::uint64_t synth_seed = 7704;
  synth_cmd->add_option("--dir", synth_dir, "corpus output directory");
  synth_cmd->add_option("--seed", synth_seed, "generator seed");

  CLI11_PARSE(app, argc, argv);
  const std::string command = app.get_subcommands().front()->get_name();

  if (command == "synth") {
    try {
      auto summary = ballotlens::synth::generate_corpus(synth_dir, synth_seed);
      std::printf("wrote %d races / %d candidates to %s\n", summary.races, summary.candidates,
                  synth_dir.c_str());
      return 0;
    } catch (const ballotlens::Error& e) {
      std::fprintf(stderr, "error: %s\n", e.what());
      return 1;
    }
  }

  PipelineConfig cfg;
  try {
    if (!config_path.empty()) cfg = ballotlens::cli::load_config(config_path);
    // Flags win over the config file; the env var sits between them.
    if (const char* env = std::getenv("BALLOTLENS_CACHE")) cfg.cache_dir = env;
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    if (!cache_dir.empty()) cfg.cache_dir = cache_dir;
    if (offline) cfg.offline = true;
    if (cumulative) cfg.cumulative = *cumulative;
    if (!models_csv.empty()) {
      cfg.models.clear();
      std::string token;
      for (char c : models_csv + ",") {
        if (c == ',') {
          if (!token.empty()) cfg.models.push_back(token);
          token.clear();
        } else {
          token.push_back(c);
        }
      }
    }
    if (!weeks_spec.empty()) cfg.weeks = parse_weeks(weeks_spec);
  } catch (const ballotlens::Error& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  }

  return ballotlens::cli::run_command(cfg, command);
}
