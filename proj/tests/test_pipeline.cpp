#include "ballotlens/pipeline.hpp"

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "ballotlens/config.hpp"
#include "ballotlens/errors.hpp"
#include "ballotlens/synth.hpp"
#include "doctest.h"

using namespace ballotlens;
using namespace ballotlens::cli;
namespace fs = std::filesystem;

namespace {

// One synthetic corpus shared across the pipeline cases; generating it is
// the expensive part.
const fs::path& corpus_dir() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / ("bl_pipe_" + std::to_string(::getpid()));
    auto summary = synth::generate_corpus(d.string(), 7704);
    REQUIRE(summary.races == 400);
    REQUIRE(summary.candidates == 800);
    return d;
  }();
  return dir;
}

PipelineConfig corpus_config(const std::string& out_name) {
  auto cfg = load_config((corpus_dir() / "config.toml").string());
  cfg.out_dir = (corpus_dir() / out_name).string();
  return cfg;
}

std::string slurp(const fs::path& p) {
  std::ostringstream ss;
  ss << std::ifstream(p).rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("config parser handles the supported TOML subset") {
  auto cfg = parse_config(
      "# pipeline settings\n"
      "[inputs]\n"
      "years = [2016, 2018]\n"
      "results = \"r.csv\"\n"
      "chambers = [\"House\"]\n"
      "offline = true\n"
      "cumulative = false\n"
      "weeks = [3, 7]\n");
  CHECK(cfg.years == std::vector<int>{2016, 2018});
  CHECK(cfg.results_path == "r.csv");
  CHECK(cfg.chambers == std::vector<std::string>{"House"});
  CHECK(cfg.offline);
  CHECK_FALSE(cfg.cumulative);
  CHECK(cfg.weeks == std::vector<int>{3, 7});
}

TEST_CASE("config errors carry the offending line") {
  try {
    parse_config("years = [2016]\nresults = \n", "bad.toml");
    FAIL("expected a throw");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("bad.toml:2") != std::string::npos);
  }
}

TEST_CASE("config validation rejects odd years, bad weeks and missing paths") {
  PipelineConfig cfg;
  cfg.years = {2016};
  cfg.results_path = "r.csv";
  CHECK_NOTHROW(cfg.validate());

  auto bad = cfg;
  bad.years = {2015};
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = cfg;
  bad.weeks = {52};
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = cfg;
  bad.results_path.clear();
  CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("the full offline pipeline runs green on the synthetic corpus") {
  auto cfg = corpus_config("out_full");
  REQUIRE(run_command(cfg, "all") == 0);

  const fs::path out(cfg.out_dir);
  for (const char* f :
       {"fetch_summary.txt", "features/final.csv", "features/validation.txt",
        "fits/summary.txt", "fits/table3.model1.json", "fits/appendixH.json", "figure2.csv",
        "figure3a.csv", "figure3b.csv", "figure4.csv", "figure1_hist.csv", "appendixG.csv",
        "tallies.csv", "probability_grid.csv", "documented_targets.txt", "report.md"})
    CHECK_MESSAGE(fs::exists(out / f), f);

  auto summary = slurp(out / "fits" / "summary.txt");
  CHECK(summary.find("failed: 0") != std::string::npos);
  auto fetched = slurp(out / "fetch_summary.txt");
  CHECK(fetched.find("failed: 0") != std::string::npos);

  // 8 grid rows plus the header.
  auto grid = slurp(out / "probability_grid.csv");
  CHECK(std::count(grid.begin(), grid.end(), '\n') == 9);
}

TEST_CASE("reruns are byte-identical") {
  auto cfg1 = corpus_config("out_rep1");
  auto cfg2 = corpus_config("out_rep2");
  REQUIRE(run_command(cfg1, "all") == 0);
  REQUIRE(run_command(cfg2, "all") == 0);
  std::size_t compared = 0;
  for (const auto& entry : fs::recursive_directory_iterator(cfg1.out_dir)) {
    if (!entry.is_regular_file()) continue;
    auto rel = fs::relative(entry.path(), cfg1.out_dir);
    CHECK_MESSAGE(slurp(entry.path()) == slurp(fs::path(cfg2.out_dir) / rel), rel.string());
    ++compared;
  }
  CHECK(compared > 100);  // weekly snapshots, fits, figures
}

TEST_CASE("stage commands run standalone against prior outputs") {
  auto cfg = corpus_config("out_stages");
  REQUIRE(run_command(cfg, "fetch") == 0);
  REQUIRE(run_command(cfg, "features") == 0);
  REQUIRE(run_command(cfg, "fit") == 0);
  REQUIRE(run_command(cfg, "report") == 0);
  CHECK(fs::exists(fs::path(cfg.out_dir) / "report.md"));
}

TEST_CASE("exit codes follow the contract") {
  // 2: config problems.
  PipelineConfig empty;
  CHECK(run_command(empty, "features") == 2);
  auto cfg = corpus_config("out_codes");
  CHECK(run_command(cfg, "frobnicate") == 2);

  // 3: offline with a cold cache is a network-class failure.
  auto cold = corpus_config("out_cold");
  cold.cache_dir = (corpus_dir() / "empty_cache").string();
  CHECK(run_command(cold, "features") == 3);

  // 1: a typo in the model list.
  auto typo = corpus_config("out_typo");
  REQUIRE(run_command(typo, "features") == 0);
  typo.models = {"table3.model9"};
  CHECK(run_command(typo, "fit") == 1);

  // 1: report before fit.
  auto early = corpus_config("out_early");
  REQUIRE(run_command(early, "features") == 0);
  CHECK(run_command(early, "report") == 1);
}

TEST_CASE("fetch summary reports the pageless candidates") {
  auto cfg = corpus_config("out_fetch");
  auto summary = cmd_fetch(cfg);
  CHECK(summary.failed == 0);
  CHECK(summary.fetched == 0);  // fully pre-cached corpus
  CHECK(summary.cached > 0);
  CHECK(summary.missing_pages.size() == 45);  // pageless challengers in the corpus
}

TEST_CASE("raw dataset honors the cached page-absence verdicts") {
  auto cfg = corpus_config("out_raw");
  auto raw = load_raw_dataset(cfg);
  CHECK(raw.candidates.size() == 800);
  std::size_t pageless = 0;
  for (const auto& c : raw.candidates)
    if (!c.wikipedia_title) ++pageless;
  CHECK(pageless == 45);
  CHECK(raw.views.size() == 800 - 45);
  CHECK(raw.mentions.size() == 800);
}
