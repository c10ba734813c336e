#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ballotlens/features.hpp"
#include "ballotlens/fit.hpp"

namespace ballotlens::analysis {

// Row filters for registry entries. Page strata classify each race by its
// top-two candidates (by vote share): MixedPage = exactly one of the two
// lacks a page, BothPage = both have one.
enum class Stratum { All, MixedPage, BothPage };

struct ModelRegistryEntry {
  std::string name;
  regress::Family family = regress::Family::OLS;
  std::optional<Chamber> chamber;  // nullopt = both chambers
  Stratum stratum = Stratum::All;
  regress::DesignSpec spec;
  std::string response;
};

// The shipped model ladder: table3.model1-5, table4.model1-6,
// table6.model1-4, appendixA.house/.senate, appendixC,
// appendixD.binary/.continuous, appendixF.house/.senate, appendixH.
const std::vector<ModelRegistryEntry>& default_registry();

std::vector<std::string> registry_names();

// Rows passing the entry's chamber and page-stratum filters.
std::vector<features::FeatureRow> stratum_rows(const ModelRegistryEntry& entry,
                                               const std::vector<features::FeatureRow>& rows);

// Fits each named entry on its stratum. Throws UnknownModel, EmptyStratum;
// estimator errors propagate.
std::map<std::string, regress::FitResult> run_registry(
    const std::vector<features::FeatureRow>& rows, const std::vector<std::string>& names);

// Reference table of the source study's published coefficients on its real
// 2016/2018 corpus. Documented targets only: they require re-collecting
// live API data and are not regression-tested.
std::string documented_targets();

}  // namespace ballotlens::analysis
