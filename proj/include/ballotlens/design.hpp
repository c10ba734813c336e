#pragma once

#include <string>
#include <vector>

#include "ballotlens/features.hpp"
#include "ballotlens/linalg.hpp"

namespace ballotlens::regress {

// One model term: a singleton is a main effect, a k-set a k-way
// interaction realized as the elementwise product of its fields.
using Term = std::vector<std::string>;

struct DesignSpec {
  std::vector<Term> terms;
  bool intercept = true;

  static std::string term_label(const Term& t);
};

struct DesignMatrix {
  linalg::Matrix values;                 // n x p, intercept first when present
  std::vector<double> response;          // n
  std::vector<std::string> column_labels;
  std::size_t excluded_rows = 0;         // rows dropped for absent fields
};

// Realizes the spec against feature rows. Rows with any absent referenced
// field (including the response) are excluded and counted.
// Throws UnknownField / EmptyAfterFiltering.
DesignMatrix build_design(const std::vector<features::FeatureRow>& rows, const DesignSpec& spec,
                          const std::string& response);

}  // namespace ballotlens::regress
