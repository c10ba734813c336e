#include "ballotlens/design.hpp"

#include <cmath>
#include <set>

#include "ballotlens/errors.hpp"

namespace ballotlens::regress {

std::string DesignSpec::term_label(const Term& t) {
  std::string label;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i) label += ":";
    label += t[i];
  }
  return label;
}

DesignMatrix build_design(const std::vector<features::FeatureRow>& rows, const DesignSpec& spec,
                          const std::string& response) {
  std::set<std::string> seen;
  for (const auto& term : spec.terms) {
    if (term.empty()) throw UnknownField("empty term in design spec");
    for (const auto& f : term)
      if (!features::is_known_field(f)) throw UnknownField("unknown feature field '" + f + "'");
    if (!seen.insert(DesignSpec::term_label(term)).second)
      throw UnknownField("duplicate term '" + DesignSpec::term_label(term) + "'");
  }
  if (!features::is_known_field(response)) throw UnknownField("unknown response '" + response + "'");

  DesignMatrix d;
  if (spec.intercept) d.column_labels.push_back("Intercept");
  for (const auto& term : spec.terms) d.column_labels.push_back(DesignSpec::term_label(term));

  const std::size_t p = d.column_labels.size();
  std::vector<std::vector<double>> kept;
  for (const auto& row : rows) {
    std::vector<double> vals(p, 1.0);
    bool ok = true;
    auto yv = features::field_value(row, response);
    if (!yv || !std::isfinite(*yv)) ok = false;
    std::size_t col = spec.intercept ? 1 : 0;
    for (const auto& term : spec.terms) {
      double prod = 1.0;
      for (const auto& f : term) {
        auto v = features::field_value(row, f);
        if (!v || !std::isfinite(*v)) {
          ok = false;
          break;
        }
        prod *= *v;
      }
      if (!ok) break;
      vals[col++] = prod;
    }
    if (!ok) {
      ++d.excluded_rows;
      continue;
    }
    d.response.push_back(*yv);
    kept.push_back(std::move(vals));
  }
  if (kept.empty()) throw EmptyAfterFiltering("no rows left after filtering absent fields");

  d.values = linalg::Matrix(kept.size(), p);
  for (std::size_t i = 0; i < kept.size(); ++i)
    for (std::size_t j = 0; j < p; ++j) d.values(i, j) = kept[i][j];
  return d;
}

}  // namespace ballotlens::regress
