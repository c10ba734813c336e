#pragma once

#include <random>
#include <vector>

#include "ballotlens/design.hpp"
#include "ballotlens/features.hpp"

namespace bltest {

using ballotlens::features::FeatureRow;

// Rows with view_ratio / challenger / vote_share / win_lose populated.
inline FeatureRow make_row(double view_ratio, int challenger, double vote_share, int win_lose = 0) {
  FeatureRow r;
  r.candidate_id = "c";
  r.view_ratio = view_ratio;
  r.challenger = challenger;
  r.vote_share = vote_share;
  r.win_lose = win_lose;
  r.has_page = 1;
  return r;
}

// A DesignMatrix straight from raw columns, bypassing FeatureRow.
inline ballotlens::regress::DesignMatrix raw_design(
    const std::vector<std::vector<double>>& data_columns, const std::vector<double>& response,
    bool intercept = true) {
  ballotlens::regress::DesignMatrix d;
  const std::size_t n = response.size();
  const std::size_t p = data_columns.size() + (intercept ? 1 : 0);
  d.values = ballotlens::linalg::Matrix(n, p);
  if (intercept) d.column_labels.push_back("Intercept");
  for (std::size_t c = 0; c < data_columns.size(); ++c)
    d.column_labels.push_back("x" + std::to_string(c));
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t j = 0;
    if (intercept) d.values(i, j++) = 1.0;
    for (const auto& col : data_columns) d.values(i, j++) = col[i];
  }
  d.response = response;
  return d;
}

}  // namespace bltest
