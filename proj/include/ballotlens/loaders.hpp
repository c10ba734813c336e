#pragma once

#include <string>
#include <vector>

#include "ballotlens/types.hpp"

namespace ballotlens::ingest {

// Case-folded, punctuation-stripped, suffix-stripped (Jr/Sr/II/III/IV)
// name key used for candidate linkage and incumbency lookback.
std::string link_key(const std::string& full_name);

// Stable id: "<race>:<dashed name key>", e.g. "2016-H-PA-3:john-smith".
std::string candidate_id_for(const RaceKey& race, const std::string& full_name);

struct LoadedResults {
  std::vector<ResultsRow> results;        // rows for every year in the file
  std::vector<CandidateRecord> candidates;
};

// CSV schema: year,chamber,state,district,candidate,party,votes,totalvotes.
// vote_share = votes / totalvotes; the race's strict vote maximizer gets
// win_lose. Incumbency is derived by matching a candidate's name key
// against the prior cycle's winner of the same seat in the same file.
// Throws SchemaError, DuplicateCandidate.
LoadedResults load_results(const std::string& path);

struct ReceiptsLoad {
  std::vector<ReceiptsRow> rows;          // matched candidates only
  std::vector<std::string> unmatched;     // finance ids with no candidate
};

// CSV schema: candidate_id,receipts_usd. Ids match either candidate_id or
// fec_id. Throws SchemaError on malformed or negative amounts.
ReceiptsLoad load_receipts(const std::string& path,
                           const std::vector<CandidateRecord>& candidates);

// Fills wikipedia_title / fec_id / incumbent / stronghold. The heuristic
// title is the display-form name; explicit override rows
// (candidate_id,wikipedia_title,fec_id,incumbent[,stronghold]) win.
// Candidates sharing a name key but differing in state or party are
// conflicts: AmbiguousLink unless every one carries an override title.
// overrides_path may be empty (no file).
std::vector<CandidateRecord> link_candidates(std::vector<CandidateRecord> candidates,
                                             const std::string& overrides_path);

}  // namespace ballotlens::ingest
