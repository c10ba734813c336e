#pragma once

#include <cstdint>
#include <string>

namespace ballotlens::synth {

struct CorpusSummary {
  int races = 0;
  int candidates = 0;
};

// Writes a self-contained 400-race corpus (results.csv, receipts.csv,
// overrides.csv, a pre-populated response cache, config.toml) with a
// planted data-generating process: vote_share = 0.36 + 0.27*view_ratio
// plus a +0.15 challenger interaction, orthogonalized so the planted
// coefficients are recoverable in-sample. Deterministic for a given seed.
CorpusSummary generate_corpus(const std::string& dir, std::uint64_t seed = 7704);

}  // namespace ballotlens::synth
