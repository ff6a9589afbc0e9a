#pragma once

#include "conceptmine/align.hpp"
#include "conceptmine/bootstrap.hpp"
#include "conceptmine/corpus.hpp"
#include "conceptmine/discriminator.hpp"
#include "conceptmine/seqlabel.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

namespace conceptmine {

// Human-review stand-in: true/false for a judged candidate, nullopt to skip.
using Reviewer = std::function<std::optional<bool>(const ConceptCandidate&)>;

struct MiningOptions {
  BootstrapOptions bootstrap;
  AlignOptions align;
  CrfTrainOptions crf;
  QualityOptions gate;
  // Among gate-accepted candidates for one query, the first source wins.
  std::vector<CandidateSource> priority{CandidateSource::kCrf, CandidateSource::kAlign,
                                        CandidateSource::kBootstrap};
  std::size_t review_samples = 300;
  std::size_t max_crf_sequences = 4000;
  // Also label queries from their gated alignment result when no pattern
  // extraction was accepted.
  bool align_training_labels = true;
  bool decode_titles = true;  // fall back to per-title decoding when the query yields nothing
  std::uint64_t seed = 17;
};

struct MinedQuery {
  std::string query_id;
  std::string query_text;
  std::vector<ConceptCandidate> candidates;  // every source, gate decision filled in
  std::optional<ConceptCandidate> chosen;
};

struct MiningResult {
  BootstrapResult bootstrap;
  std::vector<MinedQuery> queries;  // log order
  std::set<std::string> concepts;   // distinct chosen concepts
  QualityModel gate;
  std::optional<CrfModel> crf;
  std::size_t reviewed = 0;
  std::size_t crf_training_sequences = 0;
};

// Candidates the alignment step proposes for one query: each title's
// aligned spans, reduced to the most common surface string.
std::optional<ConceptCandidate> align_query(const QueryLogEntry& entry, const AlignOptions& options);

// CRF on the query; when it finds nothing and decode_titles is set, decode
// every clicked title and keep the most common result.
std::optional<ConceptCandidate> crf_query(const CrfModel& model, const QueryLogEntry& entry,
                                          bool decode_titles);

// Offline mining. With `gate_model` unset, a gate is trained from
// `reviewer` judgments on a seeded sample of bootstrap/alignment candidates.
MiningResult mine_concepts(std::span<const QueryLogEntry> logs, const std::vector<Pattern>& seeds,
                           const Reviewer& reviewer, const MiningOptions& options = {},
                           const QualityModel* gate_model = nullptr);

}  // namespace conceptmine
