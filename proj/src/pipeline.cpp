#include "conceptmine/pipeline.hpp"

#include "conceptmine/log.hpp"
#include "conceptmine/text.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>
#include <unordered_map>

namespace conceptmine {

std::optional<ConceptCandidate> align_query(const QueryLogEntry& entry,
                                            const AlignOptions& options) {
  std::vector<ConceptCandidate> flat;
  for (auto& per_title : aligned_candidates_per_title(entry, options)) {
    for (auto& c : per_title) flat.push_back(std::move(c));
  }
  return select_final_candidate(flat);
}

std::optional<ConceptCandidate> crf_query(const CrfModel& model, const QueryLogEntry& entry,
                                          bool decode_titles) {
  auto make = [&](std::string text) {
    ConceptCandidate c;
    c.text = std::move(text);
    c.source = CandidateSource::kCrf;
    c.provenance = entry.query.id;
    return c;
  };
  if (!entry.query.tokens.empty()) {
    auto text = concept_text(decode(model, entry.query.tokens));
    if (!text.empty()) return make(std::move(text));
  }
  if (!decode_titles) return std::nullopt;
  std::vector<ConceptCandidate> per_title;
  for (const auto& t : entry.titles) {
    auto text = concept_text(decode(model, t.tokens));
    if (!text.empty()) per_title.push_back(make(std::move(text)));
  }
  return select_final_candidate(per_title);
}

namespace {

struct GateCache {
  const QualityModel& model;
  const QueryLogIndex& index;
  std::unordered_map<std::string, bool> decided;

  bool accept(const std::string& text) {
    auto it = decided.find(text);
    if (it != decided.end()) return it->second;
    ConceptCandidate c;
    c.text = text;
    bool ok = gate(model, c, index.featurize(text)).accepted.value_or(false);
    decided.emplace(text, ok);
    return ok;
  }
};

}  // namespace

MiningResult mine_concepts(std::span<const QueryLogEntry> logs, const std::vector<Pattern>& seeds,
                           const Reviewer& reviewer, const MiningOptions& options,
                           const QualityModel* gate_model) {
  MiningResult result;
  std::vector<Query> queries;
  queries.reserve(logs.size());
  for (const auto& e : logs) queries.push_back(e.query);

  // Unsupervised candidates: pattern bootstrapping and query-title alignment.
  result.bootstrap = run_bootstrap(seeds, queries, options.bootstrap);
  result.queries.resize(logs.size());
  std::vector<std::vector<std::vector<ConceptCandidate>>> aligned(logs.size());
  for (std::size_t i = 0; i < logs.size(); ++i) {
    auto& mq = result.queries[i];
    mq.query_id = logs[i].query.id;
    mq.query_text = logs[i].query.text;
    std::set<std::string> seen;
    for (const auto& p : result.bootstrap.patterns) {
      if (auto c = apply_pattern(p, logs[i].query); c && seen.insert(c->text).second) {
        c->source = CandidateSource::kBootstrap;
        c->provenance = mq.query_id;
        mq.candidates.push_back(std::move(*c));
      }
    }
    aligned[i] = aligned_candidates_per_title(logs[i], options.align);
    for (const auto& c : extract_aligned_candidates(logs[i], options.align)) {
      mq.candidates.push_back(c);
    }
  }

  QueryLogIndex log_index(logs, [](const ClickedTitle&) { return std::nullopt; }, 0);

  // Gate: given, or trained on reviewed samples of the unsupervised output.
  if (gate_model) {
    result.gate = *gate_model;
  } else {
    // Reviewers judge what each query yielded: its pattern extractions and
    // its alignment result, not every aligned sub-span.
    std::set<std::string> pool_set;
    for (std::size_t i = 0; i < logs.size(); ++i) {
      for (const auto& c : result.queries[i].candidates) {
        if (c.source == CandidateSource::kBootstrap) pool_set.insert(c.text);
      }
      std::vector<ConceptCandidate> flat;
      for (const auto& per_title : aligned[i]) flat.insert(flat.end(), per_title.begin(), per_title.end());
      if (auto best = select_final_candidate(flat)) pool_set.insert(best->text);
    }
    std::vector<std::string> pool(pool_set.begin(), pool_set.end());
    std::mt19937_64 rng(options.seed);
    std::shuffle(pool.begin(), pool.end(), rng);
    std::vector<std::pair<ConceptFeatures, bool>> labeled;
    for (const auto& text : pool) {
      if (labeled.size() >= options.review_samples) break;
      ConceptCandidate c;
      c.text = text;
      if (auto verdict = reviewer ? reviewer(c) : std::nullopt) {
        labeled.emplace_back(log_index.featurize(text), *verdict);
      }
    }
    result.reviewed = labeled.size();
    result.gate = train_quality(labeled, options.gate);
  }
  GateCache cache{result.gate, log_index, {}};

  // CRF training set: queries labeled with an accepted unsupervised concept.
  std::vector<LabeledSequence> training;
  for (std::size_t i = 0; i < logs.size(); ++i) {
    const auto& mq = result.queries[i];
    std::optional<std::string> label;
    for (const auto& c : mq.candidates) {
      if (c.source == CandidateSource::kBootstrap && cache.accept(c.text)) {
        label = c.text;
        break;
      }
    }
    if (!label && options.align_training_labels) {
      std::vector<ConceptCandidate> flat;
      for (const auto& per_title : aligned[i]) {
        for (const auto& c : per_title) {
          if (cache.accept(c.text)) flat.push_back(c);
        }
      }
      if (auto best = select_final_candidate(flat)) label = best->text;
    }
    if (!label) continue;
    if (auto seq = label_concept(logs[i].query.tokens, *label)) training.push_back(std::move(*seq));
  }
  if (training.size() > options.max_crf_sequences) {
    std::mt19937_64 rng(options.seed + 1);
    std::shuffle(training.begin(), training.end(), rng);
    training.resize(options.max_crf_sequences);
  }
  result.crf_training_sequences = training.size();
  if (!training.empty()) {
    result.crf = train_crf(training, options.crf);
  } else {
    warn("no accepted candidate could be labeled into its query; CRF stage skipped");
  }

  // CRF pass, gating, and per-query combination.
  for (std::size_t i = 0; i < logs.size(); ++i) {
    auto& mq = result.queries[i];
    if (result.crf) {
      if (auto c = crf_query(*result.crf, logs[i], options.decode_titles)) {
        mq.candidates.push_back(std::move(*c));
      }
    }
    for (auto& c : mq.candidates) c.accepted = cache.accept(c.text);

    for (CandidateSource source : options.priority) {
      if (source == CandidateSource::kAlign) {
        std::vector<ConceptCandidate> flat;
        for (const auto& per_title : aligned[i]) {
          for (const auto& c : per_title) {
            if (cache.accept(c.text)) flat.push_back(c);
          }
        }
        if (auto best = select_final_candidate(flat)) {
          best->accepted = true;
          best->provenance = mq.query_id;
          mq.chosen = std::move(best);
        }
      } else {
        for (const auto& c : mq.candidates) {
          if (c.source == source && c.accepted.value_or(false)) {
            mq.chosen = c;
            break;
          }
        }
      }
      if (mq.chosen) break;
    }
    if (mq.chosen) result.concepts.insert(mq.chosen->text);
  }
  return result;
}

}  // namespace conceptmine
