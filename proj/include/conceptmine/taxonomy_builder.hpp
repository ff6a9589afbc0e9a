#pragma once

#include "conceptmine/tagger.hpp"
#include "conceptmine/taxonomy.hpp"
#include "conceptmine/tokenizer.hpp"
#include "conceptmine/topic_classifier.hpp"

#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

namespace conceptmine {

// n^c_p / n^c over tagged documents carrying a topic, for every topic seen.
std::vector<std::pair<std::string, double>> topic_distribution(
    const std::string& concept_text, std::span<const TaggedDocument> docs);

// Topics with p(p|c) strictly above delta_t. No documents -> empty, warning.
std::vector<std::pair<std::string, double>> link_topic_concept(
    const std::string& concept_text, std::span<const TaggedDocument> docs, double delta_t);

// Builds the online tagger's indexes from the logs, the document corpus and
// a taxonomy. IDF comes from document titles and distinct clicked titles.
TaggerModels make_tagger_models(std::span<const QueryLogEntry> logs,
                                std::span<const Document> docs,
                                const std::set<std::string>& concepts, TaxonomyGraph taxonomy,
                                std::shared_ptr<const EmbeddingProvider> embeddings,
                                const TaggerOptions& options = {});

struct TaxonomyBuildOptions {
  double instance_threshold = 0.05;
  double delta_t = 0.3;
  TaggerOptions tagger;
};

struct TaxonomyBuildInput {
  std::span<const QueryLogEntry> logs;
  std::span<const Document> documents;
  std::set<std::string> concepts;
  std::vector<std::string> topics;
  const Tokenizer* tokenizer = nullptr;
  std::shared_ptr<const EmbeddingProvider> embeddings;
  // Used for documents without a gold topic; those stay unlabeled otherwise.
  const TopicClassifier* classifier = nullptr;
  std::vector<std::pair<std::string, std::string>> external_pairs;
};

struct TaxonomyBuild {
  TaxonomyGraph graph;
  std::vector<TaggedDocument> tagged;
  std::shared_ptr<const TaggerModels> models;  // built against the final graph
};

// Concept -> instance discovery, external pairs, document tagging, then
// topic -> concept linking.
TaxonomyBuild build_taxonomy(const TaxonomyBuildInput& input,
                             const TaxonomyBuildOptions& options = {});

}  // namespace conceptmine
