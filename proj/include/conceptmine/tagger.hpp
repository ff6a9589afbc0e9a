#pragma once

#include "conceptmine/cooccurrence.hpp"
#include "conceptmine/corpus.hpp"
#include "conceptmine/embedding.hpp"
#include "conceptmine/keyterms.hpp"
#include "conceptmine/taxonomy.hpp"
#include "conceptmine/tfidf.hpp"

#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace conceptmine {

enum class TagMethod { kInference, kMatching };
std::string_view to_string(TagMethod m);
std::optional<TagMethod> parse_tag_method(std::string_view s);

struct Tag {
  std::string concept_text;
  double score = 0.0;
  TagMethod method = TagMethod::kInference;
};

struct TaggedDocument {
  std::string doc_id;
  std::vector<Tag> tags;
  std::optional<std::string> topic;  // carried along for topic-concept linking
};

using ScoredConcepts = std::vector<std::pair<std::string, double>>;

// p(c|e) over the given context words: sum_j p(c|x_j) p(x_j|e).
double p_concept_given_instance(const std::string& concept_text, const std::string& instance,
                                const CooccurrenceStats& stats, const ConceptIndex& index,
                                std::span<const std::string> context);

// Context words per key instance.
using InstanceContexts = std::map<std::string, std::vector<std::string>>;
InstanceContexts instance_contexts(const Document& d, const KeyInstanceSet& keys,
                                   const std::set<std::string>& stopwords = default_stopwords());

// Every concept with p(c|d) > 0, sorted by probability descending then text.
ScoredConcepts concept_posterior(const KeyInstanceSet& keys, const InstanceContexts& contexts,
                                 const CooccurrenceStats& stats, const ConceptIndex& index);

// p(c|d) = sum_i p(c|e_i) p(e_i|d); the top_m concepts.
ScoredConcepts tag_by_inference(const Document& d, const KeyInstanceSet& keys,
                                const CooccurrenceStats& stats, const ConceptIndex& index,
                                std::size_t top_m = 3);

struct EnrichedConcept {
  std::string concept_text;
  std::vector<std::pair<std::string, long long>> titles;  // clicks descending
  SparseVector vector;
};

// Titles clicked for queries containing the concept, summed per title, top
// n_titles by clicks (ties by text). The vector is TF-IDF over the concept
// tokens plus the title tokens.
EnrichedConcept enrich_concept(const std::string& concept_text,
                               std::span<const QueryLogEntry> logs, std::size_t n_titles,
                               const DocumentFrequency& df);
std::map<std::string, EnrichedConcept> enrich_concepts(const std::set<std::string>& concepts,
                                                       std::span<const QueryLogEntry> logs,
                                                       std::size_t n_titles,
                                                       const DocumentFrequency& df);

std::vector<std::string> title_terms(const std::vector<Token>& title);

// Candidates are concepts with an isA edge to a key instance; accepted when
// cosine(enriched concept, title TF-IDF) > delta_u.
ScoredConcepts tag_by_matching(const Document& d, const KeyInstanceSet& keys,
                               const TaxonomyGraph& taxonomy,
                               const std::map<std::string, EnrichedConcept>& enriched,
                               double delta_u, const DocumentFrequency& df);

struct TaggerOptions {
  std::size_t k = 10;
  double delta_w = 0.5;
  double damping = 0.85;
  double delta_u = 0.58;
  std::size_t top_m = 3;
  std::size_t n_titles = 5;
};

// Everything the online tagger reads. Immutable once built, so one instance
// can serve concurrent requests.
struct TaggerModels {
  std::shared_ptr<const EmbeddingProvider> embeddings;
  ConceptIndex index;
  CooccurrenceStats stats;
  DocumentFrequency df;
  TaxonomyGraph taxonomy;
  std::map<std::string, EnrichedConcept> enriched;
  std::set<std::string> instance_vocabulary;
  TaggerOptions options;
  std::string version = "unversioned";
};

// Matching for key instances with isA parents, inference for the rest. A
// concept found by both keeps the matching tag.
TaggedDocument tag_document(const Document& d, const TaggerModels& models);

// `doc_id \t concept \t score \t method`
void write_tagged(std::ostream& out, const std::vector<TaggedDocument>& docs);

}  // namespace conceptmine
