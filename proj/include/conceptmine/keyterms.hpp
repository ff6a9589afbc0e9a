#pragma once

#include "conceptmine/corpus.hpp"
#include "conceptmine/embedding.hpp"

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace conceptmine {

// Per-term inputs to the key instance ranker.
struct TermFeatures {
  double topic_match = 0.0;        // term topic equals the document topic
  double in_title = 0.0;           // term occurs in the title
  double title_has_topic = 0.0;    // title mentions the term's topic
  double frequency_share = 0.0;    // count / total count of all candidate terms
  double sentence_coverage = 0.0;  // fraction of content sentences containing the term
};

struct TermScore {
  std::string term;
  double base_score = 0.0;
  std::optional<double> textrank_score;  // set once the term enters the graph stage
  TermFeatures features;
  std::size_t count = 0;  // occurrences in title and content
};

class TermRanker {
 public:
  virtual ~TermRanker() = default;
  virtual double rank(const TermFeatures& f) const = 0;
};

// Fixed non-negative weights, so a term that dominates another feature-wise
// never ranks below it.
class LinearTermRanker : public TermRanker {
 public:
  struct Weights {
    double topic_match = 1.0;
    double in_title = 1.5;
    double title_has_topic = 0.5;
    double frequency_share = 2.0;
    double sentence_coverage = 1.0;
  };
  LinearTermRanker() = default;
  explicit LinearTermRanker(Weights w) : w_(w) {}
  double rank(const TermFeatures& f) const override;

 private:
  Weights w_;
};

struct TermSpan {
  std::size_t start = 0;
  std::size_t length = 0;
  std::string text;
};

// Vocabulary phrases matched longest-first left to right, as written or
// ASCII-lowercased, plus noun tokens not covered by a phrase match.
std::vector<TermSpan> candidate_spans(const std::vector<Token>& tokens,
                                      const std::set<std::string>* vocabulary,
                                      std::size_t max_phrase_tokens);
std::size_t max_phrase_tokens(const std::set<std::string>* vocabulary);

struct KeytermContext {
  // Known instance strings (possibly multi-word), matched longest first.
  const std::set<std::string>* instance_vocabulary = nullptr;
  std::function<std::optional<std::string>(std::string_view term)> term_topic;
  std::optional<std::string> document_topic;
};

// Candidates are noun tokens plus vocabulary instances found in the text.
// Sorted by score descending, then term ascending.
std::vector<TermScore> score_terms(const Document& d, const KeytermContext& ctx = {},
                                   const TermRanker& ranker = LinearTermRanker());

struct TextRankResult {
  std::vector<double> scores;     // raw, before normalization
  std::vector<double> l1_deltas;  // ||s_t - s_{t-1}||_1 per iteration
  int iterations = 0;
};

// Weighted PageRank on a symmetric non-negative weight matrix:
// s_i <- (1-d) + d * sum_j w_ji / out_j * s_j, starting from all ones, until
// the largest per-node change is below eps.
TextRankResult textrank(const std::vector<std::vector<double>>& weights, double damping,
                        double eps, int max_iters = 10000);

// Ranks the k best terms by base score on a cosine-similarity graph
// (negative similarities and OOV terms contribute zero weight) and min-max
// normalizes the result to [0, 1].
std::vector<TermScore> rerank_textrank(std::vector<TermScore> top_terms,
                                       const EmbeddingProvider& emb, std::size_t k = 10,
                                       double damping = 0.85, double eps = 1e-6);

struct KeyInstanceSet {
  std::string doc_id;
  std::vector<std::pair<std::string, double>> instances;  // weight p(e|d)
};

// Keeps terms with textrank_score strictly above delta_w and weights them by
// their in-document counts.
KeyInstanceSet select_key_instances(std::string doc_id, const std::vector<TermScore>& reranked,
                                    double delta_w);

KeyInstanceSet extract_key_instances(const Document& d, const EmbeddingProvider& emb,
                                     std::size_t k = 10, double delta_w = 0.5,
                                     const KeytermContext& ctx = {});

}  // namespace conceptmine
