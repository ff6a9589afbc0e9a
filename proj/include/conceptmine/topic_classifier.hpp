#pragma once

#include "conceptmine/corpus.hpp"
#include "conceptmine/embedding.hpp"
#include "conceptmine/optimize.hpp"

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace conceptmine {

// [max-pool(title) ; max-pool(author) ; mean-pool(content)]. Parts with no
// in-vocabulary token are zero. `any_known` reports whether any token hit.
std::vector<double> pool_document(const Document& d, const EmbeddingProvider& emb,
                                  bool* any_known = nullptr);

// Softmax regression over pooled document embeddings.
class TopicClassifier {
 public:
  TopicClassifier() = default;
  TopicClassifier(std::vector<std::string> topics, std::size_t input_dim);

  const std::vector<std::string>& topics() const { return topics_; }
  std::size_t input_dim() const { return input_dim_; }
  std::vector<double>& weights() { return w_; }
  const std::vector<double>& weights() const { return w_; }

  std::vector<double> predict(std::span<const double> features) const;

  void save(std::ostream& out) const;
  static TopicClassifier load(std::istream& in);

 private:
  std::vector<std::string> topics_;
  std::size_t input_dim_ = 0;
  std::vector<double> w_;  // topics x (input_dim + 1), bias last
};

// Probability vector over the classifier's topics, summing to 1. A document
// with no known token gets the uniform distribution and a warning.
std::vector<double> classify_topic(const TopicClassifier& clf, const Document& d,
                                   const EmbeddingProvider& emb);
std::string top_topic(const TopicClassifier& clf, std::span<const double> probs);

struct TopicTrainOptions {
  double l2 = 1e-3;
  AscentOptions ascent{300, 1e-5, 1.0, 1e4, 50};
};

// Documents without a topic label, or with one outside `topics`, are ignored.
TopicClassifier train_topic_classifier(std::span<const Document> docs,
                                       const EmbeddingProvider& emb,
                                       std::vector<std::string> topics,
                                       const TopicTrainOptions& options = {});

}  // namespace conceptmine
