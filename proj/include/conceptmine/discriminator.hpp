#pragma once

#include "conceptmine/corpus.hpp"

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace conceptmine {

struct ConceptFeatures {
  bool appeared_as_query = false;
  long long search_count = 0;
  std::map<std::string, double> bow;  // term frequency of the lowercased concept tokens
  std::vector<double> topic_dist;     // sums to 1 when any clicked title has a topic, else zeros
};

// Topic index of a clicked document, if known.
using TopicOf = std::function<std::optional<std::size_t>(const ClickedTitle&)>;

// Lookup structure over the logs so featurizing many candidates does not
// rescan every entry.
class QueryLogIndex {
 public:
  QueryLogIndex(std::span<const QueryLogEntry> logs, TopicOf topic_of, std::size_t num_topics);

  ConceptFeatures featurize(std::string_view concept_text) const;
  std::size_t num_topics() const { return num_topics_; }

 private:
  std::span<const QueryLogEntry> logs_;
  TopicOf topic_of_;
  std::size_t num_topics_;
  std::unordered_map<std::string, std::vector<std::size_t>> by_text_;
};

ConceptFeatures featurize_concept(const ConceptCandidate& c, std::span<const QueryLogEntry> logs,
                                  const TopicOf& topic_of, std::size_t num_topics);

struct QualityOptions {
  double l2 = 0.1;
  int max_iters = 500;
  bool use_booster = true;
  int num_stumps = 16;
  double learning_rate = 0.5;
  double threshold = 0.5;
  // Reweight samples so both classes carry equal total weight.
  bool class_balanced = true;
  double holdout_fraction = 0.2;
  std::uint64_t seed = 7;
};

// Stacked classifier: an optional additive-stumps booster whose leaf
// indicators are appended to the engineered features, then an L2 logistic
// regression over everything.
class QualityModel {
 public:
  struct Stump {
    std::size_t feature = 0;
    double split = 0.0;  // x <= split goes left
    double left = 0.0;
    double right = 0.0;
  };

  double score(const ConceptFeatures& f) const;
  double threshold() const { return threshold_; }
  void set_threshold(double t);
  double holdout_accuracy() const { return holdout_accuracy_; }
  double training_accuracy() const { return training_accuracy_; }
  const std::vector<Stump>& stumps() const { return stumps_; }

  void save(std::ostream& out) const;
  static QualityModel load(std::istream& in);
  void save_file(const std::string& path) const;
  static QualityModel load_file(const std::string& path);

 private:
  friend QualityModel train_quality(std::span<const std::pair<ConceptFeatures, bool>>,
                                    const QualityOptions&);
  friend class QualityTrainer;

  std::map<std::size_t, double> encode(const ConceptFeatures& f) const;
  double logit(const std::map<std::size_t, double>& x) const;

  std::vector<std::string> names_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<Stump> stumps_;
  std::vector<double> weights_;  // engineered features then one per stump
  double bias_ = 0.0;
  double threshold_ = 0.5;
  double holdout_accuracy_ = 0.0;
  double training_accuracy_ = 0.0;
};

// Throws std::invalid_argument unless both classes are present.
QualityModel train_quality(std::span<const std::pair<ConceptFeatures, bool>> data,
                           const QualityOptions& options = {});

// Sets `accepted` to score >= threshold.
ConceptCandidate gate(const QualityModel& model, ConceptCandidate c, const ConceptFeatures& f);

// `concept_text \t 0|1`
std::vector<std::pair<std::string, bool>> read_labeled_concepts(
    std::istream& in, std::vector<RecordError>* errors = nullptr);

}  // namespace conceptmine
