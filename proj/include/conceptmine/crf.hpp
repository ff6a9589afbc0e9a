#pragma once

#include "conceptmine/optimize.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace conceptmine {

// Active feature ids at each position of one sequence.
struct FeatureSequence {
  std::vector<std::vector<std::size_t>> positions;
  std::size_t size() const { return positions.size(); }
};

struct CrfExample {
  FeatureSequence x;
  std::vector<int> y;
};

// Linear-chain CRF over a fixed label set. Weights are one flat vector:
// emissions (feature-major, num_labels per feature) followed by the
// (num_labels + 1) x num_labels transition table whose last row holds the
// start transitions. Disallowed transitions score -inf in every routine.
class LinearChainCrf {
 public:
  LinearChainCrf() = default;
  LinearChainCrf(std::size_t num_labels, std::size_t num_features);

  std::size_t num_labels() const { return num_labels_; }
  std::size_t num_features() const { return num_features_; }
  std::size_t start_row() const { return num_labels_; }

  std::vector<double>& weights() { return weights_; }
  const std::vector<double>& weights() const { return weights_; }

  double& emission(std::size_t feature, std::size_t label) {
    return weights_[feature * num_labels_ + label];
  }
  double emission(std::size_t feature, std::size_t label) const {
    return weights_[feature * num_labels_ + label];
  }
  std::size_t transition_index(std::size_t prev, std::size_t label) const {
    return num_features_ * num_labels_ + prev * num_labels_ + label;
  }
  double transition(std::size_t prev, std::size_t label) const {
    return weights_[transition_index(prev, label)];
  }

  // prev == start_row() addresses the start transition.
  void set_allowed(std::size_t prev, std::size_t label, bool allowed);
  bool allowed(std::size_t prev, std::size_t label) const {
    return allowed_[prev * num_labels_ + label];
  }

  double score(const FeatureSequence& x, std::span<const int> y) const;
  double log_partition(const FeatureSequence& x) const;
  std::vector<int> viterbi(const FeatureSequence& x, double* best_score = nullptr) const;

  // Penalized conditional log-likelihood sum_n [score - log Z] - l2/2 ||w||^2
  // evaluated at `w`; writes its gradient into `grad`.
  double objective(std::span<const CrfExample> data, double l2, std::span<const double> w,
                   std::span<double> grad) const;

  AscentReport train(std::span<const CrfExample> data, double l2, const AscentOptions& options);

 private:
  // emissions[t * L + y] for the sequence under weights w
  void emission_table(const FeatureSequence& x, std::span<const double> w,
                      std::vector<double>& out) const;

  std::size_t num_labels_ = 0;
  std::size_t num_features_ = 0;
  std::vector<double> weights_;
  std::vector<char> allowed_;
};

double log_sum_exp(std::span<const double> v);

}  // namespace conceptmine
