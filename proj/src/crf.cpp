#include "conceptmine/crf.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace conceptmine {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
}

double log_sum_exp(std::span<const double> v) {
  double m = kNegInf;
  for (double x : v) m = std::max(m, x);
  if (m == kNegInf) return kNegInf;
  double s = 0.0;
  for (double x : v) s += std::exp(x - m);
  return m + std::log(s);
}

LinearChainCrf::LinearChainCrf(std::size_t num_labels, std::size_t num_features)
    : num_labels_(num_labels),
      num_features_(num_features),
      weights_(num_features * num_labels + (num_labels + 1) * num_labels, 0.0),
      allowed_((num_labels + 1) * num_labels, 1) {}

void LinearChainCrf::set_allowed(std::size_t prev, std::size_t label, bool allowed) {
  allowed_[prev * num_labels_ + label] = allowed ? 1 : 0;
}

void LinearChainCrf::emission_table(const FeatureSequence& x, std::span<const double> w,
                                    std::vector<double>& out) const {
  const std::size_t L = num_labels_;
  out.assign(x.size() * L, 0.0);
  for (std::size_t t = 0; t < x.size(); ++t) {
    for (std::size_t f : x.positions[t]) {
      if (f >= num_features_) continue;
      for (std::size_t y = 0; y < L; ++y) out[t * L + y] += w[f * L + y];
    }
  }
}

double LinearChainCrf::score(const FeatureSequence& x, std::span<const int> y) const {
  std::vector<double> emit;
  emission_table(x, weights_, emit);
  double s = 0.0;
  std::size_t prev = start_row();
  for (std::size_t t = 0; t < x.size(); ++t) {
    auto label = static_cast<std::size_t>(y[t]);
    if (!allowed(prev, label)) return kNegInf;
    s += transition(prev, label) + emit[t * num_labels_ + label];
    prev = label;
  }
  return s;
}

double LinearChainCrf::log_partition(const FeatureSequence& x) const {
  if (x.size() == 0) return 0.0;
  const std::size_t L = num_labels_;
  std::vector<double> emit;
  emission_table(x, weights_, emit);
  std::vector<double> alpha(L), next(L), terms(L);
  for (std::size_t y = 0; y < L; ++y) {
    alpha[y] = allowed(start_row(), y) ? transition(start_row(), y) + emit[y] : kNegInf;
  }
  for (std::size_t t = 1; t < x.size(); ++t) {
    for (std::size_t y = 0; y < L; ++y) {
      for (std::size_t p = 0; p < L; ++p) {
        terms[p] = allowed(p, y) ? alpha[p] + transition(p, y) : kNegInf;
      }
      next[y] = log_sum_exp(terms) + emit[t * L + y];
    }
    alpha.swap(next);
  }
  return log_sum_exp(alpha);
}

std::vector<int> LinearChainCrf::viterbi(const FeatureSequence& x, double* best_score) const {
  const std::size_t T = x.size();
  const std::size_t L = num_labels_;
  if (T == 0) {
    if (best_score) *best_score = 0.0;
    return {};
  }
  std::vector<double> emit;
  emission_table(x, weights_, emit);
  std::vector<double> delta(T * L, kNegInf);
  std::vector<std::size_t> back(T * L, 0);
  for (std::size_t y = 0; y < L; ++y) {
    if (allowed(start_row(), y)) delta[y] = transition(start_row(), y) + emit[y];
  }
  for (std::size_t t = 1; t < T; ++t) {
    for (std::size_t y = 0; y < L; ++y) {
      double best = kNegInf;
      std::size_t arg = 0;
      for (std::size_t p = 0; p < L; ++p) {
        if (!allowed(p, y)) continue;
        double s = delta[(t - 1) * L + p] + transition(p, y);
        if (s > best) {
          best = s;
          arg = p;
        }
      }
      delta[t * L + y] = best + emit[t * L + y];
      back[t * L + y] = arg;
    }
  }
  std::size_t arg = 0;
  for (std::size_t y = 1; y < L; ++y) {
    if (delta[(T - 1) * L + y] > delta[(T - 1) * L + arg]) arg = y;
  }
  if (best_score) *best_score = delta[(T - 1) * L + arg];
  std::vector<int> path(T);
  for (std::size_t t = T; t-- > 0;) {
    path[t] = static_cast<int>(arg);
    arg = back[t * L + arg];
  }
  return path;
}

double LinearChainCrf::objective(std::span<const CrfExample> data, double l2,
                                 std::span<const double> w, std::span<double> grad) const {
  const std::size_t L = num_labels_;
  std::fill(grad.begin(), grad.end(), 0.0);
  double total = 0.0;

  std::vector<double> emit, alpha, beta, terms(L);
  auto trans = [&](std::size_t p, std::size_t y) { return w[transition_index(p, y)]; };

  for (const auto& ex : data) {
    const auto& x = ex.x;
    const std::size_t T = x.size();
    if (T == 0) continue;
    emission_table(x, w, emit);

    // Empirical counts.
    std::size_t prev = start_row();
    double gold = 0.0;
    for (std::size_t t = 0; t < T; ++t) {
      auto y = static_cast<std::size_t>(ex.y[t]);
      gold += trans(prev, y) + emit[t * L + y];
      grad[transition_index(prev, y)] += 1.0;
      for (std::size_t f : x.positions[t]) {
        if (f < num_features_) grad[f * L + y] += 1.0;
      }
      prev = y;
    }

    alpha.assign(T * L, kNegInf);
    beta.assign(T * L, kNegInf);
    for (std::size_t y = 0; y < L; ++y) {
      if (allowed(start_row(), y)) alpha[y] = trans(start_row(), y) + emit[y];
    }
    for (std::size_t t = 1; t < T; ++t) {
      for (std::size_t y = 0; y < L; ++y) {
        for (std::size_t p = 0; p < L; ++p) {
          terms[p] = allowed(p, y) ? alpha[(t - 1) * L + p] + trans(p, y) : kNegInf;
        }
        alpha[t * L + y] = log_sum_exp(terms) + emit[t * L + y];
      }
    }
    for (std::size_t y = 0; y < L; ++y) beta[(T - 1) * L + y] = 0.0;
    for (std::size_t t = T - 1; t-- > 0;) {
      for (std::size_t p = 0; p < L; ++p) {
        for (std::size_t y = 0; y < L; ++y) {
          terms[y] = allowed(p, y) ? trans(p, y) + emit[(t + 1) * L + y] + beta[(t + 1) * L + y]
                                   : kNegInf;
        }
        beta[t * L + p] = log_sum_exp(terms);
      }
    }
    double log_z = log_sum_exp(std::span<const double>(alpha).subspan((T - 1) * L, L));
    total += gold - log_z;

    // Expected counts.
    for (std::size_t t = 0; t < T; ++t) {
      for (std::size_t y = 0; y < L; ++y) {
        double a = alpha[t * L + y];
        if (a == kNegInf) continue;
        double marginal = std::exp(a + beta[t * L + y] - log_z);
        for (std::size_t f : x.positions[t]) {
          if (f < num_features_) grad[f * L + y] -= marginal;
        }
        if (t == 0) grad[transition_index(start_row(), y)] -= marginal;
      }
      if (t == 0) continue;
      for (std::size_t p = 0; p < L; ++p) {
        double a = alpha[(t - 1) * L + p];
        if (a == kNegInf) continue;
        for (std::size_t y = 0; y < L; ++y) {
          if (!allowed(p, y)) continue;
          double e = a + trans(p, y) + emit[t * L + y] + beta[t * L + y] - log_z;
          grad[transition_index(p, y)] -= std::exp(e);
        }
      }
    }
  }

  double norm2 = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    norm2 += w[i] * w[i];
    grad[i] -= l2 * w[i];
  }
  return total - 0.5 * l2 * norm2;
}

AscentReport LinearChainCrf::train(std::span<const CrfExample> data, double l2,
                                   const AscentOptions& options) {
  Objective f = [&](std::span<const double> w, std::span<double> grad) {
    return objective(data, l2, w, grad);
  };
  return maximize(f, weights_, options);
}

}  // namespace conceptmine
