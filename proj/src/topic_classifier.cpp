#include "conceptmine/topic_classifier.hpp"

#include "conceptmine/log.hpp"
#include "conceptmine/text.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace conceptmine {

namespace {

bool max_pool(const std::vector<std::string>& words, const EmbeddingProvider& emb,
              std::span<double> out) {
  bool any = false;
  for (const auto& w : words) {
    auto v = emb.vector_of(w);
    if (!v || v->size() != out.size()) continue;
    for (std::size_t i = 0; i < out.size(); ++i) {
      out[i] = any ? std::max(out[i], (*v)[i]) : (*v)[i];
    }
    any = true;
  }
  return any;
}

}  // namespace

std::vector<double> pool_document(const Document& d, const EmbeddingProvider& emb,
                                  bool* any_known) {
  const std::size_t dim = emb.dim();
  std::vector<double> out(3 * dim, 0.0);
  std::span<double> all(out);
  bool any = max_pool(surfaces(d.title), emb, all.subspan(0, dim));
  any |= max_pool(split_whitespace(d.author), emb, all.subspan(dim, dim));
  std::size_t n = 0;
  for (const auto& s : d.sentences) {
    for (const auto& t : s) {
      auto v = emb.vector_of(t.surface);
      if (!v || v->size() != dim) continue;
      for (std::size_t i = 0; i < dim; ++i) out[2 * dim + i] += (*v)[i];
      ++n;
    }
  }
  if (n > 0) {
    for (std::size_t i = 0; i < dim; ++i) out[2 * dim + i] /= static_cast<double>(n);
    any = true;
  }
  if (any_known) *any_known = any;
  return out;
}

TopicClassifier::TopicClassifier(std::vector<std::string> topics, std::size_t input_dim)
    : topics_(std::move(topics)),
      input_dim_(input_dim),
      w_(topics_.size() * (input_dim + 1), 0.0) {}

std::vector<double> TopicClassifier::predict(std::span<const double> x) const {
  const std::size_t k = topics_.size();
  const std::size_t stride = input_dim_ + 1;
  std::vector<double> z(k, 0.0);
  for (std::size_t t = 0; t < k; ++t) {
    const double* row = &w_[t * stride];
    double s = row[input_dim_];
    for (std::size_t i = 0; i < input_dim_ && i < x.size(); ++i) s += row[i] * x[i];
    z[t] = s;
  }
  double m = k ? *std::max_element(z.begin(), z.end()) : 0.0;
  double total = 0.0;
  for (auto& v : z) {
    v = std::exp(v - m);
    total += v;
  }
  for (auto& v : z) v /= total;
  return z;
}

void TopicClassifier::save(std::ostream& out) const {
  out << "conceptmine-topics 1\n" << topics_.size() << ' ' << input_dim_ << '\n';
  for (const auto& t : topics_) out << t << '\n';
  out << std::setprecision(17);
  for (std::size_t i = 0; i < w_.size(); ++i) out << w_[i] << (i + 1 == w_.size() ? '\n' : ' ');
}

TopicClassifier TopicClassifier::load(std::istream& in) {
  std::string header;
  std::getline(in, header);
  if (header != "conceptmine-topics 1") throw std::runtime_error("not a topic classifier file");
  std::size_t k = 0, dim = 0;
  in >> k >> dim;
  std::string line;
  std::getline(in, line);
  std::vector<std::string> topics(k);
  for (auto& t : topics) std::getline(in, t);
  TopicClassifier clf(std::move(topics), dim);
  for (auto& w : clf.w_) {
    if (!(in >> w)) throw std::runtime_error("truncated topic classifier file");
  }
  return clf;
}

std::vector<double> classify_topic(const TopicClassifier& clf, const Document& d,
                                   const EmbeddingProvider& emb) {
  const std::size_t k = clf.topics().size();
  bool any = false;
  auto x = pool_document(d, emb, &any);
  if (!any) {
    warn("document '" + d.id + "' has no known token; topic distribution is uniform");
    return std::vector<double>(k, k ? 1.0 / static_cast<double>(k) : 0.0);
  }
  return clf.predict(x);
}

std::string top_topic(const TopicClassifier& clf, std::span<const double> probs) {
  if (probs.empty()) return {};
  auto it = std::max_element(probs.begin(), probs.end());
  return clf.topics().at(static_cast<std::size_t>(it - probs.begin()));
}

TopicClassifier train_topic_classifier(std::span<const Document> docs,
                                       const EmbeddingProvider& emb,
                                       std::vector<std::string> topics,
                                       const TopicTrainOptions& options) {
  std::map<std::string, std::size_t> topic_id;
  for (std::size_t i = 0; i < topics.size(); ++i) topic_id[topics[i]] = i;
  const std::size_t dim = 3 * emb.dim();
  TopicClassifier clf(std::move(topics), dim);

  std::vector<std::vector<double>> xs;
  std::vector<std::size_t> ys;
  for (const auto& d : docs) {
    if (!d.topic) continue;
    auto it = topic_id.find(*d.topic);
    if (it == topic_id.end()) continue;
    bool any = false;
    auto x = pool_document(d, emb, &any);
    if (!any) continue;
    xs.push_back(std::move(x));
    ys.push_back(it->second);
  }
  if (xs.empty()) return clf;

  const std::size_t k = clf.topics().size();
  const std::size_t stride = dim + 1;
  const double n = static_cast<double>(xs.size());
  Objective obj = [&](std::span<const double> w, std::span<double> grad) {
    std::fill(grad.begin(), grad.end(), 0.0);
    double ll = 0.0;
    std::vector<double> z(k);
    for (std::size_t s = 0; s < xs.size(); ++s) {
      const auto& x = xs[s];
      double m = -std::numeric_limits<double>::infinity();
      for (std::size_t t = 0; t < k; ++t) {
        const double* row = &w[t * stride];
        double v = row[dim];
        for (std::size_t i = 0; i < dim; ++i) v += row[i] * x[i];
        z[t] = v;
        m = std::max(m, v);
      }
      double total = 0.0;
      for (auto v : z) total += std::exp(v - m);
      double log_total = m + std::log(total);
      ll += z[ys[s]] - log_total;
      for (std::size_t t = 0; t < k; ++t) {
        double g = (t == ys[s] ? 1.0 : 0.0) - std::exp(z[t] - log_total);
        double* grow = &grad[t * stride];
        for (std::size_t i = 0; i < dim; ++i) grow[i] += g * x[i];
        grow[dim] += g;
      }
    }
    ll /= n;
    for (auto& g : grad) g /= n;
    for (std::size_t t = 0; t < k; ++t) {
      for (std::size_t i = 0; i < dim; ++i) {
        double wi = w[t * stride + i];
        ll -= 0.5 * options.l2 * wi * wi;
        grad[t * stride + i] -= options.l2 * wi;
      }
    }
    return ll;
  };
  maximize(obj, clf.weights(), options.ascent);
  return clf;
}

}  // namespace conceptmine
