#include "conceptmine/discriminator.hpp"

#include "conceptmine/optimize.hpp"
#include "conceptmine/text.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <set>
#include <stdexcept>

namespace conceptmine {

namespace {

double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  double e = std::exp(z);
  return e / (1.0 + e);
}

}  // namespace

QueryLogIndex::QueryLogIndex(std::span<const QueryLogEntry> logs, TopicOf topic_of,
                             std::size_t num_topics)
    : logs_(logs), topic_of_(std::move(topic_of)), num_topics_(num_topics) {
  for (std::size_t i = 0; i < logs_.size(); ++i) by_text_[logs_[i].query.text].push_back(i);
}

ConceptFeatures QueryLogIndex::featurize(std::string_view concept_text) const {
  ConceptFeatures f;
  f.topic_dist.assign(num_topics_, 0.0);
  std::string key = normalize_text(concept_text);
  for (const auto& term : split_whitespace(ascii_lower(key))) f.bow[term] += 1.0;

  auto it = by_text_.find(key);
  if (it == by_text_.end()) return f;
  f.appeared_as_query = true;
  double topical = 0.0;
  for (std::size_t idx : it->second) {
    for (const auto& title : logs_[idx].titles) {
      f.search_count += title.click_count;
      if (!topic_of_) continue;
      auto topic = topic_of_(title);
      if (topic && *topic < num_topics_) {
        f.topic_dist[*topic] += 1.0;
        topical += 1.0;
      }
    }
  }
  if (topical > 0) {
    for (double& p : f.topic_dist) p /= topical;
  }
  return f;
}

ConceptFeatures featurize_concept(const ConceptCandidate& c, std::span<const QueryLogEntry> logs,
                                  const TopicOf& topic_of, std::size_t num_topics) {
  return QueryLogIndex(logs, topic_of, num_topics).featurize(c.text);
}

std::map<std::size_t, double> QualityModel::encode(const ConceptFeatures& f) const {
  std::map<std::size_t, double> x;
  auto put = [&](const std::string& name, double v) {
    auto it = index_.find(name);
    if (it != index_.end() && v != 0.0) x[it->second] += v;
  };
  put("appeared_as_query", f.appeared_as_query ? 1.0 : 0.0);
  put("log_search_count", std::log1p(static_cast<double>(std::max(0LL, f.search_count))));
  for (std::size_t k = 0; k < f.topic_dist.size(); ++k) put("topic:" + std::to_string(k), f.topic_dist[k]);
  for (const auto& [term, tf] : f.bow) put("bow:" + term, tf);
  return x;
}

double QualityModel::logit(const std::map<std::size_t, double>& x) const {
  double z = bias_;
  for (const auto& [i, v] : x) z += weights_[i] * v;
  for (std::size_t s = 0; s < stumps_.size(); ++s) {
    const auto& st = stumps_[s];
    auto it = x.find(st.feature);
    double v = it == x.end() ? 0.0 : it->second;
    if (v > st.split) z += weights_[names_.size() + s];
  }
  return z;
}

double QualityModel::score(const ConceptFeatures& f) const { return sigmoid(logit(encode(f))); }

void QualityModel::set_threshold(double t) {
  if (!(t > 0.0 && t < 1.0)) throw std::invalid_argument("threshold must lie in (0,1)");
  threshold_ = t;
}

class QualityTrainer {
 public:
  using Sample = std::pair<ConceptFeatures, bool>;

  static QualityModel fit(std::span<const Sample> data, const QualityOptions& opt) {
    QualityModel m;
    m.threshold_ = opt.threshold;
    // Feature inventory: fixed features first, then topics and terms in sorted order.
    std::set<std::string> names;
    names.insert("appeared_as_query");
    names.insert("log_search_count");
    for (const auto& [f, y] : data) {
      for (std::size_t k = 0; k < f.topic_dist.size(); ++k) names.insert("topic:" + std::to_string(k));
      for (const auto& [term, tf] : f.bow) names.insert("bow:" + term);
    }
    for (const auto& n : names) {
      m.index_.emplace(n, m.names_.size());
      m.names_.push_back(n);
    }
    const std::size_t d = m.names_.size();
    std::vector<std::map<std::size_t, double>> xs;
    std::vector<double> ys;
    for (const auto& [f, y] : data) {
      xs.push_back(m.encode(f));
      ys.push_back(y ? 1.0 : 0.0);
    }
    const double n_pos = std::accumulate(ys.begin(), ys.end(), 0.0);
    const double n_all = static_cast<double>(ys.size());
    std::vector<double> sw(ys.size(), 1.0);
    if (opt.class_balanced && n_pos > 0 && n_pos < n_all) {
      for (std::size_t n = 0; n < ys.size(); ++n) {
        sw[n] = n_all / (2.0 * (ys[n] > 0.5 ? n_pos : n_all - n_pos));
      }
    }
    if (opt.use_booster) m.stumps_ = boost(xs, ys, d, opt);

    // Dense design rows: engineered features then stump indicators.
    const std::size_t width = d + m.stumps_.size();
    std::vector<std::vector<std::pair<std::size_t, double>>> rows(xs.size());
    for (std::size_t n = 0; n < xs.size(); ++n) {
      for (const auto& [i, v] : xs[n]) rows[n].emplace_back(i, v);
      for (std::size_t s = 0; s < m.stumps_.size(); ++s) {
        auto it = xs[n].find(m.stumps_[s].feature);
        double v = it == xs[n].end() ? 0.0 : it->second;
        if (v > m.stumps_[s].split) rows[n].emplace_back(d + s, 1.0);
      }
    }
    // Parameter layout: [bias, weights...]; the bias is not penalized.
    Objective obj = [&](std::span<const double> w, std::span<double> grad) {
      std::fill(grad.begin(), grad.end(), 0.0);
      double ll = 0.0;
      for (std::size_t n = 0; n < rows.size(); ++n) {
        double z = w[0];
        for (const auto& [i, v] : rows[n]) z += w[1 + i] * v;
        double p = sigmoid(z);
        // log-likelihood in a form that stays finite for large |z|
        ll += sw[n] * (ys[n] * z - (z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z))));
        double r = sw[n] * (ys[n] - p);
        grad[0] += r;
        for (const auto& [i, v] : rows[n]) grad[1 + i] += r * v;
      }
      for (std::size_t i = 1; i < w.size(); ++i) {
        ll -= 0.5 * opt.l2 * w[i] * w[i];
        grad[i] -= opt.l2 * w[i];
      }
      return ll;
    };
    std::vector<double> w(width + 1, 0.0);
    AscentOptions ao;
    ao.max_iters = opt.max_iters;
    ao.tol = 1e-6;
    ao.initial_step = 1.0 / static_cast<double>(rows.size());
    maximize(obj, w, ao);
    m.bias_ = w[0];
    m.weights_.assign(w.begin() + 1, w.end());

    std::size_t correct = 0;
    for (std::size_t n = 0; n < xs.size(); ++n) {
      bool pred = sigmoid(m.logit(xs[n])) >= m.threshold_;
      correct += pred == (ys[n] > 0.5);
    }
    m.training_accuracy_ = static_cast<double>(correct) / static_cast<double>(xs.size());
    return m;
  }

 private:
  // Gradient boosting with depth-1 trees on the logistic loss.
  static std::vector<QualityModel::Stump> boost(const std::vector<std::map<std::size_t, double>>& xs,
                                                const std::vector<double>& ys, std::size_t d,
                                                const QualityOptions& opt) {
    const std::size_t n = xs.size();
    double mean = std::accumulate(ys.begin(), ys.end(), 0.0) / static_cast<double>(n);
    std::vector<double> F(n, std::log(mean / (1.0 - mean)));

    // Column values per feature (implicit zeros included).
    std::vector<std::vector<double>> columns(d, std::vector<double>(n, 0.0));
    for (std::size_t r = 0; r < n; ++r) {
      for (const auto& [i, v] : xs[r]) columns[i][r] = v;
    }

    std::vector<QualityModel::Stump> stumps;
    std::vector<double> resid(n), hess(n);
    std::vector<std::size_t> order(n);
    for (int round = 0; round < opt.num_stumps; ++round) {
      double total_r = 0.0;
      for (std::size_t r = 0; r < n; ++r) {
        double p = sigmoid(F[r]);
        resid[r] = ys[r] - p;
        hess[r] = p * (1.0 - p);
        total_r += resid[r];
      }
      double best_gain = 1e-12;
      std::optional<QualityModel::Stump> best;
      for (std::size_t j = 0; j < d; ++j) {
        const auto& col = columns[j];
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return col[a] < col[b]; });
        double left_sum = 0.0;
        for (std::size_t k = 0; k + 1 < n; ++k) {
          left_sum += resid[order[k]];
          double here = col[order[k]];
          double next = col[order[k + 1]];
          if (here == next) continue;
          double nl = static_cast<double>(k + 1);
          double nr = static_cast<double>(n - k - 1);
          double right_sum = total_r - left_sum;
          // Squared-error reduction of a two-leaf fit to the residuals.
          double gain = left_sum * left_sum / nl + right_sum * right_sum / nr -
                        total_r * total_r / static_cast<double>(n);
          if (gain > best_gain + 1e-12) {
            best_gain = gain;
            best = QualityModel::Stump{j, 0.5 * (here + next), 0.0, 0.0};
          }
        }
      }
      if (!best) break;
      double lr = 0.0, lh = 0.0, rr = 0.0, rh = 0.0;
      for (std::size_t r = 0; r < n; ++r) {
        if (columns[best->feature][r] <= best->split) {
          lr += resid[r];
          lh += hess[r];
        } else {
          rr += resid[r];
          rh += hess[r];
        }
      }
      best->left = opt.learning_rate * lr / (lh + 1e-6);
      best->right = opt.learning_rate * rr / (rh + 1e-6);
      for (std::size_t r = 0; r < n; ++r) {
        F[r] += columns[best->feature][r] <= best->split ? best->left : best->right;
      }
      stumps.push_back(*best);
    }
    return stumps;
  }
};

QualityModel train_quality(std::span<const std::pair<ConceptFeatures, bool>> data,
                           const QualityOptions& options) {
  std::size_t positives = 0;
  for (const auto& [f, y] : data) positives += y;
  if (positives == 0 || positives == data.size()) {
    throw std::invalid_argument("train_quality: both positive and negative samples are required");
  }
  if (!(options.threshold > 0.0 && options.threshold < 1.0)) {
    throw std::invalid_argument("threshold must lie in (0,1)");
  }

  // Held-out estimate from a seeded split; the returned model uses all data.
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(options.seed);
  std::shuffle(order.begin(), order.end(), rng);
  auto n_hold = static_cast<std::size_t>(options.holdout_fraction * static_cast<double>(data.size()));

  double holdout = -1.0;
  if (n_hold >= 1 && data.size() - n_hold >= 2) {
    std::vector<std::pair<ConceptFeatures, bool>> train, test;
    for (std::size_t k = 0; k < order.size(); ++k) {
      (k < n_hold ? test : train).push_back(data[order[k]]);
    }
    std::size_t train_pos = 0;
    for (const auto& [f, y] : train) train_pos += y;
    if (train_pos > 0 && train_pos < train.size()) {
      QualityModel probe = QualityTrainer::fit(train, options);
      std::size_t correct = 0;
      for (const auto& [f, y] : test) correct += (probe.score(f) >= probe.threshold()) == y;
      holdout = static_cast<double>(correct) / static_cast<double>(test.size());
    }
  }
  QualityModel model = QualityTrainer::fit(data, options);
  model.holdout_accuracy_ = holdout >= 0 ? holdout : model.training_accuracy_;
  return model;
}

ConceptCandidate gate(const QualityModel& model, ConceptCandidate c, const ConceptFeatures& f) {
  c.accepted = model.score(f) >= model.threshold();
  return c;
}

void QualityModel::save(std::ostream& out) const {
  nlohmann::json j;
  j["format"] = "conceptmine-gate/1";
  j["features"] = names_;
  j["weights"] = weights_;
  j["bias"] = bias_;
  j["threshold"] = threshold_;
  j["holdout_accuracy"] = holdout_accuracy_;
  j["training_accuracy"] = training_accuracy_;
  auto stumps = nlohmann::json::array();
  for (const auto& s : stumps_) {
    stumps.push_back({{"feature", s.feature}, {"split", s.split}, {"left", s.left}, {"right", s.right}});
  }
  j["stumps"] = stumps;
  out << j.dump(1) << '\n';
}

QualityModel QualityModel::load(std::istream& in) {
  nlohmann::json j = nlohmann::json::parse(in);
  if (j.value("format", "") != "conceptmine-gate/1") {
    throw std::runtime_error("unsupported gate model format");
  }
  QualityModel m;
  m.names_ = j.at("features").get<std::vector<std::string>>();
  for (std::size_t i = 0; i < m.names_.size(); ++i) m.index_.emplace(m.names_[i], i);
  m.weights_ = j.at("weights").get<std::vector<double>>();
  m.bias_ = j.at("bias").get<double>();
  m.threshold_ = j.at("threshold").get<double>();
  m.holdout_accuracy_ = j.value("holdout_accuracy", 0.0);
  m.training_accuracy_ = j.value("training_accuracy", 0.0);
  for (const auto& s : j.at("stumps")) {
    m.stumps_.push_back({s.at("feature").get<std::size_t>(), s.at("split").get<double>(),
                         s.at("left").get<double>(), s.at("right").get<double>()});
  }
  if (m.weights_.size() != m.names_.size() + m.stumps_.size()) {
    throw std::runtime_error("gate model weight count mismatch");
  }
  return m;
}

void QualityModel::save_file(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write gate model: " + path);
  save(out);
}

QualityModel QualityModel::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open gate model: " + path);
  return load(in);
}

std::vector<std::pair<std::string, bool>> read_labeled_concepts(std::istream& in,
                                                                std::vector<RecordError>* errors) {
  std::vector<std::pair<std::string, bool>> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    auto cells = split(line, '\t');
    std::string label = cells.size() == 2 ? trim(cells[1]) : "";
    if (cells.size() != 2 || (label != "0" && label != "1") || trim(cells[0]).empty()) {
      if (errors) errors->push_back({line_no, "expected `concept \\t 0|1`"});
      continue;
    }
    out.emplace_back(normalize_text(cells[0]), label == "1");
  }
  return out;
}

}  // namespace conceptmine
