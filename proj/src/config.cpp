#include "conceptmine/config.hpp"

#include <json.hpp>

#include <fstream>
#include <set>
#include <stdexcept>

namespace conceptmine {

namespace {

using nlohmann::json;

void check_keys(const json& obj, const std::string& where, const std::set<std::string>& allowed) {
  if (!obj.is_object()) throw std::runtime_error("config: '" + where + "' must be an object");
  for (const auto& [k, v] : obj.items()) {
    if (!allowed.count(k)) throw std::runtime_error("config: unknown key '" + where + "." + k + "'");
  }
}

template <class T>
void take(const json& obj, const char* key, T& out) {
  if (obj.contains(key)) out = obj.at(key).get<T>();
}

}  // namespace

Config read_config(std::istream& in) {
  Config c;
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("config: ") + e.what());
  }
  try {
    check_keys(j, "", {"logs", "bootstrap", "align", "crf", "gate", "tagger", "taxonomy",
                       "rewrite_budget", "seed", "threads"});
    if (j.contains("logs")) {
      const auto& o = j["logs"];
      check_keys(o, "logs", {"min_clicks", "window_days", "today"});
      take(o, "min_clicks", c.logs.min_clicks);
      take(o, "window_days", c.logs.window_days);
      if (o.contains("today")) {
        auto d = parse_date(o["today"].get<std::string>());
        if (!d) throw std::runtime_error("config: logs.today is not YYYY-MM-DD");
        c.logs.today = *d;
      }
    }
    if (j.contains("bootstrap")) {
      const auto& o = j["bootstrap"];
      check_keys(o, "bootstrap", {"max_iters", "alpha", "beta", "delta"});
      take(o, "max_iters", c.bootstrap.max_iters);
      take(o, "alpha", c.bootstrap.alpha);
      take(o, "beta", c.bootstrap.beta);
      take(o, "delta", c.bootstrap.delta);
    }
    if (j.contains("align")) {
      const auto& o = j["align"];
      check_keys(o, "align", {"min_len", "max_span"});
      take(o, "min_len", c.align.min_len);
      take(o, "max_span", c.align.max_span);
    }
    if (j.contains("crf")) {
      const auto& o = j["crf"];
      check_keys(o, "crf", {"l2", "max_epochs", "tol"});
      take(o, "l2", c.crf.l2);
      take(o, "max_epochs", c.crf.max_epochs);
      take(o, "tol", c.crf.tol);
    }
    if (j.contains("gate")) {
      const auto& o = j["gate"];
      check_keys(o, "gate", {"l2", "max_iters", "use_booster", "num_stumps", "learning_rate",
                             "threshold", "class_balanced", "holdout_fraction"});
      take(o, "l2", c.gate.l2);
      take(o, "max_iters", c.gate.max_iters);
      take(o, "use_booster", c.gate.use_booster);
      take(o, "num_stumps", c.gate.num_stumps);
      take(o, "learning_rate", c.gate.learning_rate);
      take(o, "threshold", c.gate.threshold);
      take(o, "class_balanced", c.gate.class_balanced);
      take(o, "holdout_fraction", c.gate.holdout_fraction);
    }
    if (j.contains("tagger")) {
      const auto& o = j["tagger"];
      check_keys(o, "tagger", {"k", "delta_w", "damping", "delta_u", "top_m", "n_titles"});
      take(o, "k", c.tagger.k);
      take(o, "delta_w", c.tagger.delta_w);
      take(o, "damping", c.tagger.damping);
      take(o, "delta_u", c.tagger.delta_u);
      take(o, "top_m", c.tagger.top_m);
      take(o, "n_titles", c.tagger.n_titles);
    }
    if (j.contains("taxonomy")) {
      const auto& o = j["taxonomy"];
      check_keys(o, "taxonomy", {"instance_threshold", "delta_t"});
      take(o, "instance_threshold", c.taxonomy.instance_threshold);
      take(o, "delta_t", c.taxonomy.delta_t);
    }
    take(j, "rewrite_budget", c.rewrite_budget);
    take(j, "seed", c.seed);
    take(j, "threads", c.threads);
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("config: ") + e.what());
  }
  c.gate.seed = c.seed;
  c.taxonomy.tagger = c.tagger;
  return c;
}

Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config '" + path + "'");
  return read_config(in);
}

}  // namespace conceptmine
