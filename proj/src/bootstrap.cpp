#include "conceptmine/bootstrap.hpp"

#include "conceptmine/text.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <map>

namespace conceptmine {

std::optional<Pattern> Pattern::parse(std::string_view tmpl, PatternOrigin origin) {
  auto pos = tmpl.find(kSlot);
  if (pos == std::string_view::npos) return std::nullopt;
  if (tmpl.find(kSlot, pos + kSlot.size()) != std::string_view::npos) return std::nullopt;
  Pattern p{std::string(tmpl.substr(0, pos)), std::string(tmpl.substr(pos + kSlot.size())),
            origin};
  if (trim(p.prefix + p.suffix).empty()) return std::nullopt;
  return p;
}

std::optional<ConceptCandidate> apply_pattern(const Pattern& p, const Query& q) {
  const std::string& text = q.text;
  if (text.size() <= p.prefix.size() + p.suffix.size()) return std::nullopt;
  if (!text.starts_with(p.prefix) || !text.ends_with(p.suffix)) return std::nullopt;

  std::size_t begin = p.prefix.size();
  std::size_t end = text.size() - p.suffix.size();
  while (begin < end && text[begin] == ' ') ++begin;
  while (end > begin && text[end - 1] == ' ') --end;
  if (begin == end || !on_word_boundary(text, begin, end - begin)) return std::nullopt;

  ConceptCandidate c;
  c.text = text.substr(begin, end - begin);
  c.source = CandidateSource::kBootstrap;
  c.provenance = q.id;
  return c;
}

namespace {

// Distinct captures of one pattern over the query set.
std::set<std::string> captures(const Pattern& p, std::span<const Query> queries) {
  std::set<std::string> out;
  for (const auto& q : queries) {
    if (auto c = apply_pattern(p, q)) out.insert(std::move(c->text));
  }
  return out;
}

}  // namespace

std::vector<ScoredPattern> induce_patterns(const std::set<std::string>& concepts,
                                           std::span<const Query> queries) {
  std::set<Pattern> induced;
  for (const auto& q : queries) {
    const std::string& text = q.text;
    for (const auto& c : concepts) {
      if (c.empty()) continue;
      for (auto pos = text.find(c); pos != std::string::npos; pos = text.find(c, pos + 1)) {
        if (!on_word_boundary(text, pos, c.size())) continue;
        Pattern p{text.substr(0, pos), text.substr(pos + c.size()), PatternOrigin::kInduced};
        if (trim(p.prefix + p.suffix).empty()) continue;
        induced.insert(std::move(p));
      }
    }
  }

  std::vector<ScoredPattern> out;
  out.reserve(induced.size());
  for (const auto& p : induced) {
    PatternStats stats;
    for (const auto& cap : captures(p, queries)) {
      if (concepts.count(cap)) {
        ++stats.n_s;
      } else {
        ++stats.n_e;
      }
    }
    out.push_back({p, stats});
  }
  return out;
}

bool filter_pattern(const PatternStats& stats, double alpha, double beta, double delta) {
  if (stats.n_e == 0) return false;
  double ratio = static_cast<double>(stats.n_s) / static_cast<double>(stats.n_e);
  return alpha < ratio && ratio < beta && static_cast<double>(stats.n_s) > delta;
}

BootstrapResult run_bootstrap(const std::vector<Pattern>& seeds, std::span<const Query> queries,
                              const BootstrapOptions& options) {
  struct Support {
    std::size_t first_query;
    std::size_t count;
  };
  BootstrapResult result;
  std::set<Pattern> held;
  for (const auto& s : seeds) {
    if (held.insert(s).second) result.patterns.push_back(s);
  }

  std::map<std::string, Support> known;
  auto extract = [&](const std::vector<Pattern>& patterns) {
    std::map<std::string, Support> found;
    for (std::size_t qi = 0; qi < queries.size(); ++qi) {
      for (const auto& p : patterns) {
        if (auto c = apply_pattern(p, queries[qi])) {
          auto [it, fresh] = found.try_emplace(c->text, Support{qi, 0});
          ++it->second.count;
        }
      }
    }
    return found;
  };
  auto merge = [&](const std::map<std::string, Support>& found) {
    for (const auto& [text, s] : found) {
      auto [it, fresh] = known.try_emplace(text, s);
      if (!fresh) {
        it->second.first_query = std::min(it->second.first_query, s.first_query);
        it->second.count += s.count;
      }
    }
  };

  merge(extract(result.patterns));
  result.growth.emplace_back(known.size(), result.patterns.size());

  for (int iter = 0; iter < options.max_iters && !queries.empty(); ++iter) {
    std::set<std::string> concept_set;
    for (const auto& [text, s] : known) concept_set.insert(text);

    std::vector<Pattern> accepted;
    for (auto& sp : induce_patterns(concept_set, queries)) {
      if (held.count(sp.pattern)) continue;
      if (filter_pattern(sp.stats, options.alpha, options.beta, options.delta)) {
        accepted.push_back(sp.pattern);
      }
    }
    if (accepted.empty()) break;

    merge(extract(accepted));
    for (auto& p : accepted) {
      held.insert(p);
      result.patterns.push_back(std::move(p));
    }
    result.iterations = iter + 1;
    result.growth.emplace_back(known.size(), result.patterns.size());
  }

  result.concepts.reserve(known.size());
  for (const auto& [text, s] : known) {
    ConceptCandidate c;
    c.text = text;
    c.source = CandidateSource::kBootstrap;
    c.provenance = queries[s.first_query].id;
    c.score = static_cast<double>(s.count);
    result.concepts.push_back(std::move(c));
  }
  return result;
}

std::vector<Pattern> read_seed_patterns(std::istream& in) {
  std::vector<Pattern> out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty() || line[0] == '#') continue;
    auto p = Pattern::parse(line, PatternOrigin::kSeed);
    if (!p) throw CorpusError("invalid seed pattern: '" + line + "'");
    out.push_back(std::move(*p));
  }
  return out;
}

std::vector<Pattern> load_seed_patterns(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CorpusError("cannot open seed patterns: " + path);
  return read_seed_patterns(in);
}

}  // namespace conceptmine
