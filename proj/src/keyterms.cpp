#include "conceptmine/keyterms.hpp"

#include "conceptmine/text.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace conceptmine {

double LinearTermRanker::rank(const TermFeatures& f) const {
  return w_.topic_match * f.topic_match + w_.in_title * f.in_title +
         w_.title_has_topic * f.title_has_topic + w_.frequency_share * f.frequency_share +
         w_.sentence_coverage * f.sentence_coverage;
}

std::vector<TermSpan> candidate_spans(const std::vector<Token>& tokens,
                                      const std::set<std::string>* vocabulary,
                                      std::size_t max_phrase) {
  std::vector<TermSpan> out;
  std::size_t i = 0;
  while (i < tokens.size()) {
    std::size_t matched = 0;
    if (vocabulary && !vocabulary->empty()) {
      for (std::size_t n = std::min(max_phrase, tokens.size() - i); n >= 1; --n) {
        std::string phrase = tokens[i].surface;
        for (std::size_t k = 1; k < n; ++k) phrase += " " + tokens[i + k].surface;
        if (!vocabulary->count(phrase)) phrase = ascii_lower(phrase);
        if (vocabulary->count(phrase)) {
          out.push_back({i, n, std::move(phrase)});
          matched = n;
          break;
        }
      }
    }
    if (matched) {
      i += matched;
      continue;
    }
    if (is_noun_tag(tokens[i].pos)) out.push_back({i, 1, tokens[i].surface});
    ++i;
  }
  return out;
}

std::size_t max_phrase_tokens(const std::set<std::string>* vocabulary) {
  std::size_t m = 1;
  if (vocabulary) {
    for (const auto& v : *vocabulary) m = std::max(m, split_whitespace(v).size());
  }
  return m;
}

namespace {

std::vector<std::string> candidate_terms(const std::vector<Token>& tokens,
                                         const std::set<std::string>* vocab,
                                         std::size_t max_phrase) {
  std::vector<std::string> out;
  for (auto& s : candidate_spans(tokens, vocab, max_phrase)) out.push_back(std::move(s.text));
  return out;
}

bool sort_by_base(const TermScore& a, const TermScore& b) {
  if (a.base_score != b.base_score) return a.base_score > b.base_score;
  return a.term < b.term;
}

}  // namespace

std::vector<TermScore> score_terms(const Document& d, const KeytermContext& ctx,
                                   const TermRanker& ranker) {
  const std::size_t max_phrase = max_phrase_tokens(ctx.instance_vocabulary);

  std::map<std::string, std::size_t> counts;
  std::map<std::string, std::size_t> sentence_hits;
  std::set<std::string> title_terms;
  for (auto& t : candidate_terms(d.title, ctx.instance_vocabulary, max_phrase)) {
    ++counts[t];
    title_terms.insert(std::move(t));
  }
  for (const auto& s : d.sentences) {
    std::set<std::string> here;
    for (auto& t : candidate_terms(s, ctx.instance_vocabulary, max_phrase)) {
      ++counts[t];
      here.insert(std::move(t));
    }
    for (const auto& t : here) ++sentence_hits[t];
  }
  if (counts.empty()) return {};

  std::size_t total = 0;
  for (const auto& [t, c] : counts) total += c;
  std::string title_text = " " + ascii_lower(join_surfaces(d.title)) + " ";

  std::vector<TermScore> out;
  out.reserve(counts.size());
  for (const auto& [term, c] : counts) {
    TermScore s;
    s.term = term;
    s.count = c;
    auto& f = s.features;
    f.in_title = title_terms.count(term) ? 1.0 : 0.0;
    f.frequency_share = static_cast<double>(c) / static_cast<double>(total);
    if (!d.sentences.empty()) {
      auto it = sentence_hits.find(term);
      f.sentence_coverage = it == sentence_hits.end()
                                ? 0.0
                                : static_cast<double>(it->second) /
                                      static_cast<double>(d.sentences.size());
    }
    if (ctx.term_topic) {
      if (auto topic = ctx.term_topic(term)) {
        f.topic_match = ctx.document_topic && *ctx.document_topic == *topic ? 1.0 : 0.0;
        f.title_has_topic =
            title_text.find(" " + ascii_lower(*topic) + " ") != std::string::npos ? 1.0 : 0.0;
      }
    }
    s.base_score = ranker.rank(f);
    out.push_back(std::move(s));
  }
  std::sort(out.begin(), out.end(), sort_by_base);
  return out;
}

TextRankResult textrank(const std::vector<std::vector<double>>& weights, double damping,
                        double eps, int max_iters) {
  const std::size_t n = weights.size();
  TextRankResult r;
  r.scores.assign(n, 1.0);
  std::vector<double> out_weight(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < n; ++k) {
      if (k != j) out_weight[j] += weights[j][k];
    }
  }
  std::vector<double> next(n);
  for (int it = 0; it < max_iters; ++it) {
    double max_change = 0.0;
    double l1 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double acc = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i || out_weight[j] <= 0.0 || weights[j][i] <= 0.0) continue;
        acc += weights[j][i] / out_weight[j] * r.scores[j];
      }
      next[i] = (1.0 - damping) + damping * acc;
      double change = std::abs(next[i] - r.scores[i]);
      max_change = std::max(max_change, change);
      l1 += change;
    }
    r.scores.swap(next);
    r.l1_deltas.push_back(l1);
    r.iterations = it + 1;
    if (max_change < eps) break;
  }
  return r;
}

std::vector<TermScore> rerank_textrank(std::vector<TermScore> top_terms,
                                       const EmbeddingProvider& emb, std::size_t k,
                                       double damping, double eps) {
  if (k == 0) k = 1;
  // Canonical node order makes the result independent of input order.
  std::sort(top_terms.begin(), top_terms.end(), sort_by_base);
  std::vector<TermScore> nodes;
  std::set<std::string> seen;
  for (auto& t : top_terms) {
    if (nodes.size() >= k) break;
    if (seen.insert(t.term).second) nodes.push_back(std::move(t));
  }
  if (nodes.empty()) return nodes;

  const std::size_t n = nodes.size();
  std::vector<std::optional<std::vector<double>>> vecs;
  vecs.reserve(n);
  for (const auto& t : nodes) vecs.push_back(emb.vector_of(t.term));
  std::vector<std::vector<double>> w(n, std::vector<double>(n, 0.0));
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      if (!vecs[a] || !vecs[b]) continue;
      double sim = std::max(0.0, cosine(*vecs[a], *vecs[b]));
      w[a][b] = w[b][a] = sim;
    }
  }
  auto tr = textrank(w, damping, eps);
  auto [lo, hi] = std::minmax_element(tr.scores.begin(), tr.scores.end());
  double range = *hi - *lo;
  for (std::size_t i = 0; i < n; ++i) {
    nodes[i].textrank_score = range > 1e-12 ? (tr.scores[i] - *lo) / range : 1.0;
  }
  std::sort(nodes.begin(), nodes.end(), [](const TermScore& a, const TermScore& b) {
    if (*a.textrank_score != *b.textrank_score) return *a.textrank_score > *b.textrank_score;
    return a.term < b.term;
  });
  return nodes;
}

KeyInstanceSet select_key_instances(std::string doc_id, const std::vector<TermScore>& reranked,
                                    double delta_w) {
  KeyInstanceSet out;
  out.doc_id = std::move(doc_id);
  double total = 0.0;
  for (const auto& t : reranked) {
    if (!t.textrank_score || *t.textrank_score <= delta_w) continue;
    double c = static_cast<double>(std::max<std::size_t>(t.count, 1));
    out.instances.emplace_back(t.term, c);
    total += c;
  }
  for (auto& [term, w] : out.instances) w /= total;
  return out;
}

KeyInstanceSet extract_key_instances(const Document& d, const EmbeddingProvider& emb,
                                     std::size_t k, double delta_w, const KeytermContext& ctx) {
  return select_key_instances(d.id, rerank_textrank(score_terms(d, ctx), emb, k), delta_w);
}

}  // namespace conceptmine
