#include "conceptmine/tagger.hpp"

#include "conceptmine/log.hpp"
#include "conceptmine/text.hpp"

#include <algorithm>
#include <iomanip>
#include <ostream>

namespace conceptmine {

std::string_view to_string(TagMethod m) {
  return m == TagMethod::kMatching ? "matching" : "inference";
}

std::optional<TagMethod> parse_tag_method(std::string_view s) {
  if (s == "matching") return TagMethod::kMatching;
  if (s == "inference") return TagMethod::kInference;
  return std::nullopt;
}

namespace {

void sort_scored(ScoredConcepts& v) {
  std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
}

}  // namespace

double p_concept_given_instance(const std::string& concept_text, const std::string& instance,
                                const CooccurrenceStats& stats, const ConceptIndex& index,
                                std::span<const std::string> context) {
  double p = 0.0;
  for (const auto& x : context) {
    double pcx = index.p_concept_given_context(concept_text, x);
    if (pcx == 0.0) continue;
    p += pcx * stats.p_context_given_instance(x, instance);
  }
  return p;
}

InstanceContexts instance_contexts(const Document& d, const KeyInstanceSet& keys,
                                   const std::set<std::string>& stopwords) {
  InstanceContexts out;
  auto sentences = document_sentences(d);
  for (const auto& [e, w] : keys.instances) out[e] = context_words(sentences, e, stopwords);
  return out;
}

ScoredConcepts concept_posterior(const KeyInstanceSet& keys, const InstanceContexts& contexts,
                                 const CooccurrenceStats& stats, const ConceptIndex& index) {
  std::map<std::string, double> acc;
  for (const auto& [e, w] : keys.instances) {
    auto it = contexts.find(e);
    if (it == contexts.end() || w == 0.0) continue;
    for (const auto& x : it->second) {
      double pxe = stats.p_context_given_instance(x, e);
      if (pxe == 0.0) continue;
      const auto& post = index.postings(x);
      if (post.empty()) continue;
      double pcx = 1.0 / static_cast<double>(post.size());
      for (const auto& c : post) acc[c] += w * pcx * pxe;
    }
  }
  ScoredConcepts out;
  for (const auto& [c, p] : acc) {
    if (p > 0.0) out.emplace_back(c, std::min(p, 1.0));
  }
  sort_scored(out);
  return out;
}

ScoredConcepts tag_by_inference(const Document& d, const KeyInstanceSet& keys,
                                const CooccurrenceStats& stats, const ConceptIndex& index,
                                std::size_t top_m) {
  if (keys.instances.empty()) return {};
  auto out = concept_posterior(keys, instance_contexts(d, keys), stats, index);
  if (out.size() > top_m) out.resize(top_m);
  return out;
}

std::vector<std::string> title_terms(const std::vector<Token>& title) {
  std::vector<std::string> out;
  for (const auto& t : title) {
    if (t.pos != "PUNCT") out.push_back(ascii_lower(t.surface));
  }
  return out;
}

namespace {

bool contains_tokens(const std::vector<Token>& seq, const std::vector<std::string>& needle) {
  if (needle.empty() || seq.size() < needle.size()) return false;
  for (std::size_t i = 0; i + needle.size() <= seq.size(); ++i) {
    bool match = true;
    for (std::size_t k = 0; k < needle.size() && match; ++k) {
      match = ascii_lower(seq[i + k].surface) == needle[k];
    }
    if (match) return true;
  }
  return false;
}

}  // namespace

EnrichedConcept enrich_concept(const std::string& concept_text,
                               std::span<const QueryLogEntry> logs, std::size_t n_titles,
                               const DocumentFrequency& df) {
  EnrichedConcept ec;
  ec.concept_text = concept_text;
  auto needle = split_whitespace(ascii_lower(concept_text));
  std::vector<std::string> terms = needle;
  if (n_titles > 0) {
    std::map<std::string, long long> clicks;
    std::map<std::string, const std::vector<Token>*> tokens;
    for (const auto& entry : logs) {
      if (!contains_tokens(entry.query.tokens, needle)) continue;
      for (const auto& t : entry.titles) {
        clicks[t.text] += t.click_count;
        tokens.emplace(t.text, &t.tokens);
      }
    }
    std::vector<std::pair<std::string, long long>> ranked(clicks.begin(), clicks.end());
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
      if (a.second != b.second) return a.second > b.second;
      return a.first < b.first;
    });
    if (ranked.size() > n_titles) ranked.resize(n_titles);
    for (const auto& [text, c] : ranked) {
      auto tt = title_terms(*tokens.at(text));
      terms.insert(terms.end(), tt.begin(), tt.end());
    }
    ec.titles = std::move(ranked);
  }
  ec.vector = tfidf_vector(terms, df);
  return ec;
}

std::map<std::string, EnrichedConcept> enrich_concepts(const std::set<std::string>& concepts,
                                                       std::span<const QueryLogEntry> logs,
                                                       std::size_t n_titles,
                                                       const DocumentFrequency& df) {
  // Invert once: concept -> log entries whose query contains it.
  std::map<std::string, std::vector<QueryLogEntry>> hits;
  ConceptIndex index(concepts);
  for (const auto& entry : logs) {
    std::set<std::string> found;
    std::vector<std::string> words;
    for (const auto& t : entry.query.tokens) words.push_back(ascii_lower(t.surface));
    for (std::size_t i = 0; i < words.size(); ++i) {
      std::string g;
      for (std::size_t j = i; j < words.size(); ++j) {
        if (j > i) g += ' ';
        g += words[j];
        for (const auto& c : index.postings(g)) {
          if (index_key(c) == g) found.insert(c);
        }
      }
    }
    for (const auto& c : found) hits[c].push_back(entry);
  }
  std::map<std::string, EnrichedConcept> out;
  for (const auto& c : concepts) {
    auto it = hits.find(c);
    std::span<const QueryLogEntry> sub;
    if (it != hits.end()) sub = it->second;
    out.emplace(c, enrich_concept(c, sub, n_titles, df));
  }
  return out;
}

ScoredConcepts tag_by_matching(const Document& d, const KeyInstanceSet& keys,
                               const TaxonomyGraph& taxonomy,
                               const std::map<std::string, EnrichedConcept>& enriched,
                               double delta_u, const DocumentFrequency& df) {
  std::set<std::string> candidates;
  for (const auto& [e, w] : keys.instances) {
    for (auto& c : taxonomy.concepts_of_instance(e)) candidates.insert(std::move(c));
  }
  if (candidates.empty()) return {};
  auto doc_vec = tfidf_vector(title_terms(d.title), df);
  ScoredConcepts out;
  for (const auto& c : candidates) {
    double sim = 0.0;
    if (auto it = enriched.find(c); it != enriched.end()) {
      sim = sparse_cosine(it->second.vector, doc_vec);
    } else {
      warn("no enrichment for concept '" + c + "', using its own tokens");
      auto terms = split_whitespace(ascii_lower(c));
      sim = sparse_cosine(tfidf_vector(terms, df), doc_vec);
    }
    if (sim > delta_u) out.emplace_back(c, sim);
  }
  sort_scored(out);
  return out;
}

TaggedDocument tag_document(const Document& d, const TaggerModels& models) {
  TaggedDocument out;
  out.doc_id = d.id;
  out.topic = d.topic;
  const auto& opt = models.options;

  KeytermContext ctx;
  ctx.instance_vocabulary = &models.instance_vocabulary;
  KeyInstanceSet keys;
  if (models.embeddings) {
    keys = select_key_instances(
        d.id, rerank_textrank(score_terms(d, ctx), *models.embeddings, opt.k, opt.damping),
        opt.delta_w);
  } else {
    EmbeddingTable empty;
    keys = select_key_instances(d.id, rerank_textrank(score_terms(d, ctx), empty, opt.k, opt.damping),
                                opt.delta_w);
  }

  KeyInstanceSet covered{d.id, {}};
  KeyInstanceSet uncovered{d.id, {}};
  for (const auto& kv : keys.instances) {
    bool has_parent = !models.taxonomy.concepts_of_instance(kv.first).empty();
    (has_parent ? covered : uncovered).instances.push_back(kv);
  }

  std::map<std::string, Tag> merged;
  if (!covered.instances.empty()) {
    for (const auto& [c, s] :
         tag_by_matching(d, covered, models.taxonomy, models.enriched, opt.delta_u, models.df)) {
      merged[c] = Tag{c, s, TagMethod::kMatching};
    }
  }
  if (!uncovered.instances.empty()) {
    for (const auto& [c, p] :
         tag_by_inference(d, uncovered, models.stats, models.index, opt.top_m)) {
      auto it = merged.find(c);
      if (it == merged.end()) {
        merged[c] = Tag{c, p, TagMethod::kInference};
      }
    }
  }
  for (auto& [c, t] : merged) out.tags.push_back(std::move(t));
  std::sort(out.tags.begin(), out.tags.end(), [](const Tag& a, const Tag& b) {
    if (a.method != b.method) return a.method == TagMethod::kMatching;
    if (a.score != b.score) return a.score > b.score;
    return a.concept_text < b.concept_text;
  });
  return out;
}

void write_tagged(std::ostream& out, const std::vector<TaggedDocument>& docs) {
  for (const auto& d : docs) {
    for (const auto& t : d.tags) {
      out << d.doc_id << '\t' << t.concept_text << '\t' << std::setprecision(10) << t.score
          << '\t' << to_string(t.method) << '\n';
    }
  }
}

}  // namespace conceptmine
