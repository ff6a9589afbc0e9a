#include "conceptmine/taxonomy_builder.hpp"

#include "conceptmine/log.hpp"
#include "conceptmine/text.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace conceptmine {

std::vector<std::pair<std::string, double>> topic_distribution(
    const std::string& concept_text, std::span<const TaggedDocument> docs) {
  std::map<std::string, std::size_t> per_topic;
  std::size_t n = 0;
  for (const auto& d : docs) {
    if (!d.topic) continue;
    bool tagged = std::any_of(d.tags.begin(), d.tags.end(),
                              [&](const Tag& t) { return t.concept_text == concept_text; });
    if (!tagged) continue;
    ++n;
    ++per_topic[*d.topic];
  }
  std::vector<std::pair<std::string, double>> out;
  for (const auto& [topic, c] : per_topic) {
    out.emplace_back(topic, static_cast<double>(c) / static_cast<double>(n));
  }
  return out;
}

std::vector<std::pair<std::string, double>> link_topic_concept(
    const std::string& concept_text, std::span<const TaggedDocument> docs, double delta_t) {
  auto dist = topic_distribution(concept_text, docs);
  if (dist.empty()) {
    warn("no topic-labeled document is tagged with '" + concept_text + "'; no topic edges");
    return {};
  }
  std::vector<std::pair<std::string, double>> out;
  for (const auto& [topic, p] : dist) {
    if (p > delta_t) out.emplace_back(topic, p);
  }
  return out;
}

TaggerModels make_tagger_models(std::span<const QueryLogEntry> logs,
                                std::span<const Document> docs,
                                const std::set<std::string>& concepts, TaxonomyGraph taxonomy,
                                std::shared_ptr<const EmbeddingProvider> embeddings,
                                const TaggerOptions& options) {
  TaggerModels m;
  m.options = options;
  m.embeddings = std::move(embeddings);
  for (auto& e : taxonomy.texts(NodeKind::kInstance)) m.instance_vocabulary.insert(std::move(e));
  std::set<std::string> all_concepts = concepts;
  for (auto& c : taxonomy.texts(NodeKind::kConcept)) all_concepts.insert(std::move(c));
  m.taxonomy = std::move(taxonomy);
  m.index = ConceptIndex(all_concepts);

  std::vector<std::vector<Token>> sentences;
  std::set<std::string> seen_titles;
  for (const auto& d : docs) {
    m.df.add_document(title_terms(d.title));
    for (auto& s : document_sentences(d)) sentences.push_back(std::move(s));
  }
  for (const auto& entry : logs) {
    sentences.push_back(entry.query.tokens);
    for (const auto& t : entry.titles) {
      if (!seen_titles.insert(t.text).second) continue;
      m.df.add_document(title_terms(t.tokens));
      sentences.push_back(t.tokens);
    }
  }
  CooccurrenceOptions co;
  co.instance_vocabulary = &m.instance_vocabulary;
  m.stats = build_cooccurrence(sentences, co);
  m.enriched = enrich_concepts(all_concepts, logs, options.n_titles, m.df);
  return m;
}

TaxonomyBuild build_taxonomy(const TaxonomyBuildInput& input,
                             const TaxonomyBuildOptions& options) {
  if (!input.tokenizer) throw std::invalid_argument("build_taxonomy needs a tokenizer");
  TaxonomyBuild out;
  out.graph = TaxonomyGraph(input.topics);
  auto& g = out.graph;
  for (const auto& c : input.concepts) g.add_node(NodeKind::kConcept, c);

  // Candidate instances first, so co-occurrence can count them as units.
  std::map<std::string, std::vector<Token>> concept_tokens;
  std::vector<std::vector<Token>> all_tokens;
  for (const auto& c : input.concepts) {
    auto toks = input.tokenizer->tokenize(c);
    all_tokens.push_back(toks);
    concept_tokens.emplace(c, std::move(toks));
  }
  const auto heads = head_nouns(all_tokens);
  std::set<std::string> vocabulary;
  for (const auto& [c, toks] : concept_tokens) {
    for (auto& e : find_instance_candidates(toks, input.logs, heads)) vocabulary.insert(std::move(e));
  }
  std::vector<std::vector<Token>> sentences;
  for (const auto& entry : input.logs) {
    sentences.push_back(entry.query.tokens);
    for (const auto& t : entry.titles) sentences.push_back(t.tokens);
  }
  for (const auto& d : input.documents) {
    for (auto& s : document_sentences(d)) sentences.push_back(std::move(s));
  }
  CooccurrenceOptions co;
  co.instance_vocabulary = &vocabulary;
  auto stats = build_cooccurrence(sentences, co);
  ConceptIndex index(input.concepts);

  for (const auto& [c, toks] : concept_tokens) {
    NodeId cid = *g.find(NodeKind::kConcept, c);
    for (const auto& [e, conf] :
         discover_instances(toks, input.logs, stats, index, options.instance_threshold, heads)) {
      NodeId eid = g.add_node(NodeKind::kInstance, e);
      if (auto err = g.add_edge({cid, eid, std::min(conf, 1.0), "discovered"})) {
        warn(err->message);
      }
    }
  }
  add_instance_pairs(g, input.external_pairs);

  // Tag documents against the concept-instance layer, then link topics.
  auto models = std::make_shared<TaggerModels>(make_tagger_models(
      input.logs, input.documents, input.concepts, g, input.embeddings, options.tagger));
  out.tagged.reserve(input.documents.size());
  for (const auto& d : input.documents) {
    auto td = tag_document(d, *models);
    if (!td.topic && input.classifier && input.embeddings) {
      auto probs = classify_topic(*input.classifier, d, *input.embeddings);
      td.topic = top_topic(*input.classifier, probs);
    }
    out.tagged.push_back(std::move(td));
  }
  for (const auto& c : g.texts(NodeKind::kConcept)) {
    NodeId cid = *g.find(NodeKind::kConcept, c);
    for (const auto& [topic, p] : link_topic_concept(c, out.tagged, options.delta_t)) {
      std::optional<NodeId> tid = g.find(NodeKind::kTopic, topic);
      if (!tid) {
        try {
          tid = g.add_node(NodeKind::kTopic, topic);
        } catch (const std::invalid_argument& e) {
          warn(e.what());
          continue;
        }
      }
      if (auto err = g.add_edge({*tid, cid, p, "topic-link"})) warn(err->message);
    }
  }
  models->taxonomy = g;
  out.models = std::move(models);
  return out;
}

}  // namespace conceptmine
