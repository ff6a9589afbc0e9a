#pragma once

#include "conceptmine/cooccurrence.hpp"
#include "conceptmine/corpus.hpp"

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace conceptmine {

enum class NodeKind { kTopic, kConcept, kInstance };
std::string_view to_string(NodeKind k);
std::optional<NodeKind> parse_node_kind(std::string_view s);

using NodeId = std::size_t;

struct TaxNode {
  NodeId id = 0;
  NodeKind kind = NodeKind::kConcept;
  std::string text;
  bool auto_created = false;  // created implicitly by an imported pair
};

struct TaxEdge {
  NodeId parent = 0;
  NodeId child = 0;
  double confidence = 1.0;
  std::string provenance;  // "discovered", "external", "topic-link", ...
};

struct EdgeError {
  enum class Kind { kLayerViolation, kCycle, kDanglingEndpoint, kBadConfidence };
  Kind kind;
  std::string message;
};
std::string_view to_string(EdgeError::Kind k);

// Layered DAG: topic -> concept -> instance. Every mutation keeps the layer
// rule and acyclicity; rejected edges leave the graph untouched.
class TaxonomyGraph {
 public:
  TaxonomyGraph() = default;
  // When non-empty, topic nodes must come from this list.
  explicit TaxonomyGraph(std::vector<std::string> topics);

  const std::vector<std::string>& topics() const { return topics_; }

  // Returns the existing id when (kind, text) is already present. Throws
  // std::invalid_argument for empty text or a topic outside the topic list.
  NodeId add_node(NodeKind kind, const std::string& text, bool auto_created = false);
  std::optional<NodeId> find(NodeKind kind, const std::string& text) const;
  const TaxNode& node(NodeId id) const { return nodes_.at(id); }
  const std::vector<TaxNode>& nodes() const { return nodes_; }

  // A duplicate edge keeps the larger confidence.
  std::optional<EdgeError> add_edge(const TaxEdge& e);
  std::vector<TaxEdge> edges() const;
  std::size_t num_edges() const { return edges_.size(); }
  std::optional<double> edge_confidence(NodeId parent, NodeId child) const;

  const std::set<NodeId>& parents(NodeId id) const;
  const std::set<NodeId>& children(NodeId id) const;

  std::vector<std::string> texts(NodeKind kind) const;
  // Concept texts with an edge to the instance with this text.
  std::vector<std::string> concepts_of_instance(const std::string& instance) const;

  // Kahn topological order; nullopt on a cycle.
  std::optional<std::vector<NodeId>> topological_order() const;
  // Full consistency pass: endpoints, layer rule, acyclicity. Returns a list
  // of problems, empty when valid.
  std::vector<std::string> validate() const;

  // `parent_kind \t parent_text \t child_kind \t child_text \t confidence`
  void export_tsv(std::ostream& out) const;
  static TaxonomyGraph import_tsv(std::istream& in, std::vector<std::string> topics = {},
                                  std::vector<RecordError>* errors = nullptr);

 private:
  bool reachable(NodeId from, NodeId to) const;

  std::vector<std::string> topics_;
  std::set<std::string> topic_set_;
  std::vector<TaxNode> nodes_;
  std::map<std::pair<NodeKind, std::string>, NodeId> by_key_;
  std::map<std::pair<NodeId, NodeId>, TaxEdge> edges_;
  std::vector<std::set<NodeId>> parents_;
  std::vector<std::set<NodeId>> children_;
};

// One topic per line; blank lines and '#' comments ignored.
std::vector<std::string> read_topics(std::istream& in);
std::vector<std::string> load_topics(const std::string& path);
std::string default_topics_path();

struct ModifierHead {
  std::vector<std::string> modifier;
  std::vector<std::string> head;
};

// Head = trailing run of noun tokens, modifier = the rest. An all-noun
// concept keeps only its last token as head. nullopt when no modifier is left.
std::optional<ModifierHead> split_modifier_head(const std::vector<Token>& concept_tokens);

// Lowercased final head nouns of the given concepts.
std::set<std::string> head_nouns(const std::vector<std::vector<Token>>& concepts);

// X from queries and titles reading "modifier X": the noun run after the
// modifier, cut before the head noun, minus leading head compound words. A
// run holding one of `other_heads` names another concept and is skipped.
std::set<std::string> find_instance_candidates(const std::vector<Token>& concept_tokens,
                                               std::span<const QueryLogEntry> logs,
                                               const std::set<std::string>& other_heads = {});

// p(c|e) = sum over x of p(c|x) p(x|e), x ranging over e's observed context.
double instance_confidence(const std::string& concept_text, const std::string& instance,
                           const CooccurrenceStats& stats, const ConceptIndex& index);

// Candidates with confidence strictly above threshold, sorted by confidence
// descending then text.
std::vector<std::pair<std::string, double>> discover_instances(
    const std::vector<Token>& concept_tokens, std::span<const QueryLogEntry> logs,
    const CooccurrenceStats& stats, const ConceptIndex& index, double threshold,
    const std::set<std::string>& other_heads = {});

// `concept \t instance` lines. Malformed lines are skipped with a warning;
// duplicates are dropped.
std::vector<std::pair<std::string, std::string>> read_instance_pairs(std::istream& in);
std::vector<std::pair<std::string, std::string>> import_instance_pairs(const std::string& path);

// Adds pairs as concept -> instance edges with confidence 1.0 and provenance
// "external". Concepts not yet in the graph are created and flagged.
void add_instance_pairs(TaxonomyGraph& g,
                        const std::vector<std::pair<std::string, std::string>>& pairs);

}  // namespace conceptmine
