#include "conceptmine/taxonomy.hpp"

#include "conceptmine/log.hpp"
#include "conceptmine/text.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace conceptmine {

std::string_view to_string(NodeKind k) {
  switch (k) {
    case NodeKind::kTopic: return "topic";
    case NodeKind::kConcept: return "concept";
    case NodeKind::kInstance: return "instance";
  }
  return "?";
}

std::optional<NodeKind> parse_node_kind(std::string_view s) {
  if (s == "topic") return NodeKind::kTopic;
  if (s == "concept") return NodeKind::kConcept;
  if (s == "instance") return NodeKind::kInstance;
  return std::nullopt;
}

std::string_view to_string(EdgeError::Kind k) {
  switch (k) {
    case EdgeError::Kind::kLayerViolation: return "layer_violation";
    case EdgeError::Kind::kCycle: return "cycle";
    case EdgeError::Kind::kDanglingEndpoint: return "dangling_endpoint";
    case EdgeError::Kind::kBadConfidence: return "bad_confidence";
  }
  return "?";
}

namespace {

bool layer_ok(NodeKind parent, NodeKind child) {
  return (parent == NodeKind::kTopic && child == NodeKind::kConcept) ||
         (parent == NodeKind::kConcept && child == NodeKind::kInstance);
}

}  // namespace

TaxonomyGraph::TaxonomyGraph(std::vector<std::string> topics) : topics_(std::move(topics)) {
  topic_set_.insert(topics_.begin(), topics_.end());
}

NodeId TaxonomyGraph::add_node(NodeKind kind, const std::string& text, bool auto_created) {
  std::string t = normalize_text(text);
  if (t.empty()) throw std::invalid_argument("taxonomy node text is empty");
  if (kind == NodeKind::kTopic && !topic_set_.empty() && !topic_set_.count(t)) {
    throw std::invalid_argument("unknown topic '" + t + "'");
  }
  auto key = std::make_pair(kind, t);
  if (auto it = by_key_.find(key); it != by_key_.end()) return it->second;
  NodeId id = nodes_.size();
  nodes_.push_back({id, kind, t, auto_created});
  by_key_.emplace(std::move(key), id);
  parents_.emplace_back();
  children_.emplace_back();
  return id;
}

std::optional<NodeId> TaxonomyGraph::find(NodeKind kind, const std::string& text) const {
  auto it = by_key_.find({kind, normalize_text(text)});
  if (it == by_key_.end()) return std::nullopt;
  return it->second;
}

bool TaxonomyGraph::reachable(NodeId from, NodeId to) const {
  std::vector<bool> seen(nodes_.size(), false);
  std::vector<NodeId> stack{from};
  while (!stack.empty()) {
    NodeId n = stack.back();
    stack.pop_back();
    if (n == to) return true;
    if (seen[n]) continue;
    seen[n] = true;
    for (NodeId c : children_[n]) stack.push_back(c);
  }
  return false;
}

std::optional<EdgeError> TaxonomyGraph::add_edge(const TaxEdge& e) {
  if (e.parent >= nodes_.size() || e.child >= nodes_.size()) {
    return EdgeError{EdgeError::Kind::kDanglingEndpoint, "edge endpoint does not exist"};
  }
  if (!(e.confidence >= 0.0 && e.confidence <= 1.0)) {
    return EdgeError{EdgeError::Kind::kBadConfidence, "edge confidence outside [0,1]"};
  }
  const auto& p = nodes_[e.parent];
  const auto& c = nodes_[e.child];
  if (!layer_ok(p.kind, c.kind)) {
    return EdgeError{EdgeError::Kind::kLayerViolation,
                     std::string(to_string(p.kind)) + " '" + p.text + "' -> " +
                         std::string(to_string(c.kind)) + " '" + c.text + "'"};
  }
  if (e.parent == e.child || reachable(e.child, e.parent)) {
    return EdgeError{EdgeError::Kind::kCycle, "edge '" + p.text + "' -> '" + c.text +
                                                  "' would close a cycle"};
  }
  auto key = std::make_pair(e.parent, e.child);
  if (auto it = edges_.find(key); it != edges_.end()) {
    if (e.confidence > it->second.confidence) it->second = e;
    return std::nullopt;
  }
  edges_.emplace(key, e);
  parents_[e.child].insert(e.parent);
  children_[e.parent].insert(e.child);
  return std::nullopt;
}

std::vector<TaxEdge> TaxonomyGraph::edges() const {
  std::vector<TaxEdge> out;
  out.reserve(edges_.size());
  for (const auto& [k, e] : edges_) out.push_back(e);
  return out;
}

std::optional<double> TaxonomyGraph::edge_confidence(NodeId parent, NodeId child) const {
  auto it = edges_.find({parent, child});
  if (it == edges_.end()) return std::nullopt;
  return it->second.confidence;
}

const std::set<NodeId>& TaxonomyGraph::parents(NodeId id) const { return parents_.at(id); }
const std::set<NodeId>& TaxonomyGraph::children(NodeId id) const { return children_.at(id); }

std::vector<std::string> TaxonomyGraph::texts(NodeKind kind) const {
  std::vector<std::string> out;
  for (const auto& n : nodes_) {
    if (n.kind == kind) out.push_back(n.text);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::string> TaxonomyGraph::concepts_of_instance(const std::string& instance) const {
  std::vector<std::string> out;
  auto id = find(NodeKind::kInstance, instance);
  if (!id) return out;
  for (NodeId p : parents_[*id]) {
    if (nodes_[p].kind == NodeKind::kConcept) out.push_back(nodes_[p].text);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::optional<std::vector<NodeId>> TaxonomyGraph::topological_order() const {
  std::vector<std::size_t> indegree(nodes_.size(), 0);
  for (const auto& [k, e] : edges_) ++indegree[e.child];
  std::deque<NodeId> ready;
  for (NodeId i = 0; i < nodes_.size(); ++i) {
    if (indegree[i] == 0) ready.push_back(i);
  }
  std::vector<NodeId> order;
  order.reserve(nodes_.size());
  while (!ready.empty()) {
    NodeId n = ready.front();
    ready.pop_front();
    order.push_back(n);
    for (NodeId c : children_[n]) {
      if (--indegree[c] == 0) ready.push_back(c);
    }
  }
  if (order.size() != nodes_.size()) return std::nullopt;
  return order;
}

std::vector<std::string> TaxonomyGraph::validate() const {
  std::vector<std::string> problems;
  for (const auto& [k, e] : edges_) {
    if (e.parent >= nodes_.size() || e.child >= nodes_.size()) {
      problems.push_back("dangling edge");
      continue;
    }
    if (!layer_ok(nodes_[e.parent].kind, nodes_[e.child].kind)) {
      problems.push_back("layer violation: '" + nodes_[e.parent].text + "' -> '" +
                         nodes_[e.child].text + "'");
    }
  }
  if (!topological_order()) problems.push_back("graph has a cycle");
  return problems;
}

void TaxonomyGraph::export_tsv(std::ostream& out) const {
  for (const auto& [k, e] : edges_) {
    const auto& p = nodes_[e.parent];
    const auto& c = nodes_[e.child];
    std::ostringstream conf;
    conf << std::setprecision(17) << e.confidence;
    out << to_string(p.kind) << '\t' << p.text << '\t' << to_string(c.kind) << '\t' << c.text
        << '\t' << conf.str() << '\n';
  }
}

TaxonomyGraph TaxonomyGraph::import_tsv(std::istream& in, std::vector<std::string> topics,
                                        std::vector<RecordError>* errors) {
  TaxonomyGraph g(std::move(topics));
  std::string line;
  std::size_t line_no = 0;
  auto fail = [&](std::string msg) {
    if (errors) errors->push_back({line_no, std::move(msg)});
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    auto f = split(line, '\t');
    if (f.size() != 5) {
      fail("expected 5 tab-separated fields");
      continue;
    }
    auto pk = parse_node_kind(f[0]);
    auto ck = parse_node_kind(f[2]);
    if (!pk || !ck) {
      fail("unknown node kind");
      continue;
    }
    double conf = 0.0;
    try {
      std::size_t used = 0;
      conf = std::stod(f[4], &used);
      if (used != f[4].size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      fail("bad confidence '" + f[4] + "'");
      continue;
    }
    try {
      NodeId p = g.add_node(*pk, f[1]);
      NodeId c = g.add_node(*ck, f[3]);
      if (auto err = g.add_edge({p, c, conf, "imported"})) fail(err->message);
    } catch (const std::invalid_argument& e) {
      fail(e.what());
    }
  }
  return g;
}

std::vector<std::string> read_topics(std::istream& in) {
  std::vector<std::string> out;
  std::set<std::string> seen;
  std::string line;
  while (std::getline(in, line)) {
    auto t = normalize_text(line);
    if (t.empty() || t[0] == '#') continue;
    if (seen.insert(t).second) out.push_back(t);
  }
  return out;
}

std::vector<std::string> load_topics(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CorpusError("cannot open topic list '" + path + "'");
  return read_topics(in);
}

std::string default_topics_path() { return std::string(CONCEPTMINE_DATA_DIR) + "/topics.txt"; }

std::optional<ModifierHead> split_modifier_head(const std::vector<Token>& concept_tokens) {
  std::size_t n = concept_tokens.size();
  if (n < 2) return std::nullopt;
  std::size_t head_start = n;
  while (head_start > 0 && is_noun_tag(concept_tokens[head_start - 1].pos)) --head_start;
  if (head_start == n) return std::nullopt;  // no trailing noun
  if (head_start == 0) head_start = n - 1;
  ModifierHead mh;
  for (std::size_t i = 0; i < n; ++i) {
    (i < head_start ? mh.modifier : mh.head).push_back(concept_tokens[i].surface);
  }
  return mh;
}

namespace {

bool same_word(const std::string& a, const std::string& b) {
  return ascii_lower(a) == ascii_lower(b);
}

void scan_sequence(const std::vector<Token>& seq, const ModifierHead& mh,
                   const std::set<std::string>& other_heads, std::set<std::string>& out) {
  const auto& m = mh.modifier;
  for (std::size_t i = 0; i + m.size() < seq.size(); ++i) {
    bool match = true;
    for (std::size_t k = 0; k < m.size() && match; ++k) match = same_word(seq[i + k].surface, m[k]);
    if (!match) continue;
    std::size_t j = i + m.size();
    std::size_t end = j;
    while (end < seq.size() && is_noun_tag(seq[end].pos)) ++end;
    if (end == j) continue;
    // X stops before the head noun; compound words of the head leading X
    // ("kitchen" in "kitchen Brand speakers") are not part of the instance.
    const std::string& head_noun = mh.head.back();
    std::size_t stop = j;
    while (stop < end && !same_word(seq[stop].surface, head_noun)) ++stop;
    std::size_t begin = j;
    for (std::size_t k = 0; k + 1 < mh.head.size() && begin < stop; ++k) {
      if (!same_word(seq[begin].surface, mh.head[k])) break;
      ++begin;
    }
    if (begin == stop) continue;
    std::vector<std::string> x;
    bool foreign = false;
    for (std::size_t k = begin; k < stop; ++k) {
      x.push_back(seq[k].surface);
      foreign |= other_heads.count(ascii_lower(seq[k].surface)) > 0;
    }
    if (foreign) continue;
    out.insert(join(x, " "));
  }
}

}  // namespace

std::set<std::string> head_nouns(const std::vector<std::vector<Token>>& concepts) {
  std::set<std::string> out;
  for (const auto& toks : concepts) {
    if (auto mh = split_modifier_head(toks)) out.insert(ascii_lower(mh->head.back()));
  }
  return out;
}

std::set<std::string> find_instance_candidates(const std::vector<Token>& concept_tokens,
                                               std::span<const QueryLogEntry> logs,
                                               const std::set<std::string>& other_heads) {
  std::set<std::string> out;
  auto mh = split_modifier_head(concept_tokens);
  if (!mh) return out;
  std::set<std::string> foreign = other_heads;
  for (const auto& w : mh->head) foreign.erase(ascii_lower(w));
  for (const auto& entry : logs) {
    scan_sequence(entry.query.tokens, *mh, foreign, out);
    for (const auto& t : entry.titles) scan_sequence(t.tokens, *mh, foreign, out);
  }
  return out;
}

double instance_confidence(const std::string& concept_text, const std::string& instance,
                           const CooccurrenceStats& stats, const ConceptIndex& index) {
  double p = 0.0;
  for (const auto& [x, pxe] : stats.distribution(instance)) {
    p += index.p_concept_given_context(concept_text, x) * pxe;
  }
  return p;
}

std::vector<std::pair<std::string, double>> discover_instances(
    const std::vector<Token>& concept_tokens, std::span<const QueryLogEntry> logs,
    const CooccurrenceStats& stats, const ConceptIndex& index, double threshold,
    const std::set<std::string>& other_heads) {
  std::vector<std::string> words;
  for (const auto& t : concept_tokens) words.push_back(t.surface);
  const std::string concept_text = join(words, " ");
  std::vector<std::pair<std::string, double>> out;
  for (const auto& e : find_instance_candidates(concept_tokens, logs, other_heads)) {
    double conf = instance_confidence(concept_text, e, stats, index);
    if (conf > threshold) out.emplace_back(e, conf);
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  return out;
}

std::vector<std::pair<std::string, std::string>> read_instance_pairs(std::istream& in) {
  std::vector<std::pair<std::string, std::string>> out;
  std::set<std::pair<std::string, std::string>> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty() || line[0] == '#') continue;
    auto f = split(line, '\t');
    std::string c = f.size() == 2 ? normalize_text(f[0]) : "";
    std::string e = f.size() == 2 ? normalize_text(f[1]) : "";
    if (c.empty() || e.empty()) {
      warn("instance pairs line " + std::to_string(line_no) +
           ": expected `concept \\t instance`, skipped");
      continue;
    }
    if (seen.insert({c, e}).second) out.emplace_back(std::move(c), std::move(e));
  }
  return out;
}

std::vector<std::pair<std::string, std::string>> import_instance_pairs(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CorpusError("cannot open instance pairs '" + path + "'");
  return read_instance_pairs(in);
}

void add_instance_pairs(TaxonomyGraph& g,
                        const std::vector<std::pair<std::string, std::string>>& pairs) {
  for (const auto& [c, e] : pairs) {
    bool known = g.find(NodeKind::kConcept, c).has_value();
    NodeId cid = g.add_node(NodeKind::kConcept, c, !known);
    NodeId eid = g.add_node(NodeKind::kInstance, e);
    if (auto err = g.add_edge({cid, eid, 1.0, "external"})) warn(err->message);
  }
}

}  // namespace conceptmine
