#include "conceptmine/cooccurrence.hpp"

#include "conceptmine/keyterms.hpp"
#include "conceptmine/text.hpp"

#include <algorithm>

namespace conceptmine {

std::string index_key(std::string_view text) { return ascii_lower(normalize_text(text)); }

ConceptIndex::ConceptIndex(const std::set<std::string>& concepts) {
  for (const auto& c : concepts) add(c);
}

void ConceptIndex::add(const std::string& concept_text) {
  if (!concepts_.insert(concept_text).second) return;
  auto toks = split_whitespace(index_key(concept_text));
  std::set<std::string> grams;
  for (std::size_t i = 0; i < toks.size(); ++i) {
    std::string g;
    for (std::size_t j = i; j < toks.size(); ++j) {
      if (j > i) g += ' ';
      g += toks[j];
      grams.insert(g);
    }
  }
  for (const auto& g : grams) {
    auto& post = postings_[g];
    post.insert(std::lower_bound(post.begin(), post.end(), concept_text), concept_text);
  }
}

const std::vector<std::string>& ConceptIndex::postings(std::string_view x) const {
  static const std::vector<std::string> kEmpty;
  auto it = postings_.find(index_key(x));
  return it == postings_.end() ? kEmpty : it->second;
}

bool ConceptIndex::contains(std::string_view concept_text, std::string_view x) const {
  const auto& post = postings(x);
  return std::binary_search(post.begin(), post.end(), concept_text);
}

double ConceptIndex::p_concept_given_context(std::string_view concept_text,
                                             std::string_view x) const {
  const auto& post = postings(x);
  if (!std::binary_search(post.begin(), post.end(), concept_text)) return 0.0;
  return 1.0 / static_cast<double>(post.size());
}

const std::set<std::string>& default_stopwords() {
  static const std::set<std::string> kWords{
      "a",     "an",    "the",   "and",  "or",    "but",   "of",    "in",   "on",
      "at",    "to",    "for",   "with", "by",    "from",  "as",    "is",   "are",
      "was",   "were",  "be",    "been", "it",    "its",   "this",  "that", "these",
      "those", "i",     "you",   "he",   "she",   "we",    "they",  "my",   "your",
      "his",   "her",   "our",   "their", "what", "which", "who",   "how",  "why",
      "when",  "where", "do",    "does", "did",   "can",   "could", "will", "would",
      "should", "may",  "might", "not",  "no",    "so",    "than",  "too",  "very",
      "about", "into",  "over",  "after", "before", "there", "here", "has", "have",
      "had",   "also",  "just",  "all",  "any",   "some",  "more",  "most", "such"};
  return kWords;
}

bool is_context_word(const Token& t, const std::set<std::string>& stopwords) {
  if (t.pos == "PUNCT") return false;
  bool has_word_char = std::any_of(t.surface.begin(), t.surface.end(), [](char c) {
    return is_ascii_word_char(c) || static_cast<unsigned char>(c) >= 0x80;
  });
  if (!has_word_char) return false;
  return !stopwords.count(ascii_lower(t.surface));
}

void CooccurrenceStats::observe(const std::string& instance, const std::string& context_word,
                                double count) {
  if (count <= 0.0) return;
  counts_[instance][context_word] += count;
  totals_[instance] += count;
}

CooccurrenceStats CooccurrenceStats::from_counts(
    const std::map<std::string, std::map<std::string, double>>& counts) {
  CooccurrenceStats s;
  for (const auto& [e, row] : counts) {
    for (const auto& [x, c] : row) s.observe(e, x, c);
  }
  return s;
}

bool CooccurrenceStats::has_instance(const std::string& instance) const {
  return totals_.count(instance) > 0;
}

double CooccurrenceStats::p_context_given_instance(const std::string& context_word,
                                                   const std::string& instance) const {
  auto row = counts_.find(instance);
  if (row == counts_.end()) return 0.0;
  auto it = row->second.find(context_word);
  if (it == row->second.end()) return 0.0;
  return it->second / totals_.at(instance);
}

std::map<std::string, double> CooccurrenceStats::distribution(const std::string& instance) const {
  std::map<std::string, double> out;
  auto row = counts_.find(instance);
  if (row == counts_.end()) return out;
  double total = totals_.at(instance);
  for (const auto& [x, c] : row->second) out.emplace(x, c / total);
  return out;
}

std::vector<std::string> CooccurrenceStats::instances() const {
  std::vector<std::string> out;
  out.reserve(counts_.size());
  for (const auto& [e, row] : counts_) out.push_back(e);
  return out;
}

std::vector<std::string> context_words(std::span<const std::vector<Token>> sentences,
                                       const std::string& instance,
                                       const std::set<std::string>& stopwords) {
  auto inst = split_whitespace(ascii_lower(instance));
  std::set<std::string> out;
  if (inst.empty()) return {};
  for (const auto& s : sentences) {
    if (s.size() < inst.size()) continue;
    std::vector<bool> covered(s.size(), false);
    bool found = false;
    for (std::size_t i = 0; i + inst.size() <= s.size(); ++i) {
      bool match = true;
      for (std::size_t k = 0; k < inst.size() && match; ++k) {
        match = ascii_lower(s[i + k].surface) == inst[k];
      }
      if (!match) continue;
      found = true;
      for (std::size_t k = 0; k < inst.size(); ++k) covered[i + k] = true;
    }
    if (!found) continue;
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (!covered[i] && is_context_word(s[i], stopwords)) out.insert(ascii_lower(s[i].surface));
    }
  }
  return {out.begin(), out.end()};
}

CooccurrenceStats build_cooccurrence(std::span<const std::vector<Token>> sentences,
                                     const CooccurrenceOptions& options) {
  const auto& stop = options.stopwords ? *options.stopwords : default_stopwords();
  const std::size_t max_phrase = max_phrase_tokens(options.instance_vocabulary);
  CooccurrenceStats stats;
  for (const auto& s : sentences) {
    auto spans = candidate_spans(s, options.instance_vocabulary, max_phrase);
    if (spans.empty()) continue;
    for (const auto& sp : spans) {
      for (std::size_t i = 0; i < s.size(); ++i) {
        if (i >= sp.start && i < sp.start + sp.length) continue;
        if (is_context_word(s[i], stop)) stats.observe(sp.text, ascii_lower(s[i].surface));
      }
    }
  }
  return stats;
}

std::vector<std::vector<Token>> document_sentences(const Document& d) {
  std::vector<std::vector<Token>> out;
  out.reserve(d.sentences.size() + 1);
  if (!d.title.empty()) out.push_back(d.title);
  for (const auto& s : d.sentences) out.push_back(s);
  return out;
}

}  // namespace conceptmine
