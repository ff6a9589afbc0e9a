#pragma once

#include "conceptmine/corpus.hpp"

#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace conceptmine {

// Concept set with an inverted index from every contiguous token n-gram of a
// concept to the concepts containing it. Containment is token-aligned and
// ASCII case-insensitive, so "car" does not hit "cars".
class ConceptIndex {
 public:
  ConceptIndex() = default;
  explicit ConceptIndex(const std::set<std::string>& concepts);
  void add(const std::string& concept_text);

  const std::set<std::string>& concepts() const { return concepts_; }
  // C^x, sorted. Empty when x occurs in no concept.
  const std::vector<std::string>& postings(std::string_view x) const;
  bool contains(std::string_view concept_text, std::string_view x) const;
  // 1/|C^x| when x is contained in c, else 0.
  double p_concept_given_context(std::string_view concept_text, std::string_view x) const;
  std::size_t num_terms() const { return postings_.size(); }

 private:
  std::set<std::string> concepts_;
  std::map<std::string, std::vector<std::string>, std::less<>> postings_;
};

std::string index_key(std::string_view text);

const std::set<std::string>& default_stopwords();
bool is_context_word(const Token& t, const std::set<std::string>& stopwords);

// Same-sentence co-occurrence counts between instances and context words,
// turned into p(x|e) by plain normalization.
class CooccurrenceStats {
 public:
  void observe(const std::string& instance, const std::string& context_word, double count = 1.0);
  static CooccurrenceStats from_counts(
      const std::map<std::string, std::map<std::string, double>>& counts);

  bool has_instance(const std::string& instance) const;
  double p_context_given_instance(const std::string& context_word,
                                  const std::string& instance) const;
  // Full p(.|e); empty when e was never observed.
  std::map<std::string, double> distribution(const std::string& instance) const;
  std::vector<std::string> instances() const;
  std::size_t num_instances() const { return counts_.size(); }

 private:
  std::map<std::string, std::map<std::string, double>> counts_;
  std::map<std::string, double> totals_;
};

// Context words (lowercased, deduplicated, sorted) sharing a sentence with an
// occurrence of `instance` (ASCII case-insensitive), excluding the occurrence's own tokens.
std::vector<std::string> context_words(std::span<const std::vector<Token>> sentences,
                                       const std::string& instance,
                                       const std::set<std::string>& stopwords);

struct CooccurrenceOptions {
  const std::set<std::string>* instance_vocabulary = nullptr;
  const std::set<std::string>* stopwords = nullptr;  // default_stopwords() when null
};

// Instances are vocabulary phrases and noun tokens (the key-instance
// candidates); every other non-stopword token in the sentence is a context
// word for each of them.
CooccurrenceStats build_cooccurrence(std::span<const std::vector<Token>> sentences,
                                     const CooccurrenceOptions& options = {});

// All sentences of a document including its title.
std::vector<std::vector<Token>> document_sentences(const Document& d);

}  // namespace conceptmine
