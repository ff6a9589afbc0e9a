#pragma once

// Planted synthetic worlds for end-to-end checks. Everything is drawn from a
// seeded generator, so a (spec, seed) pair always yields the same world.

#include "conceptmine/corpus.hpp"
#include "conceptmine/tokenizer.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

namespace synth {

using conceptmine::Document;
using conceptmine::LexiconTokenizer;
using conceptmine::QueryLogEntry;

struct LexiconEntry {
  std::string word;
  std::string pos;
  std::string ner;
};

// Lexicon covering every word the generators emit.
std::vector<LexiconEntry> lexicon_entries();
std::shared_ptr<LexiconTokenizer> make_tokenizer();

struct MiningSpec {
  std::size_t num_concepts = 300;
  std::size_t planted_queries = 5000;
  std::size_t distractor_queries = 5000;
  std::uint64_t seed = 2024;
};

struct MiningWorld {
  std::vector<QueryLogEntry> logs;
  std::map<std::string, std::string> gold;  // planted query text -> concept
  std::set<std::string> concepts;
  std::vector<std::string> seed_patterns;
  std::vector<std::string> hidden_patterns;  // all 25, seeds first
  std::size_t raw_planted = 0;               // before duplicate queries merged
  std::size_t raw_distractors = 0;
};

MiningWorld make_mining_world(const MiningSpec& spec,
                              const conceptmine::Tokenizer& tokenizer);

struct TaggingSpec {
  std::size_t num_concepts = 60;
  std::size_t instances_per_concept = 4;
  std::size_t num_documents = 100;
  std::size_t queries_per_concept = 6;
  std::uint64_t seed = 99;
};

struct TaggingWorld {
  std::vector<std::string> topics;  // the topic ids used by documents
  std::set<std::string> concepts;
  std::map<std::string, std::string> concept_topic;
  std::map<std::string, std::vector<std::string>> instances;  // concept -> instances
  std::vector<QueryLogEntry> logs;
  std::vector<Document> documents;
  std::map<std::string, std::set<std::string>> doc_concepts;  // planted
};

TaggingWorld make_tagging_world(const TaggingSpec& spec,
                                const conceptmine::Tokenizer& tokenizer);

// Up to `n` distinct two- or three-word concept strings.
std::vector<std::string> make_concept_strings(std::size_t n, std::uint64_t seed);

}  // namespace synth
