#pragma once

#include "conceptmine/corpus.hpp"

#include <iosfwd>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

namespace conceptmine {

enum class PatternOrigin { kSeed, kInduced };

// Single-slot surface template "prefix{X}suffix". The slot must be filled by
// a non-empty span, and the template must anchor at least one side.
struct Pattern {
  std::string prefix;
  std::string suffix;
  PatternOrigin origin = PatternOrigin::kSeed;

  static constexpr std::string_view kSlot = "{X}";

  static std::optional<Pattern> parse(std::string_view tmpl,
                                      PatternOrigin origin = PatternOrigin::kSeed);
  std::string render() const { return prefix + std::string(kSlot) + suffix; }

  bool operator==(const Pattern& o) const { return prefix == o.prefix && suffix == o.suffix; }
  bool operator<(const Pattern& o) const { return render() < o.render(); }
};

struct PatternStats {
  std::size_t n_s = 0;  // known concepts the pattern extracts
  std::size_t n_e = 0;  // new concepts the pattern extracts
};

struct ScoredPattern {
  Pattern pattern;
  PatternStats stats;
};

// Returns the slot filler when the whole query matches the template. The
// filler is trimmed and must sit on word boundaries.
std::optional<ConceptCandidate> apply_pattern(const Pattern& p, const Query& q);

// Every word-aligned occurrence of a known concept in a query yields the
// pattern that replaces it with the slot. Stats count distinct concept
// strings over all queries. Output is sorted by template.
std::vector<ScoredPattern> induce_patterns(const std::set<std::string>& concepts,
                                           std::span<const Query> queries);

// Keep iff n_e > 0, alpha < n_s/n_e < beta and n_s > delta.
bool filter_pattern(const PatternStats& stats, double alpha, double beta, double delta);

struct BootstrapOptions {
  int max_iters = 10;
  double alpha = 0.6;
  double beta = 0.8;
  double delta = 2;
};

struct BootstrapResult {
  std::vector<ConceptCandidate> concepts;  // sorted by text, score = supporting queries
  std::vector<Pattern> patterns;           // seeds first, then induced in acceptance order
  // (concepts, patterns) after the seed pass and after each iteration
  std::vector<std::pair<std::size_t, std::size_t>> growth;
  int iterations = 0;
};

BootstrapResult run_bootstrap(const std::vector<Pattern>& seeds, std::span<const Query> queries,
                              const BootstrapOptions& options = {});

// One template per line; blank lines and '#' comments ignored.
std::vector<Pattern> read_seed_patterns(std::istream& in);
std::vector<Pattern> load_seed_patterns(const std::string& path);

}  // namespace conceptmine
