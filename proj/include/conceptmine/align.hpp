#pragma once

#include "conceptmine/corpus.hpp"

#include <optional>
#include <span>
#include <vector>

namespace conceptmine {

struct NGramSpan {
  enum class Side { kQuery, kTitle };
  Side side = Side::kTitle;
  std::size_t start = 0;
  std::size_t length = 0;
  std::span<const Token> tokens;

  std::string text() const;
};

struct AlignOptions {
  std::size_t min_len = 2;    // title spans shorter than this are dropped
  std::size_t max_span = 12;  // cap on both query and title span lengths
};

// Title spans t[j, j+m) for which some query span q[i, i+n) has
// t[j] == q[i], t[j+m-1] == q[i+n-1], and q[i, i+n) occurs in t[j, j+m) as an
// in-order subsequence. Sorted by (start, length); min_len is not applied.
std::vector<NGramSpan> aligned_title_spans(std::span<const Token> query,
                                           std::span<const Token> title,
                                           std::size_t max_span = 12);

// One list per title, deduplicated within the title, min_len applied.
std::vector<std::vector<ConceptCandidate>> aligned_candidates_per_title(
    const QueryLogEntry& entry, const AlignOptions& options = {});

// Deduplicated by surface string over all titles; score = number of titles
// that produced the candidate.
std::vector<ConceptCandidate> extract_aligned_candidates(const QueryLogEntry& entry,
                                                         const AlignOptions& options = {});

// Most frequent surface string in the list; ties go to the shorter token
// count, then to the lexicographically smaller string.
std::optional<ConceptCandidate> select_final_candidate(std::span<const ConceptCandidate> candidates);

}  // namespace conceptmine
