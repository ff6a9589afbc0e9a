#include "conceptmine/align.hpp"

#include "conceptmine/text.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace conceptmine {

std::string NGramSpan::text() const {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out.push_back(' ');
    out += tokens[i].surface;
  }
  return out;
}

std::vector<NGramSpan> aligned_title_spans(std::span<const Token> query,
                                           std::span<const Token> title,
                                           std::size_t max_span) {
  std::set<std::pair<std::size_t, std::size_t>> spans;  // (start, end inclusive)
  const std::size_t nq = query.size();
  const std::size_t nt = title.size();
  for (std::size_t i = 0; i < nq; ++i) {
    for (std::size_t j = 0; j < nt; ++j) {
      if (query[i].surface != title[j].surface) continue;
      // Greedy leftmost embedding of q[i..k] into t[j..]; g is where q[k] lands.
      std::size_t g = j;
      for (std::size_t k = i; k < nq && k - i + 1 <= max_span; ++k) {
        if (k > i) {
          std::size_t next = g + 1;
          while (next < nt && title[next].surface != query[k].surface) ++next;
          if (next >= nt) break;
          g = next;
        }
        if (g - j + 1 > max_span) break;
        // Any end e >= g with t[e] == q[k] closes a valid title span.
        for (std::size_t e = g; e < nt && e - j + 1 <= max_span; ++e) {
          if (title[e].surface == query[k].surface) spans.emplace(j, e);
        }
      }
    }
  }
  std::vector<NGramSpan> out;
  out.reserve(spans.size());
  for (auto [start, end] : spans) {
    std::size_t len = end - start + 1;
    out.push_back({NGramSpan::Side::kTitle, start, len, title.subspan(start, len)});
  }
  return out;
}

std::vector<std::vector<ConceptCandidate>> aligned_candidates_per_title(
    const QueryLogEntry& entry, const AlignOptions& options) {
  std::vector<std::vector<ConceptCandidate>> out;
  out.reserve(entry.titles.size());
  for (const auto& title : entry.titles) {
    std::vector<ConceptCandidate> per_title;
    std::set<std::string> seen;
    for (const auto& span :
         aligned_title_spans(entry.query.tokens, title.tokens, options.max_span)) {
      if (span.length < options.min_len) continue;
      std::string text = span.text();
      if (!seen.insert(text).second) continue;
      ConceptCandidate c;
      c.text = std::move(text);
      c.source = CandidateSource::kAlign;
      c.provenance = entry.query.id;
      per_title.push_back(std::move(c));
    }
    out.push_back(std::move(per_title));
  }
  return out;
}

std::vector<ConceptCandidate> extract_aligned_candidates(const QueryLogEntry& entry,
                                                         const AlignOptions& options) {
  std::map<std::string, ConceptCandidate> merged;
  for (auto& per_title : aligned_candidates_per_title(entry, options)) {
    for (auto& c : per_title) {
      auto [it, fresh] = merged.try_emplace(c.text, c);
      if (fresh) {
        it->second.score = 1.0;
      } else {
        it->second.score += 1.0;
      }
    }
  }
  std::vector<ConceptCandidate> out;
  out.reserve(merged.size());
  for (auto& [text, c] : merged) out.push_back(std::move(c));
  return out;
}

std::optional<ConceptCandidate> select_final_candidate(
    std::span<const ConceptCandidate> candidates) {
  if (candidates.empty()) return std::nullopt;
  std::map<std::string, std::pair<std::size_t, std::size_t>> counts;  // text -> (count, first index)
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    auto [it, fresh] = counts.try_emplace(candidates[i].text, 0, i);
    ++it->second.first;
  }
  auto token_len = [](const std::string& s) { return split_whitespace(s).size(); };
  const std::string* best = nullptr;
  std::size_t best_count = 0;
  std::size_t best_len = 0;
  for (const auto& [text, cf] : counts) {
    std::size_t len = token_len(text);
    bool better = !best || cf.first > best_count ||
                  (cf.first == best_count && (len < best_len || (len == best_len && text < *best)));
    if (better) {
      best = &text;
      best_count = cf.first;
      best_len = len;
    }
  }
  return candidates[counts.at(*best).second];
}

}  // namespace conceptmine
