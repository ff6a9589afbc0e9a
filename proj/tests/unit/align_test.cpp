#include "conceptmine/align.hpp"

#include "oracles.hpp"
#include "synthetic.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace conceptmine;

namespace {

QueryLogEntry entry(const std::string& q, const std::vector<std::string>& titles) {
  LexiconTokenizer tok;
  QueryLogEntry e;
  e.query = {"q1", q, tok.tokenize(q)};
  for (const auto& t : titles) e.titles.push_back({t, tok.tokenize(t), 10, {}});
  return e;
}

std::set<std::string> texts(const std::vector<ConceptCandidate>& cs) {
  std::set<std::string> out;
  for (const auto& c : cs) out.insert(c.text);
  return out;
}

}  // namespace

TEST(Align, GapInTitleIsBridged) {
  auto e = entry("fuel cars", {"top fuel efficient cars today"});
  auto cs = extract_aligned_candidates(e);
  EXPECT_TRUE(texts(cs).count("fuel efficient cars"));
}

TEST(Align, MinLenDropsSingleTokens) {
  auto e = entry("cars", {"cars for sale"});
  EXPECT_TRUE(extract_aligned_candidates(e).empty());
  AlignOptions one;
  one.min_len = 1;
  EXPECT_EQ(texts(extract_aligned_candidates(e, one)), std::set<std::string>{"cars"});
}

TEST(Align, ScoreCountsTitles) {
  auto e = entry("fuel cars", {"fuel efficient cars", "best fuel efficient cars", "fuel cars"});
  for (const auto& c : extract_aligned_candidates(e)) {
    if (c.text == "fuel efficient cars") EXPECT_EQ(c.score, 2.0);
    if (c.text == "fuel cars") EXPECT_EQ(c.score, 1.0);
    EXPECT_EQ(c.source, CandidateSource::kAlign);
  }
}

TEST(Align, MatchesBruteForceOracle) {
  std::mt19937_64 rng(11);
  std::vector<std::string> vocab{"a", "b", "c", "d", "e"};
  std::uniform_int_distribution<std::size_t> pick(0, vocab.size() - 1);
  std::uniform_int_distribution<int> len(1, 6);
  for (int trial = 0; trial < 300; ++trial) {
    auto sentence = [&] {
      std::vector<std::string> w;
      for (int i = len(rng); i > 0; --i) w.push_back(vocab[pick(rng)]);
      return join(w, " ");
    };
    auto e = entry(sentence(), {sentence(), sentence()});
    AlignOptions opt;
    EXPECT_EQ(texts(extract_aligned_candidates(e, opt)), oracle::aligned_candidates(e, opt.min_len))
        << e.query.text << " | " << e.titles[0].text << " | " << e.titles[1].text;
  }
}

TEST(Align, SpansSortedAndEndpointsMatch) {
  LexiconTokenizer tok;
  auto q = tok.tokenize("a b a");
  auto t = tok.tokenize("a x b a b");
  auto spans = aligned_title_spans(q, t);
  for (std::size_t i = 1; i < spans.size(); ++i) {
    EXPECT_LE(std::make_pair(spans[i - 1].start, spans[i - 1].length),
              std::make_pair(spans[i].start, spans[i].length));
  }
  for (const auto& s : spans) {
    EXPECT_EQ(s.side, NGramSpan::Side::kTitle);
    EXPECT_EQ(s.tokens.size(), s.length);
  }
}

TEST(Align, FinalCandidateTieBreaks) {
  std::vector<ConceptCandidate> cs{{"b c d", CandidateSource::kAlign, "q1", 1, {}},
                                   {"a b", CandidateSource::kAlign, "q1", 1, {}},
                                   {"z y", CandidateSource::kAlign, "q1", 1, {}},
                                   {"b c d", CandidateSource::kAlign, "q1", 1, {}}};
  EXPECT_EQ(select_final_candidate(cs)->text, "b c d");
  cs.pop_back();
  // One vote each: shorter token count, then lexicographic.
  EXPECT_EQ(select_final_candidate(cs)->text, "a b");
  EXPECT_FALSE(select_final_candidate({}));
}

TEST(Align, NoTitlesNoCandidates) {
  auto e = entry("fuel cars", {});
  EXPECT_TRUE(extract_aligned_candidates(e).empty());
  EXPECT_TRUE(aligned_candidates_per_title(e).empty());
}
