#include "conceptmine/config.hpp"
#include "conceptmine/corpus.hpp"
#include "conceptmine/log.hpp"
#include "conceptmine/text.hpp"
#include "conceptmine/tokenizer.hpp"

#include <gtest/gtest.h>

#include <random>
#include <sstream>

using namespace conceptmine;

namespace {

LogFilter filter_at(const char* day) {
  LogFilter f;
  f.today = *parse_date(day);
  return f;
}

}  // namespace

TEST(Text, NormalizeCollapsesWhitespace) {
  EXPECT_EQ(normalize_text("  iphone \t 15\n pro  "), "iphone 15 pro");
  EXPECT_EQ(normalize_text(""), "");
  // Decomposed e + combining acute composes to the single code point.
  EXPECT_EQ(normalize_text("cafe\xCC\x81"), "caf\xC3\xA9");
}

TEST(Text, NormalizeIsIdempotent) {
  for (const char* s : {"a  b", " x\ty ", "caf\xC3\xA9  au lait", "\xE6\x89\x8B\xE6\x9C\xBA"}) {
    auto once = normalize_text(s);
    EXPECT_EQ(normalize_text(once), once);
  }
}

TEST(Text, SplitAndJoin) {
  EXPECT_EQ(split("a\tb\t", '\t'), (std::vector<std::string>{"a", "b", ""}));
  EXPECT_EQ(split("a||b", "||"), (std::vector<std::string>{"a", "b"}));
  EXPECT_EQ(join({"a", "b", "c"}, " "), "a b c");
  EXPECT_EQ(split_whitespace("  a  b "), (std::vector<std::string>{"a", "b"}));
}

TEST(Text, WordBoundary) {
  EXPECT_TRUE(on_word_boundary("best car deals", 5, 3));
  EXPECT_FALSE(on_word_boundary("best cars", 5, 3));
  EXPECT_FALSE(on_word_boundary("scar", 1, 3));
  EXPECT_TRUE(on_word_boundary("\xE6\x89\x8B\xE6\x9C\xBA", 3, 3));
}

TEST(Tokenizer, DeterministicAndLossless) {
  LexiconTokenizer tok;
  std::string text = "What's the best SUV, for 2024?";
  auto a = tok.tokenize(text);
  auto b = tok.tokenize(text);
  EXPECT_EQ(a, b);
  std::string no_space;
  for (char c : text) {
    if (c != ' ') no_space += c;
  }
  std::string joined;
  for (const auto& t : a) joined += t.surface;
  EXPECT_EQ(joined, no_space);
  for (const auto& t : a) EXPECT_TRUE(TagSet::standard().valid(t)) << t.surface;
}

TEST(Tokenizer, LexiconAndShapeFallbacks) {
  LexiconTokenizer tok(false);
  std::istringstream lex("fast\tJJ\n# comment\nbmw\tNNP\tORG\n");
  EXPECT_EQ(tok.load_lexicon(lex), 2u);
  auto t = tok.tokenize("fast bmw 2024 Cars");
  ASSERT_EQ(t.size(), 4u);
  EXPECT_EQ(t[0].pos, "JJ");
  EXPECT_EQ(t[1].ner, "ORG");
  EXPECT_EQ(t[2].pos, "CD");
  EXPECT_EQ(t[3].pos, "NNP");
}

TEST(Tokenizer, SentenceSplit) {
  auto s = split_sentences("One. Two!\nThree");
  EXPECT_EQ(s, (std::vector<std::string>{"One.", "Two!", "Three"}));
}

TEST(QueryLogs, ClickThresholdIsStrict) {
  LexiconTokenizer tok;
  std::istringstream in(
      "cars\tfive clicks\t5\t2024-06-30\n"
      "cars\tsix clicks\t6\t2024-06-30\n");
  auto load = read_query_logs(in, tok, filter_at("2024-06-30"));
  ASSERT_EQ(load.entries.size(), 1u);
  ASSERT_EQ(load.entries[0].titles.size(), 1u);
  EXPECT_EQ(load.entries[0].titles[0].text, "six clicks");
}

TEST(QueryLogs, WindowIncludesBoundaryDay) {
  LexiconTokenizer tok;
  std::istringstream in(
      "cars\tedge\t9\t2024-05-31\n"
      "cars\ttoo old\t9\t2024-05-30\n"
      "cars\tfuture\t9\t2024-07-01\n");
  auto load = read_query_logs(in, tok, filter_at("2024-06-30"));
  ASSERT_EQ(load.entries.size(), 1u);
  ASSERT_EQ(load.entries[0].titles.size(), 1u);
  EXPECT_EQ(load.entries[0].titles[0].text, "edge");
}

TEST(QueryLogs, ClicksSummedBeforeThreshold) {
  LexiconTokenizer tok;
  std::istringstream in(
      "cars\tt\t3\t2024-06-29\n"
      "cars\tt\t3\t2024-06-30\n");
  auto load = read_query_logs(in, tok, filter_at("2024-06-30"));
  ASSERT_EQ(load.entries[0].titles.size(), 1u);
  EXPECT_EQ(load.entries[0].titles[0].click_count, 6);
}

TEST(QueryLogs, GroupsByNormalizedQueryInFirstAppearanceOrder) {
  LexiconTokenizer tok;
  std::istringstream in(
      "b  query\n"
      "a query\n"
      " b query\tt\t9\t2024-06-30\n");
  auto load = read_query_logs(in, tok, filter_at("2024-06-30"));
  ASSERT_EQ(load.entries.size(), 2u);
  EXPECT_EQ(load.entries[0].query.text, "b query");
  EXPECT_EQ(load.entries[0].query.id, "q1");
  EXPECT_EQ(load.entries[0].titles.size(), 1u);
  EXPECT_EQ(load.entries[1].query.id, "q2");
  EXPECT_TRUE(load.entries[1].titles.empty());
}

TEST(QueryLogs, MalformedLinesReportedNotFatal) {
  LexiconTokenizer tok;
  std::istringstream in(
      "cars\tt\tmany\t2024-06-30\n"
      "cars\tt\t9\tyesterday\n"
      "cars\tt\t9\t2024-06-30\n");
  auto load = read_query_logs(in, tok, filter_at("2024-06-30"));
  EXPECT_EQ(load.errors.size(), 2u);
  EXPECT_EQ(load.entries.size(), 1u);
}

TEST(QueryLogs, RoundTrip) {
  LexiconTokenizer tok;
  std::istringstream in(
      "best suv\tTop SUVs of the year\t12\t2024-06-20\n"
      "best suv\tSUV buying guide\t40\t2024-06-21\n"
      "lonely query\n");
  auto f = filter_at("2024-06-30");
  auto first = read_query_logs(in, tok, f);
  std::ostringstream out;
  write_query_logs(out, first.entries);
  std::istringstream again(out.str());
  auto second = read_query_logs(again, tok, f);
  EXPECT_EQ(first.entries, second.entries);
}

TEST(Documents, StringAndArrayContent) {
  LexiconTokenizer tok;
  std::istringstream in(
      R"({"id":"d1","title":"Cars","content":"One car. Two cars.","topic":"auto"})"
      "\n"
      R"({"id":"d2","title":"Phones","content":["A phone","Another phone"]})"
      "\n"
      "not json\n");
  auto load = read_documents(in, tok);
  ASSERT_EQ(load.documents.size(), 2u);
  EXPECT_EQ(load.documents[0].sentences.size(), 2u);
  EXPECT_EQ(load.documents[0].topic, std::optional<std::string>("auto"));
  EXPECT_EQ(load.documents[1].sentences.size(), 2u);
  EXPECT_FALSE(load.documents[1].topic);
  EXPECT_EQ(load.warnings.size(), 1u);

  std::ostringstream out;
  write_documents(out, load.documents);
  std::istringstream again(out.str());
  EXPECT_EQ(read_documents(again, tok).documents, load.documents);
}

TEST(Candidates, RoundTrip) {
  std::vector<ConceptCandidate> cs{{"fuel efficient cars", CandidateSource::kAlign, "q3", 2.0, {}},
                                   {"bmw suv", CandidateSource::kCrf, "q9", 0.75, {}}};
  std::ostringstream out;
  write_candidates(out, cs);
  std::istringstream in(out.str());
  EXPECT_EQ(read_candidates(in), cs);
}

TEST(Candidates, BadSourceIsReported) {
  std::istringstream in("x\tmagic\t1\tq1\ny\tcrf\t1\tq2\n");
  std::vector<RecordError> errors;
  auto cs = read_candidates(in, &errors);
  EXPECT_EQ(cs.size(), 1u);
  EXPECT_EQ(errors.size(), 1u);
}

TEST(Dates, ParseAndFormat) {
  auto d = parse_date("2024-02-29");
  ASSERT_TRUE(d);
  EXPECT_EQ(format_date(*d), "2024-02-29");
  EXPECT_FALSE(parse_date("2023-02-29"));
  EXPECT_FALSE(parse_date("2024-1-01"));
}

TEST(Config, DefaultsMatchDocumentedValues) {
  std::istringstream in("{}");
  auto c = read_config(in);
  EXPECT_EQ(c.logs.min_clicks, 5);
  EXPECT_EQ(c.logs.window_days, 30);
  EXPECT_DOUBLE_EQ(c.bootstrap.alpha, 0.6);
  EXPECT_DOUBLE_EQ(c.bootstrap.beta, 0.8);
  EXPECT_DOUBLE_EQ(c.bootstrap.delta, 2);
  EXPECT_EQ(c.tagger.k, 10u);
  EXPECT_DOUBLE_EQ(c.tagger.delta_w, 0.5);
  EXPECT_DOUBLE_EQ(c.tagger.delta_u, 0.58);
  EXPECT_EQ(c.tagger.n_titles, 5u);
  EXPECT_DOUBLE_EQ(c.taxonomy.delta_t, 0.3);
  EXPECT_EQ(c.rewrite_budget, 10u);
}

TEST(Config, OverridesSubset) {
  std::istringstream in(R"({"bootstrap":{"alpha":0.5},"tagger":{"delta_u":0.6}})");
  auto c = read_config(in);
  EXPECT_DOUBLE_EQ(c.bootstrap.alpha, 0.5);
  EXPECT_DOUBLE_EQ(c.bootstrap.beta, 0.8);
  EXPECT_DOUBLE_EQ(c.tagger.delta_u, 0.6);
}

TEST(Config, UnknownKeysRejected) {
  for (const char* text : {R"({"bootstrp":{}})", R"({"tagger":{"delta_uu":1}})",
                           R"({"logs":{"today":"June"}})", "not json"}) {
    std::istringstream in(text);
    EXPECT_THROW(read_config(in), std::runtime_error) << text;
  }
}

TEST(Log, SinkCapturesWarnings) {
  std::vector<std::string> seen;
  auto prev = set_warning_sink([&](const std::string& m) { seen.push_back(m); });
  warn("hello");
  set_warning_sink(prev);
  EXPECT_EQ(seen, std::vector<std::string>{"hello"});
}
