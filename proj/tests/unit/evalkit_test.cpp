#include "conceptmine/evalkit.hpp"
#include "conceptmine/text.hpp"

#include <gtest/gtest.h>

#include <random>
#include <sstream>

using namespace conceptmine;

TEST(Metrics, ExactMatchNormalizes) {
  EXPECT_EQ(exact_match("fuel  efficient cars ", "fuel efficient cars"), 1);
  EXPECT_EQ(exact_match("fuel cars", "fuel efficient cars"), 0);
  EXPECT_EQ(exact_match("", ""), 1);
}

TEST(Metrics, TokenF1Values) {
  LexiconTokenizer tok;
  EXPECT_DOUBLE_EQ(token_f1("fuel efficient cars", "fuel efficient cars", tok), 1.0);
  // 2 shared of 2 predicted and 3 gold: P=1, R=2/3.
  EXPECT_NEAR(token_f1("fuel cars", "fuel efficient cars", tok), 0.8, 1e-12);
  EXPECT_EQ(token_f1("", "", tok), 1.0);
  EXPECT_EQ(token_f1("", "cars", tok), 0.0);
  EXPECT_EQ(token_f1("phones", "cars", tok), 0.0);
  // Multiset overlap: a repeated word only matches as often as it occurs.
  EXPECT_NEAR(token_f1("new new cars", "new cars", tok), 0.8, 1e-12);
}

TEST(Metrics, TokenF1SymmetricAndBounded) {
  LexiconTokenizer tok;
  std::vector<std::string> words{"a", "b", "c", "d"};
  std::mt19937_64 rng(9);
  std::uniform_int_distribution<std::size_t> pick(0, 3);
  std::uniform_int_distribution<int> len(0, 4);
  auto phrase = [&] {
    std::vector<std::string> w;
    for (int i = len(rng); i > 0; --i) w.push_back(words[pick(rng)]);
    return join(w, " ");
  };
  for (int i = 0; i < 500; ++i) {
    auto p = phrase(), g = phrase();
    double f = token_f1(p, g, tok);
    EXPECT_DOUBLE_EQ(f, token_f1(g, p, tok));
    EXPECT_GE(f, 0.0);
    EXPECT_LE(f, 1.0);
    if (exact_match(p, g)) EXPECT_EQ(f, 1.0);
  }
}

TEST(Evaluate, MeansAndOrderInvariance) {
  LexiconTokenizer tok;
  std::vector<EvalSample> samples;
  for (int i = 0; i < 40; ++i) {
    samples.push_back({"q" + std::to_string(i), {}, "gold " + std::to_string(i % 7)});
  }
  ConceptSystem sys = [](const EvalSample& s) {
    return s.query.size() % 2 ? s.gold_concept : std::string("gold");
  };
  auto base = evaluate_run(samples, sys, tok);
  ASSERT_EQ(base.records.size(), samples.size());
  double em = 0.0;
  for (const auto& r : base.records) em += r.exact_match;
  EXPECT_DOUBLE_EQ(base.exact_match, em / static_cast<double>(samples.size()));
  EXPECT_LE(base.exact_match, base.f1);

  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    std::shuffle(samples.begin(), samples.end(), rng);
    auto r = evaluate_run(samples, sys, tok);
    EXPECT_EQ(r.exact_match, base.exact_match);
    EXPECT_EQ(r.f1, base.f1);
  }
}

TEST(Evaluate, EmptyRun) {
  LexiconTokenizer tok;
  auto r = evaluate_run({}, [](const EvalSample&) { return std::string(); }, tok);
  EXPECT_EQ(r.exact_match, 0.0);
  EXPECT_TRUE(r.records.empty());
}

TEST(Uccm, ReadSplitsTitles) {
  std::istringstream in(
      "best fuel cars\tTop fuel efficient cars||Fuel efficient cars 2024\tfuel efficient cars\n"
      "missing gold\tsome title\n");
  std::vector<RecordError> errors;
  auto s = read_uccm(in, &errors);
  ASSERT_EQ(s.size(), 1u);
  EXPECT_EQ(s[0].clicked_titles.size(), 2u);
  EXPECT_EQ(s[0].gold_concept, "fuel efficient cars");
  EXPECT_EQ(errors.size(), 1u);
}

TEST(Report, WritesSummaryAndRecords) {
  LexiconTokenizer tok;
  std::vector<EvalSample> samples{{"q1", {}, "cars"}, {"q2", {}, "fuel cars"}};
  auto r = evaluate_run(samples, [](const EvalSample&) { return std::string("cars"); }, tok);
  std::ostringstream out;
  write_report(out, r);
  EXPECT_NE(out.str().find("exact_match\t0.5"), std::string::npos);
  // Only misses are listed.
  EXPECT_NE(out.str().find("miss\tq2"), std::string::npos);
  EXPECT_EQ(out.str().find("miss\tq1"), std::string::npos);
}
