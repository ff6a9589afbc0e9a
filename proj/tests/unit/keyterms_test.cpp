#include "conceptmine/embedding.hpp"
#include "conceptmine/keyterms.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

using namespace conceptmine;

namespace {

Document doc(const std::string& title, const std::vector<std::string>& sentences) {
  LexiconTokenizer tok;
  Document d;
  d.id = "d1";
  d.title = tok.tokenize(title);
  for (const auto& s : sentences) d.sentences.push_back(tok.tokenize(s));
  return d;
}

std::vector<std::vector<double>> random_symmetric(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<std::vector<double>> w(n, std::vector<double>(n, 0.0));
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) w[a][b] = w[b][a] = u(rng);
  }
  return w;
}

}  // namespace

TEST(TextRank, FixedPointAndMassConservation) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    std::size_t n = 2 + trial % 9;
    auto w = random_symmetric(rng, n);
    auto r = textrank(w, 0.85, 1e-10);
    ASSERT_LT(r.iterations, 10000);
    double sum = std::accumulate(r.scores.begin(), r.scores.end(), 0.0);
    EXPECT_NEAR(sum, static_cast<double>(n), 1e-6);
    for (std::size_t i = 0; i < n; ++i) {
      double acc = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        double out = std::accumulate(w[j].begin(), w[j].end(), 0.0);
        if (j != i) acc += w[j][i] / out * r.scores[j];
      }
      EXPECT_NEAR(r.scores[i], 0.15 + 0.85 * acc, 1e-8);
    }
  }
}

TEST(TextRank, DeltasShrinkGeometrically) {
  std::mt19937_64 rng(22);
  auto r = textrank(random_symmetric(rng, 8), 0.85, 1e-12);
  ASSERT_GT(r.l1_deltas.size(), 3u);
  // Contraction factor is at most the damping.
  for (std::size_t i = 2; i < r.l1_deltas.size(); ++i) {
    EXPECT_LE(r.l1_deltas[i], 0.85 * r.l1_deltas[i - 1] + 1e-12);
  }
}

TEST(TextRank, UniformGraphGivesEqualScores) {
  std::vector<std::vector<double>> w(4, std::vector<double>(4, 1.0));
  for (std::size_t i = 0; i < 4; ++i) w[i][i] = 5.0;  // self loops are ignored
  auto r = textrank(w, 0.85, 1e-12);
  for (double s : r.scores) EXPECT_NEAR(s, 1.0, 1e-9);
}

TEST(TextRank, IsolatedNodeKeepsTeleportMass) {
  std::vector<std::vector<double>> w{{0, 1, 0}, {1, 0, 0}, {0, 0, 0}};
  auto r = textrank(w, 0.85, 1e-12);
  EXPECT_NEAR(r.scores[2], 0.15, 1e-12);
}

TEST(Ranker, MonotoneInEveryFeature) {
  LinearTermRanker ranker;
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 500; ++i) {
    TermFeatures a{u(rng), u(rng), u(rng), u(rng), u(rng)};
    TermFeatures b = a;
    b.topic_match += u(rng);
    b.in_title += u(rng);
    b.frequency_share += u(rng);
    EXPECT_GE(ranker.rank(b), ranker.rank(a));
  }
}

TEST(ScoreTerms, NounCandidatesWithFeatures) {
  auto d = doc("Hybrid cars", {"The cars are fast.", "Batteries power cars."});
  auto terms = score_terms(d);
  std::map<std::string, TermScore> by;
  for (const auto& t : terms) by[t.term] = t;
  ASSERT_TRUE(by.count("cars"));
  EXPECT_EQ(by["cars"].count, 3u);
  EXPECT_EQ(by["cars"].features.in_title, 1.0);
  EXPECT_DOUBLE_EQ(by["cars"].features.sentence_coverage, 1.0);
  EXPECT_FALSE(by.count("the"));
  double shares = 0.0;
  for (const auto& t : terms) shares += t.features.frequency_share;
  EXPECT_NEAR(shares, 1.0, 1e-12);
  for (std::size_t i = 1; i < terms.size(); ++i) {
    EXPECT_GE(terms[i - 1].base_score, terms[i].base_score);
  }
}

TEST(ScoreTerms, VocabularyPhrasesMatchLongestFirst) {
  std::set<std::string> vocab{"model s", "model s plaid"};
  KeytermContext ctx;
  ctx.instance_vocabulary = &vocab;
  auto d = doc("Model S Plaid review", {"The Model S is quick."});
  std::set<std::string> terms;
  for (const auto& t : score_terms(d, ctx)) terms.insert(t.term);
  EXPECT_TRUE(terms.count("model s plaid"));
  EXPECT_TRUE(terms.count("model s"));
  EXPECT_FALSE(terms.count("plaid"));
}

TEST(ScoreTerms, EmptyDocument) { EXPECT_TRUE(score_terms(Document{}).empty()); }

TEST(Rerank, NormalizedAndIndependentOfInputOrder) {
  EmbeddingTable emb(2);
  emb.add("cars", {1, 0});
  emb.add("trucks", {0.9, 0.1});
  emb.add("phones", {0, 1});
  emb.add("tablets", {0.2, 1});
  std::vector<TermScore> terms;
  for (const char* t : {"cars", "trucks", "phones", "tablets", "oov"}) {
    TermScore s;
    s.term = t;
    s.base_score = static_cast<double>(terms.size());
    terms.push_back(s);
  }
  auto a = rerank_textrank(terms, emb, 10);
  std::reverse(terms.begin(), terms.end());
  auto b = rerank_textrank(terms, emb, 10);
  ASSERT_EQ(a.size(), 5u);
  double lo = 1, hi = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].term, b[i].term);
    EXPECT_DOUBLE_EQ(*a[i].textrank_score, *b[i].textrank_score);
    lo = std::min(lo, *a[i].textrank_score);
    hi = std::max(hi, *a[i].textrank_score);
  }
  EXPECT_EQ(lo, 0.0);
  EXPECT_EQ(hi, 1.0);
  EXPECT_EQ(a.back().term, "oov");
}

TEST(Rerank, KeepsOnlyTopK) {
  EmbeddingTable emb(1);
  std::vector<TermScore> terms(15);
  for (std::size_t i = 0; i < terms.size(); ++i) {
    terms[i].term = "t" + std::to_string(i);
    terms[i].base_score = static_cast<double>(i);
  }
  auto r = rerank_textrank(terms, emb, 10);
  EXPECT_EQ(r.size(), 10u);
  for (const auto& t : r) EXPECT_GE(t.base_score, 5.0);
}

TEST(KeyInstances, StrictThresholdAndCountWeights) {
  std::vector<TermScore> ranked(3);
  ranked[0].term = "a";
  ranked[0].textrank_score = 1.0;
  ranked[0].count = 3;
  ranked[1].term = "b";
  ranked[1].textrank_score = 0.5;  // exactly delta_w: dropped
  ranked[1].count = 9;
  ranked[2].term = "c";
  ranked[2].textrank_score = 0.7;
  ranked[2].count = 1;
  auto k = select_key_instances("d", ranked, 0.5);
  ASSERT_EQ(k.instances.size(), 2u);
  EXPECT_EQ(k.instances[0].first, "a");
  EXPECT_DOUBLE_EQ(k.instances[0].second, 0.75);
  EXPECT_DOUBLE_EQ(k.instances[1].second, 0.25);
}

TEST(KeyInstances, RaisingDeltaShrinksSet) {
  EmbeddingTable emb(2);
  emb.add("cars", {1, 0});
  emb.add("engines", {0.8, 0.2});
  emb.add("roads", {0.5, 0.5});
  auto d = doc("Cars and engines", {"Cars need engines and roads.", "Roads for cars."});
  std::size_t prev = 100;
  for (double dw : {0.0, 0.25, 0.5, 0.75, 0.99}) {
    auto k = extract_key_instances(d, emb, 10, dw);
    EXPECT_LE(k.instances.size(), prev);
    prev = k.instances.size();
  }
}

TEST(Embedding, CosineAndLookupFallbacks) {
  EXPECT_NEAR(cosine(std::vector<double>{1, 0}, std::vector<double>{0, 1}), 0.0, 1e-12);
  EXPECT_NEAR(cosine(std::vector<double>{2, 0}, std::vector<double>{1, 0}), 1.0, 1e-12);
  EXPECT_EQ(cosine(std::vector<double>{0, 0}, std::vector<double>{1, 0}), 0.0);
  EmbeddingTable emb(2);
  emb.add("fuel", {1, 0});
  emb.add("cars", {0, 1});
  EXPECT_TRUE(emb.vector_of("Fuel"));
  auto mean = emb.vector_of("fuel cars");
  ASSERT_TRUE(mean);
  EXPECT_EQ(*mean, (std::vector<double>{0.5, 0.5}));
  EXPECT_FALSE(emb.vector_of("fuel trucks"));

  std::stringstream buf;
  emb.save(buf);
  auto back = EmbeddingTable::load(buf);
  EXPECT_EQ(back.dim(), 2u);
  EXPECT_EQ(*back.vector_of("cars"), *emb.vector_of("cars"));
}

TEST(Embedding, PpmiSvdRowsAreUnitLengthAndSeparateClusters) {
  LexiconTokenizer tok;
  std::vector<std::vector<Token>> sentences;
  for (int i = 0; i < 40; ++i) {
    sentences.push_back(tok.tokenize("fast cars need strong engines"));
    sentences.push_back(tok.tokenize("smart phones need bright screens"));
  }
  PpmiSvdOptions opt;
  opt.dim = 4;
  auto emb = train_ppmi_svd(sentences, opt);
  auto cars = *emb.vector_of("cars"), engines = *emb.vector_of("engines");
  auto screens = *emb.vector_of("screens");
  double norm = std::sqrt(std::inner_product(cars.begin(), cars.end(), cars.begin(), 0.0));
  EXPECT_NEAR(norm, 1.0, 1e-9);
  EXPECT_GT(cosine(cars, engines), cosine(cars, screens));
}
