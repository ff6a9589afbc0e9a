#include "conceptmine/cooccurrence.hpp"
#include "conceptmine/evalkit.hpp"
#include "conceptmine/tagger.hpp"
#include "conceptmine/text.hpp"
#include "conceptmine/tfidf.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <random>
#include <sstream>

using namespace conceptmine;

namespace {

std::vector<Token> tokens(const std::string& s) { return LexiconTokenizer().tokenize(s); }

Document doc(const std::string& title, const std::vector<std::string>& sentences) {
  Document d;
  d.id = "d";
  d.title = tokens(title);
  for (const auto& s : sentences) d.sentences.push_back(tokens(s));
  return d;
}

}  // namespace

TEST(ConceptIndex, TokenAlignedCaseInsensitiveContainment) {
  ConceptIndex idx({"fuel efficient cars", "cars for kids", "Scar removal"});
  EXPECT_EQ(idx.postings("cars"), (std::vector<std::string>{"cars for kids", "fuel efficient cars"}));
  EXPECT_TRUE(idx.postings("car").empty());
  EXPECT_EQ(idx.postings("SCAR"), std::vector<std::string>{"Scar removal"});
  EXPECT_TRUE(idx.contains("fuel efficient cars", "efficient cars"));
  EXPECT_FALSE(idx.contains("fuel efficient cars", "fuel cars"));
  EXPECT_DOUBLE_EQ(idx.p_concept_given_context("cars for kids", "cars"), 0.5);
  EXPECT_EQ(idx.p_concept_given_context("cars for kids", "fuel"), 0.0);
}

TEST(ConceptIndex, PosteriorOverConceptsSumsToOne) {
  ConceptIndex idx({"fuel efficient cars", "cars for kids", "electric cars", "kids toys"});
  for (const char* x : {"cars", "kids", "electric"}) {
    double sum = 0.0;
    for (const auto& c : idx.concepts()) sum += idx.p_concept_given_context(c, x);
    EXPECT_NEAR(sum, 1.0, 1e-12) << x;
  }
}

TEST(Cooccurrence, DistributionNormalizes) {
  CooccurrenceStats s;
  s.observe("tesla", "battery", 3);
  s.observe("tesla", "range", 1);
  EXPECT_DOUBLE_EQ(s.p_context_given_instance("battery", "tesla"), 0.75);
  EXPECT_EQ(s.p_context_given_instance("battery", "ford"), 0.0);
  double sum = 0.0;
  for (const auto& [x, p] : s.distribution("tesla")) sum += p;
  EXPECT_NEAR(sum, 1.0, 1e-12);
  EXPECT_TRUE(s.distribution("ford").empty());
}

TEST(Cooccurrence, ContextWordsExcludeInstanceAndStopwords) {
  std::vector<std::vector<Token>> sents{tokens("the tesla battery lasts"), tokens("no match here")};
  auto ctx = context_words(sents, "tesla", default_stopwords());
  EXPECT_EQ(std::count(ctx.begin(), ctx.end(), "tesla"), 0);
  EXPECT_EQ(std::count(ctx.begin(), ctx.end(), "the"), 0);
  EXPECT_EQ(std::count(ctx.begin(), ctx.end(), "battery"), 1);
  EXPECT_EQ(std::count(ctx.begin(), ctx.end(), "match"), 0);
  EXPECT_TRUE(std::is_sorted(ctx.begin(), ctx.end()));
}

TEST(Inference, PosteriorMatchesTripleSumOracle) {
  std::mt19937_64 rng(31);
  std::vector<std::string> words{"battery", "range", "screen", "camera", "engine", "price"};
  std::vector<std::string> concepts{"battery range cars", "camera phones", "engine price",
                                    "screen camera", "price"};
  ConceptIndex index(std::set<std::string>(concepts.begin(), concepts.end()));
  std::uniform_int_distribution<int> count(0, 4);
  for (int trial = 0; trial < 50; ++trial) {
    std::map<std::string, std::map<std::string, double>> counts;
    KeyInstanceSet keys{"d", {}};
    InstanceContexts contexts;
    double total = 0.0;
    for (const char* e : {"e1", "e2", "e3"}) {
      for (const auto& w : words) {
        if (int c = count(rng)) counts[e][w] = c;
      }
      double wt = 1.0 + count(rng);
      keys.instances.emplace_back(e, wt);
      total += wt;
      std::vector<std::string> ctx;
      for (const auto& w : words) {
        if (count(rng) > 1) ctx.push_back(w);
      }
      contexts[e] = ctx;
    }
    for (auto& [e, w] : keys.instances) w /= total;
    auto stats = CooccurrenceStats::from_counts(counts);
    auto post = concept_posterior(keys, contexts, stats, index);
    std::map<std::string, double> got(post.begin(), post.end());
    for (const auto& c : concepts) {
      double want = oracle::p_c_given_d(c, concepts, keys.instances, contexts, counts);
      EXPECT_NEAR(got.count(c) ? got[c] : 0.0, want, 1e-12) << c;
    }
  }
}

TEST(Inference, PermutingInstancesLeavesPosteriorUnchanged) {
  ConceptIndex index({"battery cars", "camera phones"});
  std::map<std::string, std::map<std::string, double>> counts{
      {"a", {{"battery", 2}, {"camera", 1}}}, {"b", {{"camera", 4}}}};
  auto stats = CooccurrenceStats::from_counts(counts);
  InstanceContexts ctx{{"a", {"battery", "camera"}}, {"b", {"camera"}}};
  KeyInstanceSet k1{"d", {{"a", 0.3}, {"b", 0.7}}};
  KeyInstanceSet k2{"d", {{"b", 0.7}, {"a", 0.3}}};
  EXPECT_EQ(concept_posterior(k1, ctx, stats, index), concept_posterior(k2, ctx, stats, index));
}

TEST(Inference, TopMAndEmptyKeys) {
  auto d = doc("Tesla", {"Tesla battery range is long.", "Tesla camera works."});
  ConceptIndex index({"battery cars", "range rover", "camera phones", "long drives"});
  CooccurrenceStats stats;
  for (const char* x : {"battery", "range", "camera", "long"}) stats.observe("tesla", x);
  KeyInstanceSet keys{"d", {{"tesla", 1.0}}};
  auto all = tag_by_inference(d, keys, stats, index, 10);
  EXPECT_EQ(all.size(), 4u);
  auto top = tag_by_inference(d, keys, stats, index, 3);
  EXPECT_EQ(top.size(), 3u);
  EXPECT_TRUE(tag_by_inference(d, KeyInstanceSet{"d", {}}, stats, index).empty());
}

TEST(Tfidf, IdfClampedAtZero) {
  DocumentFrequency df;
  std::vector<std::string> a{"cars", "fast"}, b{"cars"}, c{"phones"};
  df.add_document(a);
  df.add_document(b);
  df.add_document(c);
  EXPECT_EQ(df.num_documents(), 3u);
  EXPECT_EQ(df.df("cars"), 2u);
  EXPECT_EQ(df.idf("cars"), 0.0);  // ln(3/3)
  EXPECT_NEAR(df.idf("fast"), std::log(1.5), 1e-12);
  EXPECT_NEAR(df.idf("unseen"), std::log(3.0), 1e-12);
  auto v = tfidf_vector(std::vector<std::string>{"cars", "fast", "fast"}, df);
  EXPECT_FALSE(v.count("cars"));
  EXPECT_NEAR(v.at("fast"), 2 * std::log(1.5), 1e-12);
}

TEST(Tfidf, CosineProperties) {
  SparseVector a{{"x", 1}, {"y", 2}}, b{{"y", 4}, {"x", 2}}, c{{"z", 1}};
  EXPECT_NEAR(sparse_cosine(a, b), 1.0, 1e-12);
  EXPECT_EQ(sparse_cosine(a, c), 0.0);
  EXPECT_EQ(sparse_cosine(a, {}), 0.0);
  EXPECT_DOUBLE_EQ(sparse_cosine(a, c), sparse_cosine(c, a));
}

TEST(Matching, EnrichedConceptUsesTopClickedTitles) {
  LexiconTokenizer tok;
  std::vector<QueryLogEntry> logs(2);
  logs[0].query = {"q1", "best electric cars", tok.tokenize("best electric cars")};
  logs[0].titles = {{"Top EVs", tok.tokenize("Top EVs"), 30, {}},
                    {"Old list", tok.tokenize("Old list"), 6, {}}};
  logs[1].query = {"q2", "electric cars 2024", tok.tokenize("electric cars 2024")};
  logs[1].titles = {{"Top EVs", tok.tokenize("Top EVs"), 10, {}}};
  DocumentFrequency df;
  for (const char* t : {"top evs", "old list", "phones"}) {
    auto terms = split_whitespace(t);
    df.add_document(terms);
  }
  auto ec = enrich_concept("electric cars", logs, 1, df);
  ASSERT_EQ(ec.titles.size(), 1u);
  EXPECT_EQ(ec.titles[0], (std::pair<std::string, long long>{"Top EVs", 40}));
  EXPECT_TRUE(ec.vector.count("evs"));
  EXPECT_FALSE(ec.vector.count("old"));
}

TEST(Matching, ThresholdMonotone) {
  TaxonomyGraph g;
  auto inst = g.add_node(NodeKind::kInstance, "tesla");
  for (const char* c : {"electric cars", "luxury cars", "phone brands"}) {
    g.add_edge({g.add_node(NodeKind::kConcept, c), inst, 1.0, "test"});
  }
  DocumentFrequency df;
  for (const char* t : {"electric cars review", "luxury watches", "phone deals", "tesla news"}) {
    auto terms = title_terms(tokens(t));
    df.add_document(terms);
  }
  std::map<std::string, EnrichedConcept> enriched;
  for (const char* c : {"electric cars", "luxury cars", "phone brands"}) {
    enriched[c] = enrich_concept(c, {}, 0, df);
  }
  auto d = doc("Tesla electric cars review", {});
  KeyInstanceSet keys{"d", {{"tesla", 1.0}}};
  std::size_t prev = 100;
  for (double du : {0.0, 0.2, 0.4, 0.58, 0.8, 1.0}) {
    auto tags = tag_by_matching(d, keys, g, enriched, du, df);
    EXPECT_LE(tags.size(), prev);
    for (const auto& [c, s] : tags) EXPECT_GT(s, du);
    prev = tags.size();
  }
  EXPECT_TRUE(tag_by_matching(d, KeyInstanceSet{"d", {{"ford", 1.0}}}, g, enriched, 0.0, df).empty());
}

TEST(Rewrite, QuotaIsCeilOfBudgetOverK) {
  for (std::size_t budget = 1; budget <= 25; ++budget) {
    for (std::size_t k = 1; k <= 12; ++k) {
      std::vector<std::string> inst;
      for (std::size_t i = 0; i < k; ++i) inst.push_back("e" + std::to_string(i));
      auto plan = rewrite_query("best phones", "phones", inst, budget);
      ASSERT_EQ(plan.queries.size(), k);
      for (const auto& q : plan.queries) {
        EXPECT_EQ(q.quota, (budget + k - 1) / k);
        EXPECT_GE(q.quota * k, budget);
      }
      EXPECT_EQ(plan.queries[0].text, "best phones e0");
    }
  }
  auto plain = rewrite_query("best phones", "phones", {}, 10);
  ASSERT_EQ(plain.queries.size(), 1u);
  EXPECT_EQ(plain.queries[0].quota, 10u);
  EXPECT_THROW(rewrite_query("q", "c", {"e"}, 0), std::invalid_argument);
}

TEST(Rewrite, CollectDedupsAndCapsBudget) {
  struct Backend : SearchBackend {
    std::vector<std::string> search(const std::string& q, std::size_t n) const override {
      std::vector<std::string> out{"shared"};
      for (std::size_t i = 0; i < n + 3; ++i) out.push_back(q + "#" + std::to_string(i));
      return out;
    }
  } backend;
  auto plan = rewrite_query("q", "c", {"a", "b", "c"}, 7);
  auto r = collect_results(plan, backend);
  EXPECT_EQ(r.size(), 7u);
  EXPECT_EQ(std::count(r.begin(), r.end(), "shared"), 1);
  EXPECT_EQ(r[0], "shared");
}

TEST(Tagged, WriteFormat) {
  std::ostringstream out;
  write_tagged(out, {{"d1", {{"electric cars", 0.75, TagMethod::kMatching}}, std::nullopt}});
  EXPECT_EQ(out.str(), "d1\telectric cars\t0.75\tmatching\n");
}
