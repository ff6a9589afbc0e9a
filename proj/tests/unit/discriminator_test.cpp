#include "conceptmine/discriminator.hpp"

#include <gtest/gtest.h>

#include <random>
#include <sstream>

using namespace conceptmine;

namespace {

QueryLogEntry entry(const std::string& q, const std::vector<std::pair<std::string, long long>>& titles) {
  LexiconTokenizer tok;
  QueryLogEntry e;
  e.query = {"q", q, tok.tokenize(q)};
  for (const auto& [t, n] : titles) e.titles.push_back({t, tok.tokenize(t), n, {}});
  return e;
}

ConceptFeatures features(bool as_query, long long clicks, std::vector<std::string> words) {
  ConceptFeatures f;
  f.appeared_as_query = as_query;
  f.search_count = clicks;
  for (const auto& w : words) f.bow[w] += 1.0;
  f.topic_dist.assign(2, 0.0);
  return f;
}

// Positives appear as queries with clicks and name a head noun; negatives
// are modifier fragments that never appear alone.
std::vector<std::pair<ConceptFeatures, bool>> toy_data(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<long long> clicks(20, 200);
  std::vector<std::string> mods{"cheap", "fast", "red", "small", "new", "used"};
  std::vector<std::string> heads{"cars", "phones", "shoes", "laptops"};
  std::vector<std::pair<ConceptFeatures, bool>> out;
  for (const auto& m : mods) {
    for (const auto& h : heads) out.push_back({features(true, clicks(rng), {m, h}), true});
    out.push_back({features(false, 0, {m}), false});
    out.push_back({features(false, 0, {m, "very"}), false});
  }
  return out;
}

}  // namespace

TEST(Features, FromLogs) {
  std::vector<QueryLogEntry> logs{entry("fuel cars", {{"a", 10}, {"b", 7}}), entry("other", {})};
  TopicOf topic = [](const ClickedTitle& t) -> std::optional<std::size_t> {
    if (t.text == "a") return 1;
    return std::nullopt;
  };
  auto f = featurize_concept({"Fuel  cars", CandidateSource::kAlign, "", 1, {}}, logs, topic, 3);
  EXPECT_FALSE(f.appeared_as_query);  // grouping key is case-sensitive
  auto g = featurize_concept({"fuel cars", CandidateSource::kAlign, "", 1, {}}, logs, topic, 3);
  EXPECT_TRUE(g.appeared_as_query);
  EXPECT_EQ(g.search_count, 17);
  EXPECT_EQ(g.bow.at("fuel"), 1.0);
  EXPECT_EQ(g.topic_dist, (std::vector<double>{0, 1, 0}));
  auto h = featurize_concept({"nothing here", CandidateSource::kAlign, "", 1, {}}, logs, topic, 3);
  EXPECT_EQ(h.topic_dist, (std::vector<double>{0, 0, 0}));
}

TEST(Quality, NeedsBothClasses) {
  std::vector<std::pair<ConceptFeatures, bool>> one{{features(true, 5, {"a"}), true},
                                                    {features(true, 9, {"b"}), true}};
  EXPECT_THROW(train_quality(one), std::invalid_argument);
}

TEST(Quality, SeparatesToyData) {
  auto data = toy_data(1);
  auto model = train_quality(data);
  for (const auto& [f, y] : data) EXPECT_EQ(model.score(f) >= model.threshold(), y);
  EXPECT_GE(model.training_accuracy(), 0.99);
  EXPECT_GE(model.holdout_accuracy(), 0.8);
}

TEST(Quality, ScoresAreProbabilities) {
  auto model = train_quality(toy_data(2));
  for (const auto& [f, y] : toy_data(3)) {
    double s = model.score(f);
    EXPECT_GE(s, 0.0);
    EXPECT_LE(s, 1.0);
  }
}

TEST(Quality, LabelFlipMirrorsScores) {
  QualityOptions opt;
  opt.use_booster = false;
  opt.max_iters = 2000;
  auto data = toy_data(4);
  auto flipped = data;
  for (auto& [f, y] : flipped) y = !y;
  auto a = train_quality(data, opt);
  auto b = train_quality(flipped, opt);
  for (const auto& [f, y] : data) EXPECT_NEAR(a.score(f) + b.score(f), 1.0, 1e-3);
}

TEST(Quality, GateIsIdempotentAndThresholdMonotone) {
  auto model = train_quality(toy_data(5));
  ConceptCandidate c{"cheap cars", CandidateSource::kCrf, "q1", 1, {}};
  auto f = features(true, 50, {"cheap", "cars"});
  auto once = gate(model, c, f);
  auto twice = gate(model, once, f);
  EXPECT_EQ(once, twice);
  ASSERT_TRUE(once.accepted);

  // Raising the threshold can only turn acceptances into rejections.
  auto data = toy_data(6);
  std::size_t prev = data.size() + 1;
  for (double t : {0.1, 0.3, 0.5, 0.7, 0.9}) {
    model.set_threshold(t);
    std::size_t accepted = 0;
    for (const auto& [g, y] : data) accepted += *gate(model, c, g).accepted;
    EXPECT_LE(accepted, prev);
    prev = accepted;
  }
  EXPECT_THROW(model.set_threshold(1.0), std::invalid_argument);
}

TEST(Quality, SaveLoadKeepsScores) {
  auto model = train_quality(toy_data(7));
  std::stringstream buf;
  model.save(buf);
  auto loaded = QualityModel::load(buf);
  for (const auto& [f, y] : toy_data(8)) EXPECT_DOUBLE_EQ(loaded.score(f), model.score(f));
  EXPECT_EQ(loaded.threshold(), model.threshold());
  EXPECT_EQ(loaded.stumps().size(), model.stumps().size());
}

TEST(Quality, UnseenWordsAreIgnored) {
  auto model = train_quality(toy_data(9));
  auto s = model.score(features(false, 0, {"zzz", "qqq"}));
  EXPECT_TRUE(std::isfinite(s));
}

TEST(Quality, LabeledFileParsing) {
  std::istringstream in("fuel cars\t1\nfuel\t0\nbad line\nx\t2\n");
  std::vector<RecordError> errors;
  auto rows = read_labeled_concepts(in, &errors);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_TRUE(rows[0].second);
  EXPECT_FALSE(rows[1].second);
  EXPECT_EQ(errors.size(), 2u);
}
