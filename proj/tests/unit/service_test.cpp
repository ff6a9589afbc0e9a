#include "conceptmine/service.hpp"

#include <gtest/gtest.h>
#include <json.hpp>

using namespace conceptmine;

namespace {

std::shared_ptr<const TaggerModels> tiny_models() {
  auto m = std::make_shared<TaggerModels>();
  m->index = ConceptIndex({"battery cars", "camera phones"});
  m->stats.observe("tesla", "battery", 2);
  m->stats.observe("tesla", "camera", 1);
  auto emb = std::make_shared<EmbeddingTable>(2);
  emb->add("tesla", {1, 0});
  emb->add("battery", {0.9, 0.1});
  m->embeddings = emb;
  m->version = "test";
  return m;
}

}  // namespace

TEST(Service, TagsValidRequest) {
  TagService svc(tiny_models(), std::make_shared<LexiconTokenizer>());
  int status = 0;
  auto body = svc.tag(R"({"title":"Tesla","content":"Tesla battery and camera."})", status);
  EXPECT_EQ(status, 200);
  auto j = nlohmann::json::parse(body);
  ASSERT_TRUE(j["tags"].is_array());
  for (const auto& t : j["tags"]) {
    EXPECT_TRUE(t["concept"].is_string());
    EXPECT_GT(t["score"].get<double>(), 0.0);
  }
  auto health = nlohmann::json::parse(svc.health());
  EXPECT_EQ(health["served"], 1);
  EXPECT_EQ(health["models"]["tagger"], "test");
}

TEST(Service, RejectsBadRequests) {
  TagService svc(tiny_models(), std::make_shared<LexiconTokenizer>());
  for (const char* body : {"{", "[]", R"({"content":"x"})", R"({"title":"t","content":5})"}) {
    int status = 0;
    auto out = nlohmann::json::parse(svc.tag(body, status));
    EXPECT_EQ(status, 400) << body;
    EXPECT_TRUE(out.contains("error"));
  }
}

TEST(Service, HttpRoundTrip) {
  auto svc = std::make_shared<TagService>(tiny_models(), std::make_shared<LexiconTokenizer>());
  TagServer server(svc);
  int port = server.start("127.0.0.1", 0, 2);
  ASSERT_GT(port, 0);
  LoadOptions opt;
  opt.port = port;
  opt.seconds = 0.5;
  opt.concurrency = 2;
  opt.payloads = {R"({"title":"Tesla","content":["Tesla battery."]})"};
  auto r = run_load(opt);
  server.stop();
  EXPECT_GT(r.requests, 0);
  EXPECT_EQ(r.errors, 0);
}
