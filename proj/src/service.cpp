#include "conceptmine/service.hpp"

#include "conceptmine/text.hpp"

#include <httplib.h>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <mutex>
#include <stdexcept>

namespace conceptmine {

using nlohmann::json;

TagService::TagService(std::shared_ptr<const TaggerModels> models,
                       std::shared_ptr<const Tokenizer> tokenizer)
    : models_(std::move(models)), tokenizer_(std::move(tokenizer)) {
  if (!models_ || !tokenizer_) throw std::invalid_argument("TagService needs models and a tokenizer");
}

std::string TagService::tag(std::string_view body, int& status) const {
  json req;
  try {
    req = json::parse(body);
  } catch (const json::parse_error& e) {
    status = 400;
    return json{{"error", std::string("invalid JSON: ") + e.what()}}.dump();
  }
  if (!req.is_object() || !req.contains("title") || !req["title"].is_string()) {
    status = 400;
    return json{{"error", "request needs a string field 'title'"}}.dump();
  }
  Document d;
  d.id = req.value("id", std::string("request"));
  d.title = tokenizer_->tokenize(normalize_text(req["title"].get<std::string>()));
  if (req.contains("author") && req["author"].is_string()) d.author = req["author"];
  std::vector<std::string> sentences;
  if (req.contains("content")) {
    const auto& content = req["content"];
    if (content.is_string()) {
      sentences = split_sentences(content.get<std::string>());
    } else if (content.is_array()) {
      for (const auto& s : content) {
        if (s.is_string()) sentences.push_back(s.get<std::string>());
      }
    } else if (!content.is_null()) {
      status = 400;
      return json{{"error", "'content' must be a string or an array of strings"}}.dump();
    }
  }
  for (const auto& s : sentences) {
    auto toks = tokenizer_->tokenize(s);
    if (!toks.empty()) d.sentences.push_back(std::move(toks));
  }
  auto tagged = tag_document(d, *models_);
  json tags = json::array();
  for (const auto& t : tagged.tags) {
    tags.push_back({{"concept", t.concept_text},
                    {"score", t.score},
                    {"method", std::string(to_string(t.method))}});
  }
  ++served_;
  status = 200;
  return json{{"tags", std::move(tags)}}.dump();
}

std::string TagService::health() const {
  return json{{"status", "ok"},
              {"models",
               {{"tagger", models_->version},
                {"concepts", models_->index.concepts().size()},
                {"instances", models_->instance_vocabulary.size()},
                {"taxonomy_edges", models_->taxonomy.num_edges()}}},
              {"served", served_.load()}}
      .dump();
}

struct TagServer::Impl {
  std::shared_ptr<const TagService> service;
  httplib::Server server;
  std::thread thread;
};

TagServer::TagServer(std::shared_ptr<const TagService> service) : impl_(std::make_unique<Impl>()) {
  impl_->service = std::move(service);
  auto svc = impl_->service;
  impl_->server.Post("/tag", [svc](const httplib::Request& req, httplib::Response& res) {
    int status = 500;
    auto body = svc->tag(req.body, status);
    res.status = status;
    res.set_content(body, "application/json");
  });
  impl_->server.Get("/health", [svc](const httplib::Request&, httplib::Response& res) {
    res.set_content(svc->health(), "application/json");
  });
}

TagServer::~TagServer() { stop(); }

namespace {

void configure_pool(httplib::Server& server, int threads) {
  std::size_t n = static_cast<std::size_t>(std::max(1, threads));
  server.new_task_queue = [n] { return new httplib::ThreadPool(n); };
}

}  // namespace

int TagServer::start(const std::string& host, int port, int threads) {
  configure_pool(impl_->server, threads);
  int bound = port;
  if (port == 0) {
    bound = impl_->server.bind_to_any_port(host);
  } else if (!impl_->server.bind_to_port(host, port)) {
    bound = -1;
  }
  if (bound < 0) throw std::runtime_error("cannot bind " + host + ":" + std::to_string(port));
  impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
  return bound;
}

void TagServer::serve_forever(const std::string& host, int port, int threads) {
  configure_pool(impl_->server, threads);
  if (!impl_->server.listen(host, port)) {
    throw std::runtime_error("cannot listen on " + host + ":" + std::to_string(port));
  }
}

void TagServer::wait() {
  if (impl_->thread.joinable()) impl_->thread.join();
}

void TagServer::stop() {
  if (!impl_) return;
  impl_->server.stop();
  if (impl_->thread.joinable()) impl_->thread.join();
}

LoadReport run_load(const LoadOptions& options) {
  if (options.payloads.empty()) throw std::invalid_argument("load run needs payloads");
  using clock = std::chrono::steady_clock;
  const auto deadline =
      clock::now() + std::chrono::duration_cast<clock::duration>(
                         std::chrono::duration<double>(options.seconds));
  std::atomic<long long> next{0};
  std::atomic<long long> requests{0};
  std::atomic<long long> errors{0};
  std::mutex mu;
  std::vector<double> latencies;

  auto start = clock::now();
  std::vector<std::thread> workers;
  for (int w = 0; w < std::max(1, options.concurrency); ++w) {
    workers.emplace_back([&] {
      httplib::Client cli(options.host, options.port);
      cli.set_keep_alive(true);
      cli.set_read_timeout(30, 0);
      std::vector<double> local;
      while (clock::now() < deadline) {
        auto i = static_cast<std::size_t>(next++) % options.payloads.size();
        auto t0 = clock::now();
        auto res = cli.Post("/tag", options.payloads[i], "application/json");
        auto t1 = clock::now();
        ++requests;
        if (!res || res->status != 200) ++errors;
        local.push_back(std::chrono::duration<double, std::milli>(t1 - t0).count());
      }
      std::lock_guard lock(mu);
      latencies.insert(latencies.end(), local.begin(), local.end());
    });
  }
  for (auto& t : workers) t.join();

  LoadReport r;
  r.seconds = std::chrono::duration<double>(clock::now() - start).count();
  r.requests = requests;
  r.errors = errors;
  r.docs_per_second = r.seconds > 0 ? static_cast<double>(r.requests - r.errors) / r.seconds : 0.0;
  if (!latencies.empty()) {
    std::sort(latencies.begin(), latencies.end());
    r.p50_ms = latencies[latencies.size() / 2];
    r.p99_ms = latencies[std::min(latencies.size() - 1, latencies.size() * 99 / 100)];
  }
  return r;
}

std::string document_payload(const Document& d) {
  json content = json::array();
  for (const auto& s : d.sentences) content.push_back(join_surfaces(s));
  return json{{"title", join_surfaces(d.title)}, {"author", d.author}, {"content", content}}.dump();
}

}  // namespace conceptmine
