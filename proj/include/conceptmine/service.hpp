#pragma once

#include "conceptmine/tagger.hpp"
#include "conceptmine/tokenizer.hpp"

#include <atomic>
#include <memory>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

namespace conceptmine {

// Request handling without the transport, so it can be tested directly.
class TagService {
 public:
  TagService(std::shared_ptr<const TaggerModels> models,
             std::shared_ptr<const Tokenizer> tokenizer);

  // Body {"title": ..., "content": string or [sentences], "author"?: ...}.
  // Returns the JSON response and sets `status` (200, or 400 with
  // {"error": ...}).
  std::string tag(std::string_view body, int& status) const;
  std::string health() const;

 private:
  std::shared_ptr<const TaggerModels> models_;
  std::shared_ptr<const Tokenizer> tokenizer_;
  mutable std::atomic<long long> served_{0};
};

// HTTP front end: POST /tag, GET /health.
class TagServer {
 public:
  explicit TagServer(std::shared_ptr<const TagService> service);
  ~TagServer();
  TagServer(const TagServer&) = delete;
  TagServer& operator=(const TagServer&) = delete;

  // Binds and serves on a background thread. Port 0 picks a free port.
  // Returns the bound port; throws std::runtime_error when binding fails.
  int start(const std::string& host, int port, int threads);
  // Blocks in the calling thread until stop() is called from elsewhere.
  void serve_forever(const std::string& host, int port, int threads);
  // Blocks until a server begun with start() stops.
  void wait();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

struct LoadOptions {
  std::string host = "127.0.0.1";
  int port = 0;
  double seconds = 60.0;
  int concurrency = 4;
  std::vector<std::string> payloads;  // request bodies, sent round-robin
};

struct LoadReport {
  long long requests = 0;
  long long errors = 0;
  double seconds = 0.0;
  double docs_per_second = 0.0;
  double p50_ms = 0.0;
  double p99_ms = 0.0;
};

// Closed-loop load: `concurrency` clients each send the next payload as soon
// as the previous response arrives, for the given wall time.
LoadReport run_load(const LoadOptions& options);

std::string document_payload(const Document& d);

}  // namespace conceptmine
