// tag_load: closed-loop load against a running tag server.

#include "conceptmine/corpus.hpp"
#include "conceptmine/service.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <iostream>

using namespace conceptmine;

int main(int argc, char** argv) {
  CLI::App app{"Send documents to a tag server and report throughput"};
  LoadOptions opt;
  opt.port = 8080;
  std::string docs_path;
  double min_rate = 0.0;
  app.add_option("--host", opt.host, "server address");
  app.add_option("--port", opt.port, "server port");
  app.add_option("--docs", docs_path, "documents to send, JSON lines")->required();
  app.add_option("--seconds", opt.seconds, "duration of the run");
  app.add_option("--concurrency", opt.concurrency, "parallel clients");
  app.add_option("--min-rate", min_rate, "fail below this many documents per second");
  CLI11_PARSE(app, argc, argv);

  try {
    LexiconTokenizer tok;
    auto load = load_documents(docs_path, tok);
    for (const auto& d : load.documents) opt.payloads.push_back(document_payload(d));
    auto r = run_load(opt);
    nlohmann::json j{{"requests", r.requests},       {"errors", r.errors},
                     {"seconds", r.seconds},         {"docs_per_second", r.docs_per_second},
                     {"p50_ms", r.p50_ms},           {"p99_ms", r.p99_ms}};
    std::cout << j.dump() << '\n';
    return r.errors == 0 && r.docs_per_second >= min_rate ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << nlohmann::json{{"error", {{"message", e.what()}}}}.dump() << '\n';
    return 1;
  }
}
