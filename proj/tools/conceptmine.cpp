// conceptmine: command-line drivers for mining, tagging and taxonomy building.

#include "conceptmine/align.hpp"
#include "conceptmine/bootstrap.hpp"
#include "conceptmine/config.hpp"
#include "conceptmine/corpus.hpp"
#include "conceptmine/discriminator.hpp"
#include "conceptmine/embedding.hpp"
#include "conceptmine/evalkit.hpp"
#include "conceptmine/keyterms.hpp"
#include "conceptmine/log.hpp"
#include "conceptmine/pipeline.hpp"
#include "conceptmine/seqlabel.hpp"
#include "conceptmine/service.hpp"
#include "conceptmine/tagger.hpp"
#include "conceptmine/taxonomy.hpp"
#include "conceptmine/taxonomy_builder.hpp"
#include "conceptmine/text.hpp"
#include "conceptmine/topic_classifier.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

using namespace conceptmine;
using nlohmann::json;

namespace {

struct Globals {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  std::string lexicon;
  std::string today;
};

Config resolve_config(const Globals& g) {
  Config c = g.config.empty() ? Config{} : load_config(g.config);
  if (g.seed) {
    c.seed = *g.seed;
    c.gate.seed = *g.seed;
  }
  if (g.threads) c.threads = *g.threads;
  if (!g.today.empty()) {
    auto d = parse_date(g.today);
    if (!d) throw std::invalid_argument("--today is not YYYY-MM-DD: " + g.today);
    c.logs.today = *d;
  } else if (c.logs.today == Date{}) {
    c.logs.today = std::chrono::floor<std::chrono::days>(std::chrono::system_clock::now());
  }
  return c;
}

std::shared_ptr<LexiconTokenizer> make_tokenizer(const Globals& g) {
  auto tok = std::make_shared<LexiconTokenizer>();
  if (!g.lexicon.empty()) tok->load_lexicon_file(g.lexicon);
  return tok;
}

void report_skipped(const std::string& what, const std::vector<RecordError>& errors) {
  for (const auto& e : errors) {
    warn(what + " line " + std::to_string(e.line) + ": " + e.message);
  }
}

std::vector<QueryLogEntry> read_logs(const std::string& path, const Tokenizer& tok,
                                     const Config& cfg) {
  auto load = load_query_logs(path, tok, cfg.logs);
  report_skipped(path, load.errors);
  return std::move(load.entries);
}

std::vector<Document> read_docs(const std::string& path, const Tokenizer& tok) {
  auto load = load_documents(path, tok);
  report_skipped(path, load.warnings);
  return std::move(load.documents);
}

std::set<std::string> read_concepts(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CorpusError("cannot open concept list '" + path + "'");
  std::set<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    auto fields = split(line, '\t');
    std::string c = normalize_text(fields.empty() ? "" : fields[0]);
    if (!c.empty() && c[0] != '#') out.insert(c);
  }
  return out;
}

TaxonomyGraph read_taxonomy(const std::string& path, const std::string& topics_path) {
  std::ifstream in(path);
  if (!in) throw CorpusError("cannot open taxonomy '" + path + "'");
  std::vector<RecordError> errors;
  auto g = TaxonomyGraph::import_tsv(in, load_topics(topics_path), &errors);
  report_skipped(path, errors);
  return g;
}

// "-" means standard output.
class Output {
 public:
  explicit Output(const std::string& path) {
    if (path != "-") {
      file_.open(path);
      if (!file_) throw std::runtime_error("cannot write '" + path + "'");
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

EmbeddingTable corpus_embeddings(std::span<const QueryLogEntry> logs,
                                 std::span<const Document> docs, std::size_t dim,
                                 std::uint64_t seed) {
  std::vector<std::vector<Token>> sentences;
  for (const auto& e : logs) {
    sentences.push_back(e.query.tokens);
    for (const auto& t : e.titles) sentences.push_back(t.tokens);
  }
  for (const auto& d : docs) {
    for (auto& s : document_sentences(d)) sentences.push_back(std::move(s));
  }
  PpmiSvdOptions opt;
  opt.dim = dim;
  opt.min_count = 1;
  opt.seed = seed;
  return train_ppmi_svd(sentences, opt);
}

std::shared_ptr<const EmbeddingProvider> embeddings_or_train(const std::string& path,
                                                             std::span<const QueryLogEntry> logs,
                                                             std::span<const Document> docs,
                                                             const Config& cfg) {
  if (!path.empty()) return std::make_shared<EmbeddingTable>(EmbeddingTable::load_file(path));
  return std::make_shared<EmbeddingTable>(corpus_embeddings(logs, docs, 32, cfg.seed));
}

void print_summary(const json& j) { std::cerr << j.dump() << '\n'; }

// Model inputs shared by `tag`, `tag-server` and `extract-keyterms`.
struct ModelArgs {
  std::string logs;
  std::string docs;
  std::string concepts;
  std::string taxonomy;
  std::string topics = default_topics_path();
  std::string embeddings;

  void add_to(CLI::App* cmd, bool need_taxonomy) {
    cmd->add_option("--logs", logs, "query log TSV")->required();
    cmd->add_option("--docs", docs, "document corpus, JSON lines")->required();
    cmd->add_option("--concepts", concepts, "concept list, one per line (default: taxonomy concepts)");
    auto* t = cmd->add_option("--taxonomy", taxonomy, "taxonomy TSV");
    if (need_taxonomy) t->required();
    cmd->add_option("--topics", topics, "topic list");
    cmd->add_option("--embeddings", embeddings, "embedding table (default: trained on the corpus)");
  }
};

std::shared_ptr<TaggerModels> build_models(const ModelArgs& a, const Tokenizer& tok,
                                           const Config& cfg, std::vector<Document>* docs_out) {
  auto logs = read_logs(a.logs, tok, cfg);
  auto docs = read_docs(a.docs, tok);
  auto graph = read_taxonomy(a.taxonomy, a.topics);
  std::set<std::string> concepts;
  if (!a.concepts.empty()) {
    concepts = read_concepts(a.concepts);
  } else {
    auto texts = graph.texts(NodeKind::kConcept);
    concepts.insert(texts.begin(), texts.end());
  }
  auto emb = embeddings_or_train(a.embeddings, logs, docs, cfg);
  auto models = std::make_shared<TaggerModels>(
      make_tagger_models(logs, docs, concepts, std::move(graph), emb, cfg.tagger));
  if (docs_out) *docs_out = std::move(docs);
  return models;
}

std::vector<std::pair<ConceptFeatures, bool>> featurize_labeled(
    const std::vector<std::pair<std::string, bool>>& labeled, const QueryLogIndex& index) {
  std::vector<std::pair<ConceptFeatures, bool>> data;
  data.reserve(labeled.size());
  for (const auto& [text, y] : labeled) data.emplace_back(index.featurize(text), y);
  return data;
}

std::vector<std::pair<std::string, bool>> read_labeled_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CorpusError("cannot open labeled concepts '" + path + "'");
  std::vector<RecordError> errors;
  auto out = read_labeled_concepts(in, &errors);
  report_skipped(path, errors);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Concept mining, document tagging and taxonomy construction"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--config", g.config, "JSON configuration file");
  app.add_option("--seed", g.seed, "random seed");
  app.add_option("--threads", g.threads, "worker threads");
  app.add_option("--lexicon", g.lexicon, "tokenizer lexicon: word TAB POS [TAB NER]");
  app.add_option("--today", g.today, "reference date for the log window, YYYY-MM-DD");

  std::function<void()> action;
  std::string command;
  auto bind = [&](CLI::App* cmd, std::function<void()> fn) {
    cmd->callback([&, cmd, fn = std::move(fn)] {
      command = cmd->get_name();
      action = fn;
    });
  };

  // mine-bootstrap
  std::string logs_path, out_path = "-", seeds_path = std::string(CONCEPTMINE_DATA_DIR) + "/seed_patterns.txt";
  std::string patterns_out;
  auto* mb = app.add_subcommand("mine-bootstrap", "bootstrap concepts from seed patterns");
  mb->add_option("--logs", logs_path, "query log TSV")->required();
  mb->add_option("--seeds", seeds_path, "seed pattern file");
  mb->add_option("--out", out_path, "candidate TSV");
  mb->add_option("--patterns-out", patterns_out, "accepted patterns, one per line");
  bind(mb, [&] {
    auto cfg = resolve_config(g);
    auto tok = make_tokenizer(g);
    auto logs = read_logs(logs_path, *tok, cfg);
    std::vector<Query> queries;
    for (const auto& e : logs) queries.push_back(e.query);
    auto r = run_bootstrap(load_seed_patterns(seeds_path), queries, cfg.bootstrap);
    Output out(out_path);
    write_candidates(out.stream(), r.concepts);
    if (!patterns_out.empty()) {
      Output pout(patterns_out);
      for (const auto& p : r.patterns) pout.stream() << p.render() << '\n';
    }
    print_summary({{"concepts", r.concepts.size()}, {"patterns", r.patterns.size()},
                   {"iterations", r.iterations}});
  });

  // mine-align
  auto* ma = app.add_subcommand("mine-align", "one aligned concept per query");
  ma->add_option("--logs", logs_path, "query log TSV")->required();
  ma->add_option("--out", out_path, "candidate TSV");
  bind(ma, [&] {
    auto cfg = resolve_config(g);
    auto tok = make_tokenizer(g);
    auto logs = read_logs(logs_path, *tok, cfg);
    std::vector<ConceptCandidate> found;
    for (const auto& e : logs) {
      if (auto c = align_query(e, cfg.align)) {
        c->provenance = e.query.id;
        found.push_back(std::move(*c));
      }
    }
    Output out(out_path);
    write_candidates(out.stream(), found);
    print_summary({{"queries", logs.size()}, {"concepts", found.size()}});
  });

  // train-crf
  std::string data_path, candidates_path, model_path;
  auto* tc = app.add_subcommand("train-crf", "train the concept sequence labeler");
  tc->add_option("--data", data_path, "labeled sequences: token POS NER label columns");
  tc->add_option("--logs", logs_path, "query log TSV, with --candidates");
  tc->add_option("--candidates", candidates_path, "candidates whose provenance names their query");
  tc->add_option("--out", model_path, "model file")->required();
  bind(tc, [&] {
    auto cfg = resolve_config(g);
    std::vector<LabeledSequence> data;
    if (!data_path.empty()) {
      std::ifstream in(data_path);
      if (!in) throw CorpusError("cannot open training data '" + data_path + "'");
      data = read_training_data(in);
    } else if (!logs_path.empty() && !candidates_path.empty()) {
      auto tok = make_tokenizer(g);
      auto logs = read_logs(logs_path, *tok, cfg);
      std::map<std::string, const QueryLogEntry*> by_id;
      for (const auto& e : logs) by_id[e.query.id] = &e;
      std::vector<RecordError> errors;
      for (const auto& c : load_candidates(candidates_path, &errors)) {
        auto it = by_id.find(c.provenance);
        if (it == by_id.end()) continue;
        if (auto seq = label_concept(it->second->query.tokens, c.text)) data.push_back(std::move(*seq));
      }
      report_skipped(candidates_path, errors);
    } else {
      throw std::invalid_argument("train-crf needs --data, or --logs with --candidates");
    }
    if (data.empty()) throw std::invalid_argument("no training sequences");
    auto model = train_crf(data, cfg.crf);
    model.save_file(model_path);
    print_summary({{"sequences", data.size()},
                   {"features", model.num_features()},
                   {"iterations", model.training_report().iterations}});
  });

  // mine-crf
  bool query_only = false;
  auto* mc = app.add_subcommand("mine-crf", "label every query with the trained model");
  mc->add_option("--model", model_path, "model file")->required();
  mc->add_option("--logs", logs_path, "query log TSV")->required();
  mc->add_option("--out", out_path, "candidate TSV");
  mc->add_flag("--query-only", query_only, "do not fall back to clicked titles");
  bind(mc, [&] {
    auto cfg = resolve_config(g);
    auto tok = make_tokenizer(g);
    auto logs = read_logs(logs_path, *tok, cfg);
    auto model = CrfModel::load_file(model_path);
    std::vector<ConceptCandidate> found;
    for (const auto& e : logs) {
      if (auto c = crf_query(model, e, !query_only)) found.push_back(std::move(*c));
    }
    Output out(out_path);
    write_candidates(out.stream(), found);
    print_summary({{"queries", logs.size()}, {"concepts", found.size()}});
  });

  // train-gate
  std::string labeled_path;
  auto* tg = app.add_subcommand("train-gate", "train the candidate quality gate");
  tg->add_option("--logs", logs_path, "query log TSV")->required();
  tg->add_option("--labeled", labeled_path, "concept TAB 0|1")->required();
  tg->add_option("--out", model_path, "gate model file")->required();
  bind(tg, [&] {
    auto cfg = resolve_config(g);
    auto tok = make_tokenizer(g);
    auto logs = read_logs(logs_path, *tok, cfg);
    QueryLogIndex index(logs, [](const ClickedTitle&) { return std::nullopt; }, 0);
    auto model = train_quality(featurize_labeled(read_labeled_file(labeled_path), index), cfg.gate);
    model.save_file(model_path);
    print_summary({{"holdout_accuracy", model.holdout_accuracy()},
                   {"training_accuracy", model.training_accuracy()}});
  });

  // gate
  std::string rejected_out;
  auto* gt = app.add_subcommand("gate", "keep the candidates the gate accepts");
  gt->add_option("--model", model_path, "gate model file")->required();
  gt->add_option("--logs", logs_path, "query log TSV")->required();
  gt->add_option("--candidates", candidates_path, "candidate TSV")->required();
  gt->add_option("--out", out_path, "accepted candidates");
  gt->add_option("--rejected-out", rejected_out, "rejected candidates");
  bind(gt, [&] {
    auto cfg = resolve_config(g);
    auto tok = make_tokenizer(g);
    auto logs = read_logs(logs_path, *tok, cfg);
    auto model = QualityModel::load_file(model_path);
    QueryLogIndex index(logs, [](const ClickedTitle&) { return std::nullopt; }, 0);
    std::vector<RecordError> errors;
    std::vector<ConceptCandidate> kept, dropped;
    for (auto& c : load_candidates(candidates_path, &errors)) {
      auto f = index.featurize(c.text);
      auto judged = gate(model, std::move(c), f);
      (*judged.accepted ? kept : dropped).push_back(std::move(judged));
    }
    report_skipped(candidates_path, errors);
    Output out(out_path);
    write_candidates(out.stream(), kept);
    if (!rejected_out.empty()) {
      Output rout(rejected_out);
      write_candidates(rout.stream(), dropped);
    }
    print_summary({{"accepted", kept.size()}, {"rejected", dropped.size()}});
  });

  // mine: the whole offline pipeline
  std::string gate_model_path, crf_out, gate_out;
  auto* mn = app.add_subcommand("mine", "bootstrap, align, gate and CRF in one pass");
  mn->add_option("--logs", logs_path, "query log TSV")->required();
  mn->add_option("--seeds", seeds_path, "seed pattern file");
  mn->add_option("--labeled", labeled_path, "reviewed concepts used to train the gate");
  mn->add_option("--gate", gate_model_path, "pretrained gate model (instead of --labeled)");
  mn->add_option("--out", out_path, "chosen concept per query");
  mn->add_option("--crf-out", crf_out, "save the trained sequence model");
  mn->add_option("--gate-out", gate_out, "save the trained gate");
  bind(mn, [&] {
    auto cfg = resolve_config(g);
    auto tok = make_tokenizer(g);
    auto logs = read_logs(logs_path, *tok, cfg);
    MiningOptions opt;
    opt.bootstrap = cfg.bootstrap;
    opt.align = cfg.align;
    opt.crf = cfg.crf;
    opt.gate = cfg.gate;
    opt.seed = cfg.seed;
    std::optional<QualityModel> given;
    if (!gate_model_path.empty()) given = QualityModel::load_file(gate_model_path);
    std::map<std::string, bool> labels;
    if (!labeled_path.empty()) {
      for (auto& [t, y] : read_labeled_file(labeled_path)) labels[t] = y;
    }
    if (!given && labels.empty()) throw std::invalid_argument("mine needs --labeled or --gate");
    Reviewer reviewer = [&](const ConceptCandidate& c) -> std::optional<bool> {
      auto it = labels.find(c.text);
      if (it == labels.end()) return std::nullopt;
      return it->second;
    };
    auto r = mine_concepts(logs, load_seed_patterns(seeds_path), reviewer, opt,
                           given ? &*given : nullptr);
    std::vector<ConceptCandidate> chosen;
    for (const auto& q : r.queries) {
      if (q.chosen) chosen.push_back(*q.chosen);
    }
    Output out(out_path);
    write_candidates(out.stream(), chosen);
    if (!crf_out.empty() && r.crf) r.crf->save_file(crf_out);
    if (!gate_out.empty()) r.gate.save_file(gate_out);
    print_summary({{"queries", r.queries.size()},
                   {"chosen", chosen.size()},
                   {"concepts", r.concepts.size()},
                   {"reviewed", r.reviewed},
                   {"crf_sequences", r.crf_training_sequences}});
  });

  // train-embeddings
  std::string docs_path;
  std::size_t dim = 32;
  auto* te = app.add_subcommand("train-embeddings", "PPMI-SVD word vectors from logs and documents");
  te->add_option("--logs", logs_path, "query log TSV")->required();
  te->add_option("--docs", docs_path, "document corpus, JSON lines")->required();
  te->add_option("--dim", dim, "vector size");
  te->add_option("--out", out_path, "embedding table");
  bind(te, [&] {
    auto cfg = resolve_config(g);
    auto tok = make_tokenizer(g);
    auto table = corpus_embeddings(read_logs(logs_path, *tok, cfg), read_docs(docs_path, *tok), dim,
                                   cfg.seed);
    Output out(out_path);
    table.save(out.stream());
    print_summary({{"terms", table.size()}, {"dim", table.dim()}});
  });

  // extract-keyterms
  std::string embeddings_path, taxonomy_path, topics_path = default_topics_path();
  auto* ek = app.add_subcommand("extract-keyterms", "key instances of each document");
  ek->add_option("--docs", docs_path, "document corpus, JSON lines")->required();
  ek->add_option("--embeddings", embeddings_path, "embedding table")->required();
  ek->add_option("--taxonomy", taxonomy_path, "taxonomy TSV supplying the instance vocabulary");
  ek->add_option("--topics", topics_path, "topic list");
  ek->add_option("--out", out_path, "doc_id TAB instance TAB weight");
  bind(ek, [&] {
    auto cfg = resolve_config(g);
    auto tok = make_tokenizer(g);
    auto docs = read_docs(docs_path, *tok);
    auto emb = EmbeddingTable::load_file(embeddings_path);
    std::set<std::string> vocabulary;
    if (!taxonomy_path.empty()) {
      auto texts = read_taxonomy(taxonomy_path, topics_path).texts(NodeKind::kInstance);
      vocabulary.insert(texts.begin(), texts.end());
    }
    KeytermContext ctx;
    ctx.instance_vocabulary = &vocabulary;
    Output out(out_path);
    for (const auto& d : docs) {
      auto keys = extract_key_instances(d, emb, cfg.tagger.k, cfg.tagger.delta_w, ctx);
      for (const auto& [e, w] : keys.instances) out.stream() << d.id << '\t' << e << '\t' << w << '\n';
    }
    print_summary({{"documents", docs.size()}});
  });

  // build-taxonomy
  std::string concepts_path, pairs_path, topic_model_path, tagged_out;
  auto* bt = app.add_subcommand("build-taxonomy", "topic -> concept -> instance graph");
  bt->add_option("--logs", logs_path, "query log TSV")->required();
  bt->add_option("--docs", docs_path, "document corpus, JSON lines")->required();
  bt->add_option("--concepts", concepts_path, "concept list, one per line")->required();
  bt->add_option("--topics", topics_path, "topic list");
  bt->add_option("--embeddings", embeddings_path, "embedding table (default: trained on the corpus)");
  bt->add_option("--pairs", pairs_path, "external concept TAB instance pairs");
  bt->add_option("--topic-model", topic_model_path, "topic classifier for unlabeled documents");
  bt->add_option("--out", out_path, "taxonomy TSV");
  bt->add_option("--tagged-out", tagged_out, "document tags produced along the way");
  bind(bt, [&] {
    auto cfg = resolve_config(g);
    auto tok = make_tokenizer(g);
    auto logs = read_logs(logs_path, *tok, cfg);
    auto docs = read_docs(docs_path, *tok);
    TaxonomyBuildInput in;
    in.logs = logs;
    in.documents = docs;
    in.concepts = read_concepts(concepts_path);
    in.topics = load_topics(topics_path);
    in.tokenizer = tok.get();
    in.embeddings = embeddings_or_train(embeddings_path, logs, docs, cfg);
    std::optional<TopicClassifier> clf;
    if (!topic_model_path.empty()) {
      std::ifstream min(topic_model_path);
      if (!min) throw CorpusError("cannot open topic model '" + topic_model_path + "'");
      clf = TopicClassifier::load(min);
      in.classifier = &*clf;
    }
    if (!pairs_path.empty()) in.external_pairs = import_instance_pairs(pairs_path);
    auto b = build_taxonomy(in, cfg.taxonomy);
    Output out(out_path);
    b.graph.export_tsv(out.stream());
    if (!tagged_out.empty()) {
      Output tout(tagged_out);
      write_tagged(tout.stream(), b.tagged);
    }
    print_summary({{"nodes", b.graph.nodes().size()}, {"edges", b.graph.num_edges()}});
  });

  // train-topics
  auto* tt = app.add_subcommand("train-topics", "topic classifier from labeled documents");
  tt->add_option("--docs", docs_path, "documents carrying a topic field")->required();
  tt->add_option("--embeddings", embeddings_path, "embedding table")->required();
  tt->add_option("--topics", topics_path, "topic list");
  tt->add_option("--out", model_path, "classifier file")->required();
  bind(tt, [&] {
    auto tok = make_tokenizer(g);
    auto docs = read_docs(docs_path, *tok);
    auto emb = EmbeddingTable::load_file(embeddings_path);
    auto clf = train_topic_classifier(docs, emb, load_topics(topics_path));
    Output out(model_path);
    clf.save(out.stream());
    print_summary({{"topics", clf.topics().size()}, {"input_dim", clf.input_dim()}});
  });

  // tag
  ModelArgs margs;
  std::string input_docs;
  auto* tag = app.add_subcommand("tag", "tag documents with concepts");
  margs.add_to(tag, true);
  tag->add_option("--input", input_docs, "documents to tag (default: --docs)");
  tag->add_option("--out", out_path, "doc_id TAB concept TAB score TAB method");
  bind(tag, [&] {
    auto cfg = resolve_config(g);
    auto tok = make_tokenizer(g);
    std::vector<Document> docs;
    auto models = build_models(margs, *tok, cfg, &docs);
    if (!input_docs.empty()) docs = read_docs(input_docs, *tok);
    std::vector<TaggedDocument> tagged;
    tagged.reserve(docs.size());
    for (const auto& d : docs) tagged.push_back(tag_document(d, *models));
    Output out(out_path);
    write_tagged(out.stream(), tagged);
    print_summary({{"documents", tagged.size()}});
  });

  // tag-server
  std::string host = "127.0.0.1";
  int port = 8080;
  auto* ts = app.add_subcommand("tag-server", "serve POST /tag and GET /health");
  margs.add_to(ts, true);
  ts->add_option("--host", host, "bind address");
  ts->add_option("--port", port, "port, 0 for any free port");
  bind(ts, [&] {
    auto cfg = resolve_config(g);
    auto tok = make_tokenizer(g);
    auto models = build_models(margs, *tok, cfg, nullptr);
    auto service = std::make_shared<TagService>(models, tok);
    TagServer server(service);
    int threads = std::max(1, cfg.threads);
    int bound = server.start(host, port, threads);
    print_summary({{"listening", host + ":" + std::to_string(bound)}, {"threads", threads}});
    server.wait();
  });

  // rewrite
  std::string query, concept_text;
  std::optional<std::size_t> budget;
  auto* rw = app.add_subcommand("rewrite", "expand a query with a concept's instances");
  rw->add_option("--query", query, "original query")->required();
  rw->add_option("--concept", concept_text, "concept the query expresses")->required();
  rw->add_option("--taxonomy", taxonomy_path, "taxonomy TSV")->required();
  rw->add_option("--topics", topics_path, "topic list");
  rw->add_option("--budget", budget, "results kept after merging");
  rw->add_option("--out", out_path, "rewritten query TAB quota");
  bind(rw, [&] {
    auto cfg = resolve_config(g);
    auto graph = read_taxonomy(taxonomy_path, topics_path);
    std::vector<std::string> instances;
    if (auto id = graph.find(NodeKind::kConcept, normalize_text(concept_text))) {
      for (NodeId child : graph.children(*id)) instances.push_back(graph.node(child).text);
    } else {
      warn("concept '" + concept_text + "' is not in the taxonomy");
    }
    auto plan = rewrite_query(normalize_text(query), normalize_text(concept_text), instances,
                              budget.value_or(cfg.rewrite_budget));
    Output out(out_path);
    for (const auto& q : plan.queries) out.stream() << q.text << '\t' << q.quota << '\n';
    print_summary({{"rewrites", plan.queries.size()}, {"budget", plan.budget}});
  });

  // eval
  std::string uccm_path, system = "align";
  auto* ev = app.add_subcommand("eval", "exact match and token F1 on a UCCM file");
  ev->add_option("--uccm", uccm_path, "query TAB title1||title2 TAB gold")->required();
  ev->add_option("--system", system, "align, crf (query then titles) or crf-titles")
      ->check(CLI::IsMember({"align", "crf", "crf-titles"}));
  ev->add_option("--model", model_path, "sequence model for the crf systems");
  ev->add_option("--out", out_path, "report");
  bind(ev, [&] {
    auto cfg = resolve_config(g);
    auto tok = make_tokenizer(g);
    std::vector<RecordError> errors;
    auto samples = load_uccm(uccm_path, &errors);
    report_skipped(uccm_path, errors);
    std::optional<CrfModel> crf;
    if (system != "align") {
      if (model_path.empty()) throw std::invalid_argument("--system " + system + " needs --model");
      crf = CrfModel::load_file(model_path);
    }
    ConceptSystem run = [&](const EvalSample& s) -> std::string {
      QueryLogEntry e;
      e.query.text = normalize_text(s.query);
      if (system != "crf-titles") e.query.tokens = tok->tokenize(e.query.text);
      for (const auto& t : s.clicked_titles) {
        ClickedTitle ct;
        ct.text = normalize_text(t);
        ct.tokens = tok->tokenize(ct.text);
        e.titles.push_back(std::move(ct));
      }
      auto c = crf ? crf_query(*crf, e, true) : align_query(e, cfg.align);
      return c ? c->text : std::string();
    };
    auto report = evaluate_run(samples, run, *tok);
    Output out(out_path);
    write_report(out.stream(), report);
    print_summary({{"samples", samples.size()},
                   {"exact_match", report.exact_match},
                   {"f1", report.f1}});
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << json{{"error", {{"type", "usage"}, {"message", e.what()}}}}.dump() << '\n';
    return 2;
  }
  try {
    action();
  } catch (const std::exception& e) {
    std::cerr << json{{"error", {{"command", command}, {"message", e.what()}}}}.dump() << '\n';
    return 1;
  }
  return 0;
}
