#include "conceptmine/evalkit.hpp"

#include "conceptmine/text.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <map>
#include <numeric>
#include <ostream>
#include <set>
#include <stdexcept>

namespace conceptmine {

int exact_match(std::string_view pred, std::string_view gold) {
  return normalize_text(pred) == normalize_text(gold) ? 1 : 0;
}

double token_f1(std::string_view pred, std::string_view gold, const Tokenizer& tokenizer) {
  auto p = surfaces(tokenizer.tokenize(normalize_text(pred)));
  auto g = surfaces(tokenizer.tokenize(normalize_text(gold)));
  if (p.empty() && g.empty()) return 1.0;
  if (p.empty() || g.empty()) return 0.0;
  std::map<std::string, int> counts;
  for (const auto& t : g) ++counts[t];
  int overlap = 0;
  for (const auto& t : p) {
    auto it = counts.find(t);
    if (it != counts.end() && it->second > 0) {
      --it->second;
      ++overlap;
    }
  }
  if (overlap == 0) return 0.0;
  double precision = static_cast<double>(overlap) / static_cast<double>(p.size());
  double recall = static_cast<double>(overlap) / static_cast<double>(g.size());
  return 2.0 * precision * recall / (precision + recall);
}

EvalReport evaluate_run(std::span<const EvalSample> samples, const ConceptSystem& system,
                        const Tokenizer& tokenizer) {
  EvalReport report;
  report.records.reserve(samples.size());
  long long em_total = 0;
  std::vector<double> f1s;
  f1s.reserve(samples.size());
  for (const auto& s : samples) {
    SampleRecord r;
    r.query = s.query;
    r.gold = s.gold_concept;
    r.prediction = system(s);
    r.exact_match = exact_match(r.prediction, r.gold);
    r.f1 = r.exact_match ? 1.0 : token_f1(r.prediction, r.gold, tokenizer);
    em_total += r.exact_match;
    f1s.push_back(r.f1);
    report.records.push_back(std::move(r));
  }
  if (samples.empty()) return report;
  std::sort(f1s.begin(), f1s.end());
  double n = static_cast<double>(samples.size());
  report.exact_match = static_cast<double>(em_total) / n;
  report.f1 = std::accumulate(f1s.begin(), f1s.end(), 0.0) / n;
  return report;
}

void write_report(std::ostream& out, const EvalReport& report) {
  out << std::setprecision(6) << "exact_match\t" << report.exact_match << "\nf1\t" << report.f1
      << "\nsamples\t" << report.records.size() << '\n';
  for (const auto& r : report.records) {
    if (r.exact_match) continue;
    out << "miss\t" << r.query << "\tgold=" << r.gold << "\tpred=" << r.prediction
        << "\tf1=" << r.f1 << '\n';
  }
}

std::vector<EvalSample> read_uccm(std::istream& in, std::vector<RecordError>* errors) {
  std::vector<EvalSample> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    auto f = split(line, '\t');
    if (f.size() != 3 || normalize_text(f[0]).empty() || normalize_text(f[2]).empty()) {
      if (errors) errors->push_back({line_no, "expected `query \\t titles \\t gold_concept`"});
      continue;
    }
    EvalSample s;
    s.query = normalize_text(f[0]);
    for (const auto& t : split(f[1], "||")) {
      auto nt = normalize_text(t);
      if (!nt.empty()) s.clicked_titles.push_back(std::move(nt));
    }
    s.gold_concept = normalize_text(f[2]);
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<EvalSample> load_uccm(const std::string& path, std::vector<RecordError>* errors) {
  std::ifstream in(path);
  if (!in) throw CorpusError("cannot open evaluation file '" + path + "'");
  return read_uccm(in, errors);
}

RewritePlan rewrite_query(const std::string& query, const std::string& /*concept_text*/,
                          const std::vector<std::string>& instances, std::size_t budget) {
  if (budget == 0) throw std::invalid_argument("rewrite budget must be at least 1");
  RewritePlan plan;
  plan.budget = budget;
  std::string q = normalize_text(query);
  if (instances.empty()) {
    plan.queries.push_back({q, budget});
    return plan;
  }
  const std::size_t k = instances.size();
  const std::size_t quota = (budget + k - 1) / k;
  for (const auto& e : instances) plan.queries.push_back({q + " " + normalize_text(e), quota});
  return plan;
}

std::vector<std::string> collect_results(const RewritePlan& plan, const SearchBackend& backend) {
  std::vector<std::string> out;
  std::set<std::string> seen;
  for (const auto& rq : plan.queries) {
    auto results = backend.search(rq.text, rq.quota);
    if (results.size() > rq.quota) results.resize(rq.quota);
    for (auto& r : results) {
      if (out.size() >= plan.budget) return out;
      if (seen.insert(r).second) out.push_back(std::move(r));
    }
  }
  if (out.size() > plan.budget) out.resize(plan.budget);
  return out;
}

}  // namespace conceptmine
