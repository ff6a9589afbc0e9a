#pragma once

#include "conceptmine/corpus.hpp"
#include "conceptmine/tokenizer.hpp"

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace conceptmine {

struct EvalSample {
  std::string query;
  std::vector<std::string> clicked_titles;
  std::string gold_concept;
};

struct SampleRecord {
  std::string query;
  std::string gold;
  std::string prediction;
  int exact_match = 0;
  double f1 = 0.0;
};

struct EvalReport {
  double exact_match = 0.0;
  double f1 = 0.0;
  std::vector<SampleRecord> records;  // input order
};

// 1 iff the normalized strings are identical.
int exact_match(std::string_view pred, std::string_view gold);

// F1 of the multiset token overlap. Both sides empty -> 1, one side empty -> 0.
double token_f1(std::string_view pred, std::string_view gold, const Tokenizer& tokenizer);

using ConceptSystem = std::function<std::string(const EvalSample&)>;

// Means over samples; the sums are order-independent, so shuffling the
// samples gives a bit-identical report apart from record order.
EvalReport evaluate_run(std::span<const EvalSample> samples, const ConceptSystem& system,
                        const Tokenizer& tokenizer);

void write_report(std::ostream& out, const EvalReport& report);

// `query \t title1||title2||... \t gold_concept`
std::vector<EvalSample> read_uccm(std::istream& in, std::vector<RecordError>* errors = nullptr);
std::vector<EvalSample> load_uccm(const std::string& path,
                                  std::vector<RecordError>* errors = nullptr);

struct RewrittenQuery {
  std::string text;
  std::size_t quota = 0;
};

struct RewritePlan {
  std::vector<RewrittenQuery> queries;
  std::size_t budget = 10;  // results kept after merging
};

// K rewrites "q e_i", each with quota ceil(budget / K). No instances -> the
// original query with the full budget. Throws std::invalid_argument when
// budget is 0.
RewritePlan rewrite_query(const std::string& query, const std::string& concept_text,
                          const std::vector<std::string>& instances, std::size_t budget = 10);

class SearchBackend {
 public:
  virtual ~SearchBackend() = default;
  virtual std::vector<std::string> search(const std::string& query, std::size_t n) const = 0;
};

// Runs every rewrite with its quota, concatenates in plan order, drops
// duplicates, and keeps the first `budget` results.
std::vector<std::string> collect_results(const RewritePlan& plan, const SearchBackend& backend);

}  // namespace conceptmine
