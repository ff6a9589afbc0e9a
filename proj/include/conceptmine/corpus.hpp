#pragma once

#include "conceptmine/tokenizer.hpp"

#include <chrono>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace conceptmine {

using Date = std::chrono::sys_days;

std::optional<Date> parse_date(std::string_view iso);  // YYYY-MM-DD
std::string format_date(Date d);

class CorpusError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Query {
  std::string id;
  std::string text;  // normalized surface form, also the grouping key
  std::vector<Token> tokens;

  bool operator==(const Query&) const = default;
};

struct ClickedTitle {
  std::string text;
  std::vector<Token> tokens;
  long long click_count = 0;
  Date date{};

  bool operator==(const ClickedTitle&) const = default;
};

struct QueryLogEntry {
  Query query;
  std::vector<ClickedTitle> titles;  // may be empty

  bool operator==(const QueryLogEntry&) const = default;
};

struct Document {
  std::string id;
  std::vector<Token> title;
  std::string author;
  std::vector<std::vector<Token>> sentences;
  std::optional<std::string> topic;  // gold label when the record carries one

  bool operator==(const Document&) const = default;
};

enum class CandidateSource { kBootstrap, kAlign, kCrf };

std::string_view to_string(CandidateSource s);
std::optional<CandidateSource> parse_candidate_source(std::string_view s);

struct ConceptCandidate {
  std::string text;
  CandidateSource source = CandidateSource::kBootstrap;
  std::string provenance;  // query id
  double score = 1.0;
  std::optional<bool> accepted;

  bool operator==(const ConceptCandidate&) const = default;
};

struct RecordError {
  std::size_t line = 0;
  std::string message;
};

struct LogFilter {
  long long min_clicks = 5;  // titles need strictly more clicks than this
  int window_days = 30;      // inclusive of the boundary day
  Date today{};
};

struct QueryLogLoad {
  std::vector<QueryLogEntry> entries;
  std::vector<RecordError> errors;
};

// Lines are `query \t title \t click_count \t YYYY-MM-DD`; a line holding
// only a query registers it without titles. Entries are grouped by the
// normalized query string and ordered by first appearance; ids are "q1",
// "q2", ... in that order. Records for the same title inside the window are
// summed before the click threshold is applied.
QueryLogLoad read_query_logs(std::istream& in, const Tokenizer& tokenizer,
                             const LogFilter& filter);
QueryLogLoad load_query_logs(const std::string& path, const Tokenizer& tokenizer,
                             const LogFilter& filter);
void write_query_logs(std::ostream& out, const std::vector<QueryLogEntry>& entries);

struct DocumentLoad {
  std::vector<Document> documents;
  std::vector<RecordError> warnings;
};

// JSON lines with keys id, title, author (optional), content (a string that
// is sentence-split, or an array of sentences) and optional topic.
DocumentLoad read_documents(std::istream& in, const Tokenizer& tokenizer);
DocumentLoad load_documents(const std::string& path, const Tokenizer& tokenizer);
void write_documents(std::ostream& out, const std::vector<Document>& docs);

// `concept_text \t source \t score \t provenance_query_id`
void write_candidates(std::ostream& out, const std::vector<ConceptCandidate>& candidates);
std::vector<ConceptCandidate> read_candidates(std::istream& in,
                                              std::vector<RecordError>* errors = nullptr);
std::vector<ConceptCandidate> load_candidates(const std::string& path,
                                              std::vector<RecordError>* errors = nullptr);

}  // namespace conceptmine
