#include "conceptmine/corpus.hpp"

#include "conceptmine/text.hpp"

#include <json.hpp>

#include <charconv>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <unordered_map>

namespace conceptmine {

using nlohmann::json;

std::optional<Date> parse_date(std::string_view iso) {
  if (iso.size() != 10 || iso[4] != '-' || iso[7] != '-') return std::nullopt;
  int y = 0;
  unsigned m = 0;
  unsigned d = 0;
  auto num = [](std::string_view s, auto& v) {
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    return ec == std::errc() && p == s.data() + s.size();
  };
  if (!num(iso.substr(0, 4), y) || !num(iso.substr(5, 2), m) || !num(iso.substr(8, 2), d)) {
    return std::nullopt;
  }
  std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{m},
                                  std::chrono::day{d}};
  if (!ymd.ok()) return std::nullopt;
  return Date{ymd};
}

std::string format_date(Date d) {
  std::chrono::year_month_day ymd{d};
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
  return buf;
}

std::string_view to_string(CandidateSource s) {
  switch (s) {
    case CandidateSource::kBootstrap: return "bootstrap";
    case CandidateSource::kAlign: return "align";
    case CandidateSource::kCrf: return "crf";
  }
  return "unknown";
}

std::optional<CandidateSource> parse_candidate_source(std::string_view s) {
  if (s == "bootstrap") return CandidateSource::kBootstrap;
  if (s == "align") return CandidateSource::kAlign;
  if (s == "crf") return CandidateSource::kCrf;
  return std::nullopt;
}

QueryLogLoad read_query_logs(std::istream& in, const Tokenizer& tokenizer,
                             const LogFilter& filter) {
  struct Pending {
    std::string query;
    // title text -> (summed clicks, latest date); std::map keeps output order stable
    std::map<std::string, std::pair<long long, Date>> titles;
    std::vector<std::string> title_order;
  };
  QueryLogLoad result;
  std::vector<Pending> pending;
  std::unordered_map<std::string, std::size_t> by_query;

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    auto fields = split(line, '\t');
    std::string query = normalize_text(fields[0]);
    if (query.empty()) {
      result.errors.push_back({line_no, "empty query"});
      continue;
    }
    if (fields.size() != 1 && fields.size() != 4) {
      result.errors.push_back({line_no, "expected 4 tab-separated fields, got " +
                                            std::to_string(fields.size())});
      continue;
    }
    std::optional<std::pair<std::string, std::pair<long long, Date>>> record;
    if (fields.size() == 4) {
      std::string title = normalize_text(fields[1]);
      long long clicks = -1;
      auto count_str = trim(fields[2]);
      auto [p, ec] = std::from_chars(count_str.data(), count_str.data() + count_str.size(), clicks);
      auto date = parse_date(trim(fields[3]));
      if (title.empty()) {
        result.errors.push_back({line_no, "empty title"});
        continue;
      }
      if (ec != std::errc() || p != count_str.data() + count_str.size() || clicks < 0) {
        result.errors.push_back({line_no, "bad click count '" + count_str + "'"});
        continue;
      }
      if (!date) {
        result.errors.push_back({line_no, "bad date '" + fields[3] + "'"});
        continue;
      }
      record.emplace(std::move(title), std::make_pair(clicks, *date));
    }

    auto [it, inserted] = by_query.try_emplace(query, pending.size());
    if (inserted) pending.push_back(Pending{query, {}, {}});
    if (!record) continue;

    auto age = (filter.today - record->second.second).count();
    if (age < 0 || age > filter.window_days) continue;
    Pending& p = pending[it->second];
    auto [tit, fresh] = p.titles.try_emplace(record->first, 0LL, record->second.second);
    if (fresh) p.title_order.push_back(record->first);
    tit->second.first += record->second.first;
    tit->second.second = std::max(tit->second.second, record->second.second);
  }
  if (in.bad()) throw CorpusError("read failure while loading query logs");

  result.entries.reserve(pending.size());
  for (std::size_t i = 0; i < pending.size(); ++i) {
    QueryLogEntry entry;
    entry.query.id = "q" + std::to_string(i + 1);
    entry.query.text = pending[i].query;
    entry.query.tokens = tokenizer.tokenize(entry.query.text);
    for (const auto& title : pending[i].title_order) {
      const auto& [clicks, date] = pending[i].titles.at(title);
      if (clicks <= filter.min_clicks) continue;
      entry.titles.push_back(ClickedTitle{title, tokenizer.tokenize(title), clicks, date});
    }
    result.entries.push_back(std::move(entry));
  }
  return result;
}

QueryLogLoad load_query_logs(const std::string& path, const Tokenizer& tokenizer,
                             const LogFilter& filter) {
  std::ifstream in(path);
  if (!in) throw CorpusError("cannot open query log: " + path);
  return read_query_logs(in, tokenizer, filter);
}

void write_query_logs(std::ostream& out, const std::vector<QueryLogEntry>& entries) {
  for (const auto& e : entries) {
    if (e.titles.empty()) {
      out << e.query.text << '\n';
      continue;
    }
    for (const auto& t : e.titles) {
      out << e.query.text << '\t' << t.text << '\t' << t.click_count << '\t'
          << format_date(t.date) << '\n';
    }
  }
}

DocumentLoad read_documents(std::istream& in, const Tokenizer& tokenizer) {
  DocumentLoad result;
  std::set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    json rec;
    try {
      rec = json::parse(line);
    } catch (const json::parse_error& e) {
      result.warnings.push_back({line_no, std::string("unparseable record: ") + e.what()});
      continue;
    }
    if (!rec.is_object() || !rec.contains("id")) {
      result.warnings.push_back({line_no, "record without id"});
      continue;
    }
    Document doc;
    doc.id = rec["id"].is_string() ? rec["id"].get<std::string>() : rec["id"].dump();
    std::string title = normalize_text(rec.value("title", std::string()));
    if (title.empty()) {
      result.warnings.push_back({line_no, "empty title, document '" + doc.id + "' skipped"});
      continue;
    }
    if (!seen.insert(doc.id).second) {
      throw CorpusError("duplicate document id '" + doc.id + "' at line " +
                        std::to_string(line_no));
    }
    doc.title = tokenizer.tokenize(title);
    doc.author = rec.value("author", std::string());
    if (rec.contains("topic") && rec["topic"].is_string()) doc.topic = rec["topic"].get<std::string>();

    std::vector<std::string> sentences;
    if (rec.contains("content")) {
      const auto& content = rec["content"];
      if (content.is_array()) {
        for (const auto& s : content) {
          if (s.is_string()) sentences.push_back(s.get<std::string>());
        }
      } else if (content.is_string()) {
        sentences = split_sentences(content.get<std::string>());
      }
    }
    for (const auto& s : sentences) {
      auto toks = tokenizer.tokenize(s);
      if (!toks.empty()) doc.sentences.push_back(std::move(toks));
    }
    result.documents.push_back(std::move(doc));
  }
  return result;
}

DocumentLoad load_documents(const std::string& path, const Tokenizer& tokenizer) {
  std::ifstream in(path);
  if (!in) throw CorpusError("cannot open documents: " + path);
  return read_documents(in, tokenizer);
}

void write_documents(std::ostream& out, const std::vector<Document>& docs) {
  for (const auto& d : docs) {
    json rec;
    rec["id"] = d.id;
    rec["title"] = join_surfaces(d.title);
    rec["author"] = d.author;
    json content = json::array();
    for (const auto& s : d.sentences) content.push_back(join_surfaces(s));
    rec["content"] = std::move(content);
    if (d.topic) rec["topic"] = *d.topic;
    out << rec.dump() << '\n';
  }
}

void write_candidates(std::ostream& out, const std::vector<ConceptCandidate>& candidates) {
  char buf[32];
  for (const auto& c : candidates) {
    std::snprintf(buf, sizeof buf, "%.6g", c.score);
    out << c.text << '\t' << to_string(c.source) << '\t' << buf << '\t' << c.provenance << '\n';
  }
}

std::vector<ConceptCandidate> read_candidates(std::istream& in, std::vector<RecordError>* errors) {
  std::vector<ConceptCandidate> out;
  std::string line;
  std::size_t line_no = 0;
  auto fail = [&](std::string msg) {
    if (errors) errors->push_back({line_no, std::move(msg)});
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    auto fields = split(line, '\t');
    if (fields.size() != 4) {
      fail("expected 4 fields");
      continue;
    }
    auto source = parse_candidate_source(fields[1]);
    if (!source) {
      fail("unknown source '" + fields[1] + "'");
      continue;
    }
    ConceptCandidate c;
    c.text = normalize_text(fields[0]);
    if (c.text.empty()) {
      fail("empty concept text");
      continue;
    }
    c.source = *source;
    try {
      c.score = std::stod(fields[2]);
    } catch (const std::exception&) {
      fail("bad score");
      continue;
    }
    c.provenance = fields[3];
    out.push_back(std::move(c));
  }
  return out;
}

std::vector<ConceptCandidate> load_candidates(const std::string& path,
                                              std::vector<RecordError>* errors) {
  std::ifstream in(path);
  if (!in) throw CorpusError("cannot open candidates: " + path);
  return read_candidates(in, errors);
}

}  // namespace conceptmine
