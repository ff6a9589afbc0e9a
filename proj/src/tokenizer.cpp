#include "conceptmine/tokenizer.hpp"

#include "conceptmine/text.hpp"

#include <array>
#include <cctype>
#include <fstream>
#include <stdexcept>

namespace conceptmine {

namespace {

constexpr std::string_view kSplitPunct = ",.!?;:\"()[]{}";

bool is_split_punct(char c) { return kSplitPunct.find(c) != std::string_view::npos; }

bool all_punct(std::string_view s) {
  for (char c : s) {
    auto u = static_cast<unsigned char>(c);
    if (u >= 0x80 || std::isalnum(u)) return false;
  }
  return true;
}

bool looks_numeric(std::string_view s) {
  bool digit = false;
  for (char c : s) {
    auto u = static_cast<unsigned char>(c);
    if (std::isdigit(u)) {
      digit = true;
    } else if (c != '.' && c != ',' && c != '%' && c != '/') {
      return false;
    }
  }
  return digit;
}

struct Builtin {
  const char* word;
  const char* pos;
};

// Closed-class English words. Open-class words come from user lexicons.
constexpr std::array kBuiltin = {
    Builtin{"the", "DT"},   Builtin{"a", "DT"},       Builtin{"an", "DT"},
    Builtin{"this", "DT"},  Builtin{"that", "DT"},    Builtin{"these", "DT"},
    Builtin{"those", "DT"}, Builtin{"some", "DT"},    Builtin{"any", "DT"},
    Builtin{"all", "DT"},   Builtin{"every", "DT"},   Builtin{"no", "DT"},
    Builtin{"of", "IN"},    Builtin{"in", "IN"},      Builtin{"on", "IN"},
    Builtin{"for", "IN"},   Builtin{"with", "IN"},    Builtin{"to", "IN"},
    Builtin{"from", "IN"},  Builtin{"at", "IN"},      Builtin{"by", "IN"},
    Builtin{"about", "IN"}, Builtin{"under", "IN"},   Builtin{"than", "IN"},
    Builtin{"like", "IN"},  Builtin{"near", "IN"},    Builtin{"into", "IN"},
    Builtin{"and", "CC"},   Builtin{"or", "CC"},      Builtin{"but", "CC"},
    Builtin{"i", "PRP"},    Builtin{"you", "PRP"},    Builtin{"we", "PRP"},
    Builtin{"they", "PRP"}, Builtin{"it", "PRP"},     Builtin{"he", "PRP"},
    Builtin{"she", "PRP"},  Builtin{"my", "PRP"},     Builtin{"your", "PRP"},
    Builtin{"our", "PRP"},  Builtin{"their", "PRP"},  Builtin{"its", "PRP"},
    Builtin{"what", "WP"},  Builtin{"which", "WP"},   Builtin{"who", "WP"},
    Builtin{"where", "WP"}, Builtin{"when", "WP"},    Builtin{"why", "WP"},
    Builtin{"how", "WP"},   Builtin{"can", "MD"},     Builtin{"should", "MD"},
    Builtin{"will", "MD"},  Builtin{"would", "MD"},   Builtin{"could", "MD"},
    Builtin{"must", "MD"},  Builtin{"is", "VB"},      Builtin{"are", "VB"},
    Builtin{"was", "VB"},   Builtin{"were", "VB"},    Builtin{"be", "VB"},
    Builtin{"been", "VB"},  Builtin{"do", "VB"},      Builtin{"does", "VB"},
    Builtin{"did", "VB"},   Builtin{"have", "VB"},    Builtin{"has", "VB"},
    Builtin{"had", "VB"},   Builtin{"get", "VB"},     Builtin{"buy", "VB"},
    Builtin{"choose", "VB"}, Builtin{"find", "VB"},   Builtin{"see", "VB"},
    Builtin{"make", "VB"},  Builtin{"prepare", "VB"}, Builtin{"not", "RB"},
    Builtin{"very", "RB"},  Builtin{"most", "RB"},    Builtin{"more", "RB"},
    Builtin{"best", "JJ"},  Builtin{"good", "JJ"},    Builtin{"top", "JJ"},
    Builtin{"new", "JJ"},   Builtin{"cheap", "JJ"},   Builtin{"last", "JJ"},
};

}  // namespace

const TagSet& TagSet::standard() {
  static const TagSet tags;
  return tags;
}

bool is_noun_tag(std::string_view pos) { return pos == "NN" || pos == "NNP"; }

LexiconTokenizer::LexiconTokenizer() : LexiconTokenizer(true) {}

LexiconTokenizer::LexiconTokenizer(bool with_builtin_lexicon) {
  if (!with_builtin_lexicon) return;
  for (const auto& b : kBuiltin) lexicon_[b.word] = Entry{b.pos, "O"};
}

void LexiconTokenizer::add_entry(std::string_view word, std::string pos, std::string ner) {
  Token probe{std::string(word), pos, ner};
  if (!TagSet::standard().valid(probe)) {
    throw std::invalid_argument("lexicon entry outside tag set: " + std::string(word) +
                                " " + pos + " " + ner);
  }
  lexicon_[ascii_lower(word)] = Entry{std::move(pos), std::move(ner)};
}

std::size_t LexiconTokenizer::load_lexicon(std::istream& in) {
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    auto fields = split(line, '\t');
    if (fields.size() < 2) continue;
    add_entry(fields[0], fields[1], fields.size() > 2 ? fields[2] : "O");
    ++n;
  }
  return n;
}

void LexiconTokenizer::load_lexicon_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open lexicon: " + path);
  load_lexicon(in);
}

std::vector<Token> LexiconTokenizer::tokenize(std::string_view text) const {
  std::vector<std::string> pieces;
  for (const auto& chunk : split_whitespace(text)) {
    std::size_t b = 0;
    std::size_t e = chunk.size();
    std::vector<std::string> trailing;
    while (b < e && is_split_punct(chunk[b])) pieces.emplace_back(1, chunk[b++]);
    while (e > b && is_split_punct(chunk[e - 1])) trailing.emplace_back(1, chunk[--e]);
    if (e > b) pieces.push_back(chunk.substr(b, e - b));
    pieces.insert(pieces.end(), trailing.rbegin(), trailing.rend());
  }

  std::vector<Token> tokens;
  tokens.reserve(pieces.size());
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    Token t;
    t.surface = pieces[i];
    auto it = lexicon_.find(ascii_lower(t.surface));
    if (it != lexicon_.end()) {
      t.pos = it->second.pos;
      t.ner = it->second.ner;
    } else if (all_punct(t.surface)) {
      t.pos = "PUNCT";
    } else if (looks_numeric(t.surface)) {
      t.pos = "CD";
    } else if (i > 0 && std::isupper(static_cast<unsigned char>(t.surface[0]))) {
      t.pos = "NNP";
      t.ner = "ENT";
    }
    tokens.push_back(std::move(t));
  }
  return tokens;
}

std::vector<std::string> surfaces(const std::vector<Token>& tokens) {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) out.push_back(t.surface);
  return out;
}

std::string join_surfaces(const std::vector<Token>& tokens) { return join(surfaces(tokens), " "); }

std::vector<std::string> split_sentences(std::string_view content) {
  static constexpr std::array<std::string_view, 6> kTerminators = {
      ".", "!", "?", "\xE3\x80\x82", "\xEF\xBC\x81", "\xEF\xBC\x9F"};
  auto terminator_at = [&](std::size_t i) -> std::size_t {
    for (auto t : kTerminators) {
      if (content.substr(i, t.size()) == t) return t.size();
    }
    return 0;
  };

  std::vector<std::string> out;
  std::string current;
  auto flush = [&] {
    std::string s = trim(current);
    if (!s.empty()) out.push_back(std::move(s));
    current.clear();
  };
  std::size_t i = 0;
  while (i < content.size()) {
    char c = content[i];
    if (c == '\n' || c == '\r') {
      flush();
      ++i;
      continue;
    }
    std::size_t n = terminator_at(i);
    if (n == 0) {
      current.push_back(c);
      ++i;
      continue;
    }
    while (n > 0) {
      current.append(content.substr(i, n));
      i += n;
      n = i < content.size() ? terminator_at(i) : 0;
    }
    // ASCII terminators end a sentence only before whitespace, so "2.5L"
    // stays intact; full-width ones always do.
    unsigned char last = static_cast<unsigned char>(current.back());
    if (i >= content.size() || last >= 0x80 || content[i] == ' ' || content[i] == '\t' ||
        content[i] == '\n' || content[i] == '\r') {
      flush();
    }
  }
  flush();
  return out;
}

}  // namespace conceptmine
