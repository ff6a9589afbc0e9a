#pragma once

#include <istream>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace conceptmine {

struct Token {
  std::string surface;
  std::string pos = "NN";
  std::string ner = "O";

  bool operator==(const Token&) const = default;
};

// Closed POS and NER label sets. Tokens carrying labels outside these sets
// are rejected at ingestion.
struct TagSet {
  std::set<std::string> pos{"NN", "NNP", "JJ", "VB", "RB", "DT", "IN", "CC",
                            "PRP", "WP", "MD", "CD", "PUNCT", "X"};
  std::set<std::string> ner{"O", "PER", "ORG", "LOC", "PRODUCT", "ENT"};

  bool valid(const Token& t) const {
    return !t.surface.empty() && pos.count(t.pos) && ner.count(t.ner);
  }
  static const TagSet& standard();
};

bool is_noun_tag(std::string_view pos);

class Tokenizer {
 public:
  virtual ~Tokenizer() = default;
  // Deterministic: identical input always yields identical tokens. Joining
  // the surfaces reproduces the input with whitespace removed.
  virtual std::vector<Token> tokenize(std::string_view text) const = 0;
};

// Whitespace segmentation with punctuation splitting, tagged from a lexicon
// with shape-based fallbacks (digits -> CD, capitalized non-initial -> NNP,
// everything else -> NN).
class LexiconTokenizer : public Tokenizer {
 public:
  LexiconTokenizer();  // seeded with a built-in closed-class lexicon
  explicit LexiconTokenizer(bool with_builtin_lexicon);

  void add_entry(std::string_view word, std::string pos, std::string ner = "O");
  // Lines: `word \t POS [\t NER]`; '#' starts a comment. Returns entries read.
  std::size_t load_lexicon(std::istream& in);
  void load_lexicon_file(const std::string& path);

  std::vector<Token> tokenize(std::string_view text) const override;

 private:
  struct Entry {
    std::string pos;
    std::string ner;
  };
  std::unordered_map<std::string, Entry> lexicon_;
};

std::vector<std::string> surfaces(const std::vector<Token>& tokens);
std::string join_surfaces(const std::vector<Token>& tokens);

// Splits running text into sentences at newlines and after runs of sentence
// terminators (. ! ? and their full-width forms) followed by whitespace.
std::vector<std::string> split_sentences(std::string_view content);

}  // namespace conceptmine
