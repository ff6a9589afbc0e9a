#pragma once

#include "conceptmine/crf.hpp"
#include "conceptmine/tokenizer.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace conceptmine {

enum class Bio : int { O = 0, B = 1, I = 2 };

char bio_char(Bio b);
std::optional<Bio> parse_bio(std::string_view s);

struct LabeledSequence {
  std::vector<Token> tokens;
  std::vector<Bio> labels;
};

// Lengths agree and no I follows O or starts the sequence.
bool is_valid_bio(const LabeledSequence& seq);

// Concatenates every B/I token in order, so split concepts come out whole.
std::string concept_text(const LabeledSequence& seq);

// Labels the concept's whitespace tokens in `tokens`: a contiguous match if
// one exists, else the leftmost in-order embedding (each gap restarts with B).
std::optional<LabeledSequence> label_concept(const std::vector<Token>& tokens,
                                             std::string_view concept_text);

inline constexpr std::string_view kFeatureTemplateVersion = "word-pos-ner-context/1";
inline constexpr std::string_view kBos = "<s>";
inline constexpr std::string_view kEos = "</s>";

// Nine templates: word; NER; POS; <prev word, word>; <prev word, next word>;
// <prev POS, POS>; <POS, next POS>; <prev POS, word>; <word, next POS>.
// Words are ASCII-lowercased; sentinels stand in past either edge.
std::vector<std::string> extract_features(const std::vector<Token>& tokens, std::size_t position);

struct CrfTrainOptions {
  double l2 = 0.1;
  int max_epochs = 300;
  double tol = 1e-3;
};

class CrfModel {
 public:
  const LinearChainCrf& crf() const { return crf_; }
  LinearChainCrf& crf() { return crf_; }
  const std::string& template_version() const { return template_version_; }
  std::size_t num_features() const { return names_.size(); }
  const AscentReport& training_report() const { return report_; }

  FeatureSequence featurize(const std::vector<Token>& tokens) const;

  void save(std::ostream& out) const;
  static CrfModel load(std::istream& in);
  void save_file(const std::string& path) const;
  static CrfModel load_file(const std::string& path);

 private:
  friend CrfModel train_crf(const std::vector<LabeledSequence>&, const CrfTrainOptions&);
  friend CrfModel make_crf_model(std::vector<std::string> names);

  std::size_t intern(const std::string& name);
  void init_crf();

  std::string template_version_{kFeatureTemplateVersion};
  std::vector<std::string> names_;
  std::unordered_map<std::string, std::size_t> index_;
  LinearChainCrf crf_;
  AscentReport report_;
};

// Model over a fixed feature inventory with zero weights and BIO constraints.
CrfModel make_crf_model(std::vector<std::string> names);

// Throws std::invalid_argument naming the first invalid sequence index.
CrfModel train_crf(const std::vector<LabeledSequence>& data, const CrfTrainOptions& options = {});

LabeledSequence decode(const CrfModel& model, const std::vector<Token>& tokens);

// Columns `token POS NER label`, blank line between sequences.
void write_training_data(std::ostream& out, const std::vector<LabeledSequence>& data);
std::vector<LabeledSequence> read_training_data(std::istream& in);

}  // namespace conceptmine
