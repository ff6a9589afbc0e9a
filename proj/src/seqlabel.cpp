#include "conceptmine/seqlabel.hpp"

#include "conceptmine/text.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

namespace conceptmine {

namespace {

constexpr std::size_t kNumLabels = 3;

void apply_bio_constraints(LinearChainCrf& crf) {
  const auto I = static_cast<std::size_t>(Bio::I);
  crf.set_allowed(crf.start_row(), I, false);
  crf.set_allowed(static_cast<std::size_t>(Bio::O), I, false);
}

}  // namespace

char bio_char(Bio b) {
  switch (b) {
    case Bio::O: return 'O';
    case Bio::B: return 'B';
    case Bio::I: return 'I';
  }
  return '?';
}

std::optional<Bio> parse_bio(std::string_view s) {
  if (s == "O") return Bio::O;
  if (s == "B") return Bio::B;
  if (s == "I") return Bio::I;
  return std::nullopt;
}

bool is_valid_bio(const LabeledSequence& seq) {
  if (seq.labels.size() != seq.tokens.size()) return false;
  Bio prev = Bio::O;
  for (Bio b : seq.labels) {
    if (b == Bio::I && prev == Bio::O) return false;
    prev = b;
  }
  return true;
}

std::string concept_text(const LabeledSequence& seq) {
  std::string out;
  for (std::size_t i = 0; i < seq.tokens.size() && i < seq.labels.size(); ++i) {
    if (seq.labels[i] == Bio::O) continue;
    if (!out.empty()) out.push_back(' ');
    out += seq.tokens[i].surface;
  }
  return out;
}

std::optional<LabeledSequence> label_concept(const std::vector<Token>& tokens,
                                             std::string_view concept_text) {
  auto parts = split_whitespace(concept_text);
  if (parts.empty() || parts.size() > tokens.size()) return std::nullopt;
  LabeledSequence seq{tokens, std::vector<Bio>(tokens.size(), Bio::O)};

  for (std::size_t s = 0; s + parts.size() <= tokens.size(); ++s) {
    bool match = true;
    for (std::size_t k = 0; k < parts.size() && match; ++k) {
      match = tokens[s + k].surface == parts[k];
    }
    if (!match) continue;
    seq.labels[s] = Bio::B;
    for (std::size_t k = 1; k < parts.size(); ++k) seq.labels[s + k] = Bio::I;
    return seq;
  }

  std::size_t k = 0;
  std::optional<std::size_t> last;
  for (std::size_t t = 0; t < tokens.size() && k < parts.size(); ++t) {
    if (tokens[t].surface != parts[k]) continue;
    seq.labels[t] = (last && *last + 1 == t) ? Bio::I : Bio::B;
    last = t;
    ++k;
  }
  if (k < parts.size()) return std::nullopt;
  return seq;
}

std::vector<std::string> extract_features(const std::vector<Token>& tokens, std::size_t position) {
  const Token& cur = tokens.at(position);
  const std::string word = ascii_lower(cur.surface);
  const std::string prev_word =
      position > 0 ? ascii_lower(tokens[position - 1].surface) : std::string(kBos);
  const std::string next_word =
      position + 1 < tokens.size() ? ascii_lower(tokens[position + 1].surface) : std::string(kEos);
  const std::string& pos = cur.pos;
  const std::string prev_pos = position > 0 ? tokens[position - 1].pos : std::string(kBos);
  const std::string next_pos =
      position + 1 < tokens.size() ? tokens[position + 1].pos : std::string(kEos);

  return {
      "w=" + word,
      "ner=" + cur.ner,
      "pos=" + pos,
      "pw|w=" + prev_word + "|" + word,
      "pw|nw=" + prev_word + "|" + next_word,
      "pp|p=" + prev_pos + "|" + pos,
      "p|np=" + pos + "|" + next_pos,
      "pp|w=" + prev_pos + "|" + word,
      "w|np=" + word + "|" + next_pos,
  };
}

std::size_t CrfModel::intern(const std::string& name) {
  auto [it, fresh] = index_.try_emplace(name, names_.size());
  if (fresh) names_.push_back(name);
  return it->second;
}

void CrfModel::init_crf() {
  crf_ = LinearChainCrf(kNumLabels, names_.size());
  apply_bio_constraints(crf_);
}

FeatureSequence CrfModel::featurize(const std::vector<Token>& tokens) const {
  FeatureSequence x;
  x.positions.resize(tokens.size());
  for (std::size_t t = 0; t < tokens.size(); ++t) {
    for (const auto& f : extract_features(tokens, t)) {
      auto it = index_.find(f);
      if (it != index_.end()) x.positions[t].push_back(it->second);
    }
  }
  return x;
}

CrfModel make_crf_model(std::vector<std::string> names) {
  CrfModel m;
  for (auto& n : names) m.intern(n);
  m.init_crf();
  return m;
}

CrfModel train_crf(const std::vector<LabeledSequence>& data, const CrfTrainOptions& options) {
  if (data.empty()) throw std::invalid_argument("train_crf: empty training data");
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (!is_valid_bio(data[i])) {
      throw std::invalid_argument("train_crf: sequence " + std::to_string(i) +
                                  " violates BIO labeling");
    }
  }
  CrfModel model;
  std::vector<CrfExample> examples;
  examples.reserve(data.size());
  for (const auto& seq : data) {
    CrfExample ex;
    ex.x.positions.resize(seq.tokens.size());
    for (std::size_t t = 0; t < seq.tokens.size(); ++t) {
      for (const auto& f : extract_features(seq.tokens, t)) {
        ex.x.positions[t].push_back(model.intern(f));
      }
      ex.y.push_back(static_cast<int>(seq.labels[t]));
    }
    examples.push_back(std::move(ex));
  }
  model.init_crf();
  AscentOptions opt;
  opt.max_iters = options.max_epochs;
  opt.tol = options.tol;
  opt.initial_step = 1.0 / static_cast<double>(examples.size());
  model.report_ = model.crf_.train(examples, options.l2, opt);
  return model;
}

LabeledSequence decode(const CrfModel& model, const std::vector<Token>& tokens) {
  LabeledSequence out{tokens, {}};
  auto path = model.crf().viterbi(model.featurize(tokens));
  out.labels.reserve(path.size());
  for (int y : path) out.labels.push_back(static_cast<Bio>(y));
  return out;
}

void CrfModel::save(std::ostream& out) const {
  const std::size_t L = crf_.num_labels();
  char buf[64];
  auto num = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  out << "conceptmine-crf 1\n";
  out << "templates " << template_version_ << "\n";
  out << "labels O B I\n";
  out << "transitions " << (L + 1) << "\n";
  for (std::size_t p = 0; p <= L; ++p) {
    for (std::size_t y = 0; y < L; ++y) {
      out << (y ? "\t" : "") << num(crf_.transition(p, y));
    }
    out << "\n";
  }
  out << "features " << names_.size() << "\n";
  for (std::size_t f = 0; f < names_.size(); ++f) {
    out << names_[f];
    for (std::size_t y = 0; y < L; ++y) out << '\t' << num(crf_.emission(f, y));
    out << '\n';
  }
}

CrfModel CrfModel::load(std::istream& in) {
  auto fail = [](const std::string& what) {
    throw std::runtime_error("malformed CRF model: " + what);
  };
  std::string line;
  if (!std::getline(in, line) || line != "conceptmine-crf 1") fail("header");
  CrfModel m;
  if (!std::getline(in, line) || !line.starts_with("templates ")) fail("templates");
  m.template_version_ = line.substr(10);
  if (m.template_version_ != kFeatureTemplateVersion) {
    fail("unsupported feature templates '" + m.template_version_ + "'");
  }
  if (!std::getline(in, line) || line != "labels O B I") fail("labels");
  if (!std::getline(in, line) || line != "transitions 4") fail("transitions");
  std::vector<double> trans;
  for (int r = 0; r < 4; ++r) {
    if (!std::getline(in, line)) fail("transition row");
    auto cells = split(line, '\t');
    if (cells.size() != kNumLabels) fail("transition row width");
    for (auto& c : cells) trans.push_back(std::stod(c));
  }
  if (!std::getline(in, line) || !line.starts_with("features ")) fail("features");
  std::size_t n = std::stoul(line.substr(9));
  std::vector<std::vector<double>> emissions;
  emissions.reserve(n);
  for (std::size_t f = 0; f < n; ++f) {
    if (!std::getline(in, line)) fail("truncated feature table");
    auto cells = split(line, '\t');
    if (cells.size() != kNumLabels + 1) fail("feature row width");
    if (m.intern(cells[0]) != f) fail("duplicate feature " + cells[0]);
    emissions.push_back({std::stod(cells[1]), std::stod(cells[2]), std::stod(cells[3])});
  }
  m.init_crf();
  for (std::size_t f = 0; f < n; ++f) {
    for (std::size_t y = 0; y < kNumLabels; ++y) m.crf_.emission(f, y) = emissions[f][y];
  }
  for (std::size_t p = 0; p <= kNumLabels; ++p) {
    for (std::size_t y = 0; y < kNumLabels; ++y) {
      m.crf_.weights()[m.crf_.transition_index(p, y)] = trans[p * kNumLabels + y];
    }
  }
  return m;
}

void CrfModel::save_file(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write model: " + path);
  save(out);
}

CrfModel CrfModel::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open model: " + path);
  return load(in);
}

void write_training_data(std::ostream& out, const std::vector<LabeledSequence>& data) {
  for (const auto& seq : data) {
    for (std::size_t i = 0; i < seq.tokens.size(); ++i) {
      const auto& t = seq.tokens[i];
      out << t.surface << '\t' << t.pos << '\t' << t.ner << '\t' << bio_char(seq.labels[i]) << '\n';
    }
    out << '\n';
  }
}

std::vector<LabeledSequence> read_training_data(std::istream& in) {
  std::vector<LabeledSequence> out;
  LabeledSequence cur;
  std::string line;
  std::size_t line_no = 0;
  auto flush = [&] {
    if (!cur.tokens.empty()) out.push_back(std::move(cur));
    cur = {};
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) {
      flush();
      continue;
    }
    auto cells = split(line, '\t');
    if (cells.size() != 4) {
      throw std::runtime_error("training data line " + std::to_string(line_no) +
                               ": expected 4 columns");
    }
    auto label = parse_bio(cells[3]);
    if (!label) {
      throw std::runtime_error("training data line " + std::to_string(line_no) +
                               ": bad label '" + cells[3] + "'");
    }
    cur.tokens.push_back(Token{cells[0], cells[1], cells[2]});
    cur.labels.push_back(*label);
  }
  flush();
  return out;
}

}  // namespace conceptmine
