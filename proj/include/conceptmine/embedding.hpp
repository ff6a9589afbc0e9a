#pragma once

#include "conceptmine/tokenizer.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace conceptmine {

class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;
  virtual std::size_t dim() const = 0;
  // nullopt when the term is out of vocabulary. Must be safe to call from
  // several threads at once.
  virtual std::optional<std::vector<double>> vector_of(std::string_view term) const = 0;
};

double cosine(std::span<const double> a, std::span<const double> b);

// In-memory term -> vector table. Lookup tries the exact term, then its
// ASCII-lowercased form, then the mean of its whitespace tokens when every
// token is known.
class EmbeddingTable : public EmbeddingProvider {
 public:
  EmbeddingTable() = default;
  explicit EmbeddingTable(std::size_t dim) : dim_(dim) {}

  void add(std::string term, std::vector<double> vec);
  std::size_t size() const { return table_.size(); }

  std::size_t dim() const override { return dim_; }
  std::optional<std::vector<double>> vector_of(std::string_view term) const override;

  // Text format: `term v1 ... vd` per line.
  void save(std::ostream& out) const;
  static EmbeddingTable load(std::istream& in);
  static EmbeddingTable load_file(const std::string& path);

 private:
  const std::vector<double>* find(std::string_view term) const;

  std::size_t dim_ = 0;
  std::unordered_map<std::string, std::vector<double>> table_;
};

struct PpmiSvdOptions {
  std::size_t dim = 32;
  std::size_t max_vocab = 5000;
  std::size_t min_count = 2;
  std::size_t window = 5;
  int power_iters = 4;
  std::uint64_t seed = 13;
};

// Positive PMI over windowed co-occurrence, factored by randomized truncated
// SVD. Rows are U_k * sqrt(S_k), scaled to unit length. Words are lowercased.
EmbeddingTable train_ppmi_svd(std::span<const std::vector<Token>> sentences,
                              const PpmiSvdOptions& options = {});

}  // namespace conceptmine
