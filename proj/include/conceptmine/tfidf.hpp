#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace conceptmine {

using SparseVector = std::map<std::string, double>;

// Document-frequency table. Terms are ASCII-lowercased.
class DocumentFrequency {
 public:
  void add_document(std::span<const std::string> terms);
  std::size_t num_documents() const { return n_docs_; }
  std::size_t df(const std::string& term) const;
  // max(0, ln(N / (1 + df))).
  double idf(const std::string& term) const;

 private:
  std::size_t n_docs_ = 0;
  std::map<std::string, std::size_t> df_;
};

// Raw term counts times idf. Zero-weight terms are dropped.
SparseVector tfidf_vector(std::span<const std::string> terms, const DocumentFrequency& df);
double sparse_cosine(const SparseVector& a, const SparseVector& b);

}  // namespace conceptmine
