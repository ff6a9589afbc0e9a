#include "conceptmine/tfidf.hpp"

#include "conceptmine/text.hpp"

#include <cmath>
#include <set>

namespace conceptmine {

void DocumentFrequency::add_document(std::span<const std::string> terms) {
  ++n_docs_;
  std::set<std::string> seen;
  for (const auto& t : terms) seen.insert(ascii_lower(t));
  for (const auto& t : seen) ++df_[t];
}

std::size_t DocumentFrequency::df(const std::string& term) const {
  auto it = df_.find(ascii_lower(term));
  return it == df_.end() ? 0 : it->second;
}

double DocumentFrequency::idf(const std::string& term) const {
  if (n_docs_ == 0) return 0.0;
  double v = std::log(static_cast<double>(n_docs_) / (1.0 + static_cast<double>(df(term))));
  return v > 0.0 ? v : 0.0;
}

SparseVector tfidf_vector(std::span<const std::string> terms, const DocumentFrequency& df) {
  std::map<std::string, double> tf;
  for (const auto& t : terms) tf[ascii_lower(t)] += 1.0;
  SparseVector out;
  for (const auto& [t, c] : tf) {
    double w = c * df.idf(t);
    if (w > 0.0) out.emplace(t, w);
  }
  return out;
}

double sparse_cosine(const SparseVector& a, const SparseVector& b) {
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (const auto& [t, w] : a) na += w * w;
  for (const auto& [t, w] : b) nb += w * w;
  if (na == 0.0 || nb == 0.0) return 0.0;
  const auto& small = a.size() <= b.size() ? a : b;
  const auto& large = a.size() <= b.size() ? b : a;
  for (const auto& [t, w] : small) {
    auto it = large.find(t);
    if (it != large.end()) dot += w * it->second;
  }
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

}  // namespace conceptmine
