#include "conceptmine/embedding.hpp"

#include "conceptmine/text.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <Eigen/Sparse>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>

namespace conceptmine {

double cosine(std::span<const double> a, std::span<const double> b) {
  double ab = 0.0, aa = 0.0, bb = 0.0;
  for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) {
    ab += a[i] * b[i];
    aa += a[i] * a[i];
    bb += b[i] * b[i];
  }
  if (aa <= 0.0 || bb <= 0.0) return 0.0;
  return ab / (std::sqrt(aa) * std::sqrt(bb));
}

void EmbeddingTable::add(std::string term, std::vector<double> vec) {
  if (dim_ == 0) dim_ = vec.size();
  if (vec.size() != dim_) {
    throw std::invalid_argument("embedding for '" + term + "' has dimension " +
                                std::to_string(vec.size()) + ", expected " + std::to_string(dim_));
  }
  table_[std::move(term)] = std::move(vec);
}

const std::vector<double>* EmbeddingTable::find(std::string_view term) const {
  auto it = table_.find(std::string(term));
  if (it != table_.end()) return &it->second;
  it = table_.find(ascii_lower(term));
  return it == table_.end() ? nullptr : &it->second;
}

std::optional<std::vector<double>> EmbeddingTable::vector_of(std::string_view term) const {
  if (const auto* v = find(term)) return *v;
  auto parts = split_whitespace(term);
  if (parts.size() < 2) return std::nullopt;
  std::vector<double> mean(dim_, 0.0);
  for (const auto& p : parts) {
    const auto* v = find(p);
    if (!v) return std::nullopt;
    for (std::size_t i = 0; i < dim_; ++i) mean[i] += (*v)[i];
  }
  for (double& x : mean) x /= static_cast<double>(parts.size());
  return mean;
}

void EmbeddingTable::save(std::ostream& out) const {
  std::map<std::string, const std::vector<double>*> sorted;
  for (const auto& [t, v] : table_) sorted.emplace(t, &v);
  out.precision(9);
  for (const auto& [t, v] : sorted) {
    out << t;
    for (double x : *v) out << ' ' << x;
    out << '\n';
  }
}

EmbeddingTable EmbeddingTable::load(std::istream& in) {
  EmbeddingTable table;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto cells = split_whitespace(line);
    if (cells.empty()) continue;
    if (cells.size() < 2) {
      throw std::runtime_error("embedding line " + std::to_string(line_no) + " has no vector");
    }
    std::vector<double> v;
    v.reserve(cells.size() - 1);
    for (std::size_t i = 1; i < cells.size(); ++i) v.push_back(std::stod(cells[i]));
    table.add(cells[0], std::move(v));
  }
  return table;
}

EmbeddingTable EmbeddingTable::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open embeddings: " + path);
  return load(in);
}

EmbeddingTable train_ppmi_svd(std::span<const std::vector<Token>> sentences,
                              const PpmiSvdOptions& options) {
  std::map<std::string, std::size_t> counts;
  for (const auto& s : sentences) {
    for (const auto& t : s) {
      if (t.pos != "PUNCT") ++counts[ascii_lower(t.surface)];
    }
  }
  std::vector<std::pair<std::string, std::size_t>> vocab;
  for (const auto& [w, c] : counts) {
    if (c >= options.min_count) vocab.emplace_back(w, c);
  }
  std::stable_sort(vocab.begin(), vocab.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  if (vocab.size() > options.max_vocab) vocab.resize(options.max_vocab);
  std::sort(vocab.begin(), vocab.end());
  std::unordered_map<std::string, int> id;
  for (std::size_t i = 0; i < vocab.size(); ++i) id.emplace(vocab[i].first, static_cast<int>(i));
  const auto V = static_cast<Eigen::Index>(vocab.size());
  if (V == 0) return EmbeddingTable(options.dim);

  std::map<std::pair<int, int>, double> cooc;
  std::vector<double> marginal(vocab.size(), 0.0);
  double total = 0.0;
  for (const auto& s : sentences) {
    std::vector<int> ids;
    for (const auto& t : s) {
      auto it = id.find(ascii_lower(t.surface));
      if (it != id.end() && t.pos != "PUNCT") ids.push_back(it->second);
    }
    for (std::size_t a = 0; a < ids.size(); ++a) {
      for (std::size_t b = a + 1; b < ids.size() && b - a <= options.window; ++b) {
        if (ids[a] == ids[b]) continue;
        cooc[{ids[a], ids[b]}] += 1.0;
        cooc[{ids[b], ids[a]}] += 1.0;
        marginal[ids[a]] += 1.0;
        marginal[ids[b]] += 1.0;
        total += 2.0;
      }
    }
  }
  std::vector<Eigen::Triplet<double>> trip;
  for (const auto& [ij, c] : cooc) {
    double pmi = std::log(c * total / (marginal[ij.first] * marginal[ij.second]));
    if (pmi > 0) trip.emplace_back(ij.first, ij.second, pmi);
  }
  Eigen::SparseMatrix<double> M(V, V);
  M.setFromTriplets(trip.begin(), trip.end());

  const Eigen::Index k = std::min<Eigen::Index>(static_cast<Eigen::Index>(options.dim), V);
  const Eigen::Index width = std::min<Eigen::Index>(k + 8, V);
  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::MatrixXd omega(V, width);
  for (Eigen::Index i = 0; i < V; ++i) {
    for (Eigen::Index j = 0; j < width; ++j) omega(i, j) = gauss(rng);
  }
  Eigen::MatrixXd Y = M * omega;
  for (int p = 0; p < options.power_iters; ++p) {
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(Y);
    Eigen::MatrixXd Q = qr.householderQ() * Eigen::MatrixXd::Identity(V, width);
    Y = M * (M.transpose() * Q);
  }
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(Y);
  Eigen::MatrixXd Q = qr.householderQ() * Eigen::MatrixXd::Identity(V, width);
  Eigen::MatrixXd B = Q.transpose() * M;
  Eigen::BDCSVD<Eigen::MatrixXd> svd(B, Eigen::ComputeThinU);
  Eigen::MatrixXd U = Q * svd.matrixU().leftCols(k);
  Eigen::VectorXd S = svd.singularValues().head(k);

  EmbeddingTable table(static_cast<std::size_t>(k));
  for (Eigen::Index i = 0; i < V; ++i) {
    std::vector<double> v(static_cast<std::size_t>(k));
    double norm = 0.0;
    for (Eigen::Index j = 0; j < k; ++j) {
      v[j] = U(i, j) * std::sqrt(std::max(0.0, S(j)));
      norm += v[j] * v[j];
    }
    if (norm > 0) {
      norm = std::sqrt(norm);
      for (double& x : v) x /= norm;
    }
    table.add(vocab[i].first, std::move(v));
  }
  return table;
}

}  // namespace conceptmine
