#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace solmine::sim {

// Lowercased words plus math tokens kept whole: `sol_g(x)`, `p^2`, `\cap`.
std::vector<std::string> tokenize(std::string_view text);

// (term index, weight), sorted by index, L2-normalised unless all zero.
using SparseVector = std::vector<std::pair<std::size_t, double>>;

class Vectorizer {
 public:
  // tf-idf with smoothed idf: ln((1 + N) / (1 + df)) + 1.
  void fit(const std::vector<std::string>& documents);
  SparseVector transform(std::string_view text) const;

  std::size_t vocabulary_size() const { return idf_.size(); }
  std::size_t document_count() const { return documents_; }

 private:
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<double> idf_;
  std::size_t documents_ = 0;
};

double cosine(const SparseVector& a, const SparseVector& b);

struct SimilarityMatrix {
  std::vector<std::string> row_labels;
  std::vector<std::string> col_labels;
  std::vector<double> values;  // row-major

  std::size_t rows() const { return row_labels.size(); }
  std::size_t cols() const { return col_labels.size(); }
  double at(std::size_t i, std::size_t j) const { return values[i * cols() + j]; }
  double& at(std::size_t i, std::size_t j) { return values[i * cols() + j]; }
};

// Fits on a ∪ b, then compares every document of a with every one of b.
// Pairs involving an all-zero vector score 0.
SimilarityMatrix cosine_matrix(const std::vector<std::string>& a, const std::vector<std::string>& b,
                               std::vector<std::string> row_labels = {},
                               std::vector<std::string> col_labels = {});
SimilarityMatrix self_matrix(const std::vector<std::string>& docs, std::vector<std::string> labels = {});

struct Stats {
  double max = 0, min = 0, mean = 0, median = 0;
  std::size_t count = 0;
};

// Throws std::invalid_argument when nothing is selected.
Stats similarity_stats(const SimilarityMatrix& m, bool exclude_diagonal);

// RFC 4180 style; `significant` digits per value.
void write_csv(const SimilarityMatrix& m, std::ostream& out, int significant = 6);
SimilarityMatrix read_csv(std::istream& in);
void write_svg(const SimilarityMatrix& m, std::ostream& out);

// Writes `path` as CSV, plus a sibling .svg when asked.
void export_heatmap(const SimilarityMatrix& m, const std::filesystem::path& path, bool svg = false,
                    int significant = 6);

}  // namespace solmine::sim
