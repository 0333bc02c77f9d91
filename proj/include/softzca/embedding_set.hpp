#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace softzca {

/// Row-major so that a row is one contiguous embedding, as in NPY dumps.
using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// N x d matrix of row embeddings with optional per-row identifiers.
///
/// Construction validates N >= 1, d >= 2 and that every entry is finite, so a
/// live EmbeddingSet is always usable by the numerical routines.
class EmbeddingSet {
 public:
  explicit EmbeddingSet(RowMatrix data, std::vector<std::string> ids = {});

  const RowMatrix& data() const noexcept { return data_; }
  std::size_t rows() const noexcept { return static_cast<std::size_t>(data_.rows()); }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(data_.cols()); }

  /// Empty when the set carries no identifiers.
  const std::vector<std::string>& ids() const noexcept { return ids_; }

 private:
  RowMatrix data_;
  std::vector<std::string> ids_;
};

/// Row-wise concatenation [a; b]. Identifiers are kept only if both sides have them.
EmbeddingSet stack_rows(const EmbeddingSet& a, const EmbeddingSet& b);

}  // namespace softzca
