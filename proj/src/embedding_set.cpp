#include "softzca/embedding_set.hpp"

#include <string>
#include <utility>

#include "softzca/error.hpp"

namespace softzca {

EmbeddingSet::EmbeddingSet(RowMatrix data, std::vector<std::string> ids)
    : data_(std::move(data)), ids_(std::move(ids)) {
  if (data_.rows() < 1) {
    throw Error(ErrorKind::kShape, "embedding set needs at least one row");
  }
  if (data_.cols() < 2) {
    throw Error(ErrorKind::kShape, "embedding dimension must be >= 2, got " +
                                       std::to_string(data_.cols()));
  }
  if (!ids_.empty() && ids_.size() != rows()) {
    throw Error(ErrorKind::kShape, "got " + std::to_string(ids_.size()) + " ids for " +
                                       std::to_string(rows()) + " rows");
  }
  if (!data_.allFinite()) {
    for (Eigen::Index i = 0; i < data_.rows(); ++i) {
      if (!data_.row(i).allFinite()) {
        throw Error(ErrorKind::kInvalidInput,
                    "non-finite value in embedding row " + std::to_string(i));
      }
    }
  }
}

EmbeddingSet stack_rows(const EmbeddingSet& a, const EmbeddingSet& b) {
  if (a.dim() != b.dim()) {
    throw Error(ErrorKind::kShape, "cannot stack dimensions " + std::to_string(a.dim()) +
                                       " and " + std::to_string(b.dim()));
  }
  RowMatrix out(a.data().rows() + b.data().rows(), a.data().cols());
  out.topRows(a.data().rows()) = a.data();
  out.bottomRows(b.data().rows()) = b.data();

  std::vector<std::string> ids;
  if (!a.ids().empty() && !b.ids().empty()) {
    ids = a.ids();
    ids.insert(ids.end(), b.ids().begin(), b.ids().end());
  }
  return EmbeddingSet(std::move(out), std::move(ids));
}

}  // namespace softzca
