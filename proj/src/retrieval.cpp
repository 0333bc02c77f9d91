#include "softzca/retrieval.hpp"

#include <algorithm>
#include <numeric>
#include <string>
#include <utility>

#include "softzca/error.hpp"

namespace softzca {
namespace {

constexpr std::size_t kBlockRows = 256;

RowMatrix normalized_rows(const EmbeddingSet& x, std::string_view side) {
  RowMatrix out = x.data();
  for (Eigen::Index i = 0; i < out.rows(); ++i) {
    const double norm = out.row(i).norm();
    if (!(norm > 0.0)) {
      throw Error(ErrorKind::kZeroVector,
                  "zero-norm " + std::string(side) + " row " + std::to_string(i));
    }
    out.row(i) /= norm;
  }
  return out;
}

void check_dims(const EmbeddingSet& queries, const EmbeddingSet& documents) {
  if (queries.dim() != documents.dim()) {
    throw Error(ErrorKind::kShape, "query dimension " + std::to_string(queries.dim()) +
                                       " != document dimension " +
                                       std::to_string(documents.dim()));
  }
}

// Every similarity value, whether for the full matrix or the rank path, comes
// out of this one product with the same block shape, so both agree bitwise.
Matrix similarity_block(const RowMatrix& queries, const RowMatrix& documents,
                        Eigen::Index begin, Eigen::Index count) {
  return queries.middleRows(begin, count) * documents.transpose();
}

double reciprocal_rank(const Eigen::Ref<const Eigen::RowVectorXd>& row, Eigen::Index gold) {
  const double target = row(gold);
  std::size_t better = 0;
  for (Eigen::Index j = 0; j < row.size(); ++j) {
    if (row(j) > target) ++better;
  }
  return 1.0 / static_cast<double>(better + 1);
}

}  // namespace

PairedCorpus::PairedCorpus(EmbeddingSet queries, EmbeddingSet documents)
    : queries_(std::move(queries)), documents_(std::move(documents)) {
  if (queries_.rows() != documents_.rows()) {
    throw Error(ErrorKind::kShape, "paired corpus has " + std::to_string(queries_.rows()) +
                                       " queries but " + std::to_string(documents_.rows()) +
                                       " documents");
  }
  check_dims(queries_, documents_);
}

Direction parse_direction(std::string_view name) {
  if (name == "comment-to-code") return Direction::kCommentToCode;
  if (name == "code-to-comment") return Direction::kCodeToComment;
  throw Error(ErrorKind::kConfig, "unknown direction '" + std::string(name) + "'");
}

std::string_view to_string(Direction direction) noexcept {
  return direction == Direction::kCommentToCode ? "comment-to-code" : "code-to-comment";
}

Matrix cosine_similarity_matrix(const EmbeddingSet& queries, const EmbeddingSet& documents) {
  check_dims(queries, documents);
  const RowMatrix q = normalized_rows(queries, "query");
  const RowMatrix d = normalized_rows(documents, "document");

  Matrix out(q.rows(), d.rows());
  const auto block = static_cast<Eigen::Index>(kBlockRows);
  for (Eigen::Index begin = 0; begin < q.rows(); begin += block) {
    const Eigen::Index count = std::min(block, q.rows() - begin);
    out.middleRows(begin, count) = similarity_block(q, d, begin, count);
  }
  return out;
}

std::vector<double> reciprocal_ranks(const Matrix& similarity) {
  if (similarity.rows() != similarity.cols() || similarity.rows() == 0) {
    throw Error(ErrorKind::kShape, "similarity matrix must be square and non-empty, got " +
                                       std::to_string(similarity.rows()) + "x" +
                                       std::to_string(similarity.cols()));
  }
  std::vector<double> out(static_cast<std::size_t>(similarity.rows()));
  for (Eigen::Index i = 0; i < similarity.rows(); ++i) {
    out[static_cast<std::size_t>(i)] = reciprocal_rank(similarity.row(i), i);
  }
  return out;
}

std::vector<double> reciprocal_ranks_blocked(const EmbeddingSet& queries,
                                             const EmbeddingSet& documents,
                                             std::size_t block_rows) {
  check_dims(queries, documents);
  if (queries.rows() != documents.rows()) {
    throw Error(ErrorKind::kShape, "ranking needs as many documents as queries");
  }
  const RowMatrix q = normalized_rows(queries, "query");
  const RowMatrix d = normalized_rows(documents, "document");

  std::vector<double> out(queries.rows());
  const auto block = static_cast<Eigen::Index>(std::max<std::size_t>(block_rows, 1));
  for (Eigen::Index begin = 0; begin < q.rows(); begin += block) {
    const Eigen::Index count = std::min(block, q.rows() - begin);
    const Matrix s = similarity_block(q, d, begin, count);
    for (Eigen::Index r = 0; r < count; ++r) {
      out[static_cast<std::size_t>(begin + r)] = reciprocal_rank(s.row(r), begin + r);
    }
  }
  return out;
}

double mean_reciprocal_rank(const std::vector<double>& reciprocal_ranks) {
  if (reciprocal_ranks.empty()) {
    throw Error(ErrorKind::kShape, "MRR of an empty ranking is undefined");
  }
  return std::accumulate(reciprocal_ranks.begin(), reciprocal_ranks.end(), 0.0) /
         static_cast<double>(reciprocal_ranks.size());
}

EvalReport evaluate(const PairedCorpus& corpus, const WhiteningTransform* code_transform,
                    const WhiteningTransform* comment_transform, Direction direction) {
  const EmbeddingSet code =
      code_transform ? apply_transform(*code_transform, corpus.documents()) : corpus.documents();
  const EmbeddingSet comments = comment_transform
                                    ? apply_transform(*comment_transform, corpus.queries())
                                    : corpus.queries();

  EvalReport report;
  report.direction = direction;
  report.reciprocal_ranks = direction == Direction::kCommentToCode
                                ? reciprocal_ranks_blocked(comments, code, kBlockRows)
                                : reciprocal_ranks_blocked(code, comments, kBlockRows);
  report.mrr = mean_reciprocal_rank(report.reciprocal_ranks);
  report.isoscore_code = isoscore(code);
  report.isoscore_comment = isoscore(comments);

  // Tag the report with the whitening that produced it; identity or
  // centering-only maps count as "no whitening".
  for (const WhiteningTransform* t : {code_transform, comment_transform}) {
    if (t != nullptr && t->method != Method::kNone) {
      report.method = t->method;
      report.epsilon = t->epsilon;
      break;
    }
  }
  return report;
}

}  // namespace softzca
