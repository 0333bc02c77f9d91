#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "softzca/embedding_set.hpp"
#include "softzca/isoscore.hpp"
#include "softzca/whitening.hpp"

namespace softzca {

/// Row i of `queries` (comments) is paired with row i of `documents` (code).
class PairedCorpus {
 public:
  PairedCorpus(EmbeddingSet queries, EmbeddingSet documents);

  const EmbeddingSet& queries() const noexcept { return queries_; }
  const EmbeddingSet& documents() const noexcept { return documents_; }
  std::size_t size() const noexcept { return queries_.rows(); }

 private:
  EmbeddingSet queries_;
  EmbeddingSet documents_;
};

enum class Direction { kCommentToCode, kCodeToComment };

Direction parse_direction(std::string_view name);
std::string_view to_string(Direction direction) noexcept;

struct EvalReport {
  std::vector<double> reciprocal_ranks;
  double mrr = 0.0;
  IsoScoreValue isoscore_code;
  IsoScoreValue isoscore_comment;
  std::optional<double> epsilon;
  std::optional<Method> method;
  Direction direction = Direction::kCommentToCode;
};

/// Dense N_q x N_d cosine similarities. Throws kZeroVector naming the side
/// and row of any zero-norm row.
Matrix cosine_similarity_matrix(const EmbeddingSet& queries, const EmbeddingSet& documents);

/// 1 / rank of the diagonal entry in each row, where rank counts only
/// strictly larger competitors (ties favour the gold item).
std::vector<double> reciprocal_ranks(const Matrix& similarity);

/// Same result as reciprocal_ranks(cosine_similarity_matrix(q, d)), computed
/// in row blocks so the full N x N matrix is never held in memory.
std::vector<double> reciprocal_ranks_blocked(const EmbeddingSet& queries,
                                             const EmbeddingSet& documents,
                                             std::size_t block_rows = 256);

double mean_reciprocal_rank(const std::vector<double>& reciprocal_ranks);

/// Applies the per-side transforms (when given), ranks every document for every
/// query and scores both sides' isotropy. Without transforms this is the
/// non-whitened baseline.
EvalReport evaluate(const PairedCorpus& corpus,
                    const WhiteningTransform* code_transform = nullptr,
                    const WhiteningTransform* comment_transform = nullptr,
                    Direction direction = Direction::kCommentToCode);

}  // namespace softzca
