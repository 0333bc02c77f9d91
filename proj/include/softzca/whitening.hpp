#pragma once

#include <cstddef>
#include <optional>
#include <string_view>

#include "softzca/embedding_set.hpp"

namespace softzca {

/// Mean and population covariance (1/N normalization) of an embedding set.
struct FitStatistics {
  Vector mean;
  Matrix covariance;
  std::size_t sample_count = 0;
};

/// Symmetric eigendecomposition of a covariance matrix.
///
/// Eigenvalues are sorted in non-increasing order and floored at
/// kEigenvalueFloor * lambda_max; `clamped_count` says how many were raised to
/// that floor. Every eigenvector has its largest-magnitude entry positive.
struct EigenDecomposition {
  Matrix eigenvectors;  // columns
  Vector eigenvalues;
  std::size_t clamped_count = 0;
};

inline constexpr double kEigenvalueFloor = 1e-10;

/// `none` tags affine maps that are not whitening transforms (identity,
/// centering only). They are never produced by build_transform.
enum class Method { kZca, kSoftZca, kPca, kCholesky, kNone };

std::string_view to_string(Method method) noexcept;

/// Accepts the CLI spellings ("zca", "soft-zca", "pca", "cholesky", "none")
/// and the underscore variant "soft_zca". Throws Error(kConfig) otherwise.
Method parse_method(std::string_view name);

/// The fitted affine map x -> W (x - mean).
struct WhiteningTransform {
  Method method = Method::kNone;
  double epsilon = 0.0;
  Vector mean;
  Matrix matrix;
  /// Eigenvalues raised to the floor during the fit. Non-zero means the
  /// covariance was numerically rank-deficient.
  std::size_t clamped_eigenvalues = 0;

  std::size_t dim() const noexcept { return static_cast<std::size_t>(matrix.rows()); }
};

FitStatistics fit_statistics(const EmbeddingSet& x);

EigenDecomposition eigendecompose(const FitStatistics& stats);

/// Builds W for `method`:
///   zca / soft_zca : U (L + eps I)^(-1/2) U^T   (zca forces eps = 0)
///   pca            : (L + eps I)^(-1/2) U^T
///   cholesky       : L^(-1) with Sigma + eps I = L L^T
WhiteningTransform build_transform(const FitStatistics& stats, Method method, double epsilon);

/// Reuses a decomposition of `stats` already at hand (e.g. across an epsilon sweep).
WhiteningTransform build_transform(const FitStatistics& stats, const EigenDecomposition& eig,
                                   Method method, double epsilon);

/// Row i of the result is W (x_i - mean).
EmbeddingSet apply_transform(const WhiteningTransform& transform, const EmbeddingSet& x);

WhiteningTransform identity_transform(std::size_t dim);

/// Subtracts the fitted mean and leaves the geometry untouched.
WhiteningTransform centering_transform(const FitStatistics& stats);

/// The covariance the transform actually whitens: U diag(L) U^T with the
/// floored eigenvalues. Equal to stats.covariance for full-rank input.
Matrix effective_covariance(const EigenDecomposition& eig);

}  // namespace softzca
