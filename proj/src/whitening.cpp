#include "softzca/whitening.hpp"

#include <cmath>
#include <string>

#include "softzca/error.hpp"

namespace softzca {
namespace {

void check_epsilon(double epsilon) {
  if (!std::isfinite(epsilon) || epsilon < 0.0) {
    throw Error(ErrorKind::kInvalidInput,
                "epsilon must be finite and non-negative, got " + std::to_string(epsilon));
  }
}

void check_statistics(const FitStatistics& stats) {
  const auto d = stats.covariance.rows();
  if (d < 2 || stats.covariance.cols() != d || stats.mean.size() != d) {
    throw Error(ErrorKind::kShape, "fit statistics have inconsistent dimensions");
  }
  if (!stats.covariance.allFinite() || !stats.mean.allFinite()) {
    throw Error(ErrorKind::kInvalidInput, "fit statistics contain non-finite values");
  }
  const double scale = stats.covariance.cwiseAbs().maxCoeff();
  const double asym = (stats.covariance - stats.covariance.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-12 * scale) {
    throw Error(ErrorKind::kInvalidInput, "covariance is not symmetric");
  }
}

bool is_zero(const Matrix& m) { return (m.array() == 0.0).all(); }

}  // namespace

std::string_view to_string(Method method) noexcept {
  switch (method) {
    case Method::kZca: return "zca";
    case Method::kSoftZca: return "soft-zca";
    case Method::kPca: return "pca";
    case Method::kCholesky: return "cholesky";
    case Method::kNone: return "none";
  }
  return "none";
}

Method parse_method(std::string_view name) {
  if (name == "zca") return Method::kZca;
  if (name == "soft-zca" || name == "soft_zca") return Method::kSoftZca;
  if (name == "pca") return Method::kPca;
  if (name == "cholesky") return Method::kCholesky;
  if (name == "none") return Method::kNone;
  throw Error(ErrorKind::kConfig, "unknown whitening method '" + std::string(name) + "'");
}

FitStatistics fit_statistics(const EmbeddingSet& x) {
  const auto& data = x.data();
  if (data.rows() < 2) {
    throw Error(ErrorKind::kDegenerateSample,
                "need at least 2 rows to fit statistics, got " + std::to_string(data.rows()));
  }
  if (!data.allFinite()) {
    throw Error(ErrorKind::kInvalidInput, "non-finite value in embedding set");
  }

  FitStatistics stats;
  stats.sample_count = x.rows();
  stats.mean = data.colwise().mean().transpose();

  const RowMatrix centered = data.rowwise() - stats.mean.transpose();
  const auto d = data.cols();
  stats.covariance = Matrix::Zero(d, d);
  stats.covariance.selfadjointView<Eigen::Lower>().rankUpdate(
      centered.transpose(), 1.0 / static_cast<double>(data.rows()));
  stats.covariance.triangularView<Eigen::StrictlyUpper>() =
      stats.covariance.transpose().triangularView<Eigen::StrictlyUpper>();
  return stats;
}

EigenDecomposition eigendecompose(const FitStatistics& stats) {
  check_statistics(stats);
  if (is_zero(stats.covariance)) {
    throw Error(ErrorKind::kRankZero, "covariance is zero; whitening is undefined");
  }

  Eigen::SelfAdjointEigenSolver<Matrix> solver(stats.covariance);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorKind::kDecompositionFailure, "symmetric eigensolver did not converge");
  }

  // The solver returns ascending order.
  const auto d = stats.covariance.rows();
  EigenDecomposition eig;
  eig.eigenvalues = solver.eigenvalues().reverse();
  eig.eigenvectors = solver.eigenvectors().rowwise().reverse();

  const double lambda_max = eig.eigenvalues(0);
  if (!(lambda_max > 0.0)) {
    throw Error(ErrorKind::kRankZero, "covariance has no positive eigenvalue");
  }
  if (eig.eigenvalues(d - 1) < -1e-8 * lambda_max) {
    throw Error(ErrorKind::kInvalidInput, "covariance is not positive semi-definite");
  }

  const double floor = kEigenvalueFloor * lambda_max;
  for (Eigen::Index i = 0; i < d; ++i) {
    if (eig.eigenvalues(i) < floor) {
      eig.eigenvalues(i) = floor;
      ++eig.clamped_count;
    }
  }

  for (Eigen::Index j = 0; j < d; ++j) {
    Eigen::Index pivot = 0;
    eig.eigenvectors.col(j).cwiseAbs().maxCoeff(&pivot);
    if (eig.eigenvectors(pivot, j) < 0.0) {
      eig.eigenvectors.col(j) *= -1.0;
    }
  }
  return eig;
}

WhiteningTransform build_transform(const FitStatistics& stats, Method method, double epsilon) {
  check_epsilon(epsilon);
  if (method == Method::kCholesky) {
    check_statistics(stats);
    if (is_zero(stats.covariance)) {
      throw Error(ErrorKind::kRankZero, "covariance is zero; whitening is undefined");
    }
    return build_transform(stats, EigenDecomposition{}, method, epsilon);
  }
  return build_transform(stats, eigendecompose(stats), method, epsilon);
}

WhiteningTransform build_transform(const FitStatistics& stats, const EigenDecomposition& eig,
                                   Method method, double epsilon) {
  check_epsilon(epsilon);
  check_statistics(stats);
  const auto d = stats.covariance.rows();

  WhiteningTransform t;
  t.method = method;
  t.epsilon = epsilon;
  t.mean = stats.mean;

  switch (method) {
    case Method::kZca:
      if (epsilon != 0.0) {
        throw Error(ErrorKind::kInvalidInput,
                    "zca has no regularizer; use soft-zca for epsilon > 0");
      }
      [[fallthrough]];
    case Method::kSoftZca:
    case Method::kPca: {
      if (eig.eigenvalues.size() != d || eig.eigenvectors.rows() != d) {
        throw Error(ErrorKind::kShape, "eigendecomposition does not match statistics");
      }
      const Vector scale = (eig.eigenvalues.array() + epsilon).rsqrt().matrix();
      const Matrix rotated = scale.asDiagonal() * eig.eigenvectors.transpose();
      if (method == Method::kPca) {
        t.matrix = rotated;
      } else {
        t.matrix = eig.eigenvectors * rotated;
        t.matrix = 0.5 * (t.matrix + t.matrix.transpose()).eval();
      }
      t.clamped_eigenvalues = eig.clamped_count;
      break;
    }
    case Method::kCholesky: {
      const Matrix shifted = stats.covariance + epsilon * Matrix::Identity(d, d);
      Eigen::LLT<Matrix> llt(shifted);
      if (llt.info() != Eigen::Success) {
        throw Error(ErrorKind::kDecompositionFailure,
                    "covariance + epsilon*I is not positive definite");
      }
      const Matrix lower = llt.matrixL();
      const double min_pivot = lower.diagonal().cwiseAbs2().minCoeff();
      if (min_pivot < kEigenvalueFloor * shifted.diagonal().maxCoeff()) {
        throw Error(ErrorKind::kDecompositionFailure,
                    "covariance + epsilon*I is numerically singular; increase epsilon");
      }
      t.matrix = lower.triangularView<Eigen::Lower>().solve(Matrix::Identity(d, d));
      break;
    }
    case Method::kNone:
      throw Error(ErrorKind::kInvalidInput, "method 'none' is not a whitening method");
  }
  return t;
}

EmbeddingSet apply_transform(const WhiteningTransform& transform, const EmbeddingSet& x) {
  const auto d = transform.matrix.cols();
  if (static_cast<Eigen::Index>(x.dim()) != d || transform.mean.size() != d) {
    throw Error(ErrorKind::kShape, "transform expects dimension " + std::to_string(d) +
                                       ", input has " + std::to_string(x.dim()));
  }
  RowMatrix out = (x.data().rowwise() - transform.mean.transpose()) * transform.matrix.transpose();
  return EmbeddingSet(std::move(out), x.ids());
}

WhiteningTransform identity_transform(std::size_t dim) {
  const auto d = static_cast<Eigen::Index>(dim);
  WhiteningTransform t;
  t.mean = Vector::Zero(d);
  t.matrix = Matrix::Identity(d, d);
  return t;
}

WhiteningTransform centering_transform(const FitStatistics& stats) {
  WhiteningTransform t = identity_transform(static_cast<std::size_t>(stats.mean.size()));
  t.mean = stats.mean;
  return t;
}

Matrix effective_covariance(const EigenDecomposition& eig) {
  return eig.eigenvectors * eig.eigenvalues.asDiagonal() * eig.eigenvectors.transpose();
}

}  // namespace softzca
