#include "softzca/isoscore.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "softzca/error.hpp"
#include "softzca/whitening.hpp"

namespace softzca {

double isoscore_from_variances(const Vector& variances) {
  const auto n = variances.size();
  if (n < 2) {
    throw Error(ErrorKind::kShape, "IsoScore needs dimension >= 2");
  }
  const double norm = variances.norm();
  if (!(norm > 0.0)) {
    throw Error(ErrorKind::kDegenerateCloud, "IsoScore of a single point is undefined");
  }
  const double d = static_cast<double>(n);
  const double root_d = std::sqrt(d);

  const Vector normalized = (root_d / norm) * variances;
  const double defect = (normalized.array() - 1.0).matrix().norm() / std::sqrt(2.0 * (d - root_d));
  const double occupied = d - defect * defect * (d - root_d);
  const double fraction = occupied * occupied / (d * d);
  const double score = (d * fraction - 1.0) / (d - 1.0);
  return std::clamp(score, 0.0, 1.0);
}

IsoScoreValue isoscore(const EmbeddingSet& x) {
  if (x.rows() < 2) {
    throw Error(ErrorKind::kDegenerateSample, "IsoScore needs at least 2 points");
  }
  const FitStatistics stats = fit_statistics(x);

  // Variances along the principal axes are the covariance eigenvalues.
  Eigen::SelfAdjointEigenSolver<Matrix> solver(stats.covariance, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorKind::kDecompositionFailure, "symmetric eigensolver did not converge");
  }
  const Vector variances = solver.eigenvalues().cwiseMax(0.0);

  // Rounding in the mean leaves a residue on the order of eps * |x| even
  // when all points coincide.
  const double scale = x.data().cwiseAbs().maxCoeff();
  const double residue = 16.0 * std::numeric_limits<double>::epsilon() * scale;
  if (variances.sum() <= residue * residue) {
    throw Error(ErrorKind::kDegenerateCloud, "all points are identical; IsoScore is undefined");
  }

  return IsoScoreValue{isoscore_from_variances(variances), x.dim(), x.rows()};
}

}  // namespace softzca
