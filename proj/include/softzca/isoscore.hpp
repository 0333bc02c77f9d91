#pragma once

#include <cstddef>

#include "softzca/embedding_set.hpp"

namespace softzca {

struct IsoScoreValue {
  double score = 0.0;
  std::size_t dim = 0;
  std::size_t sample_count = 0;
};

/// IsoScore of a point cloud, in [0, 1] with 1 for perfect isotropy.
///
/// The cloud is centered and reoriented onto its principal axes. The variance
/// profile along those axes is scaled to norm sqrt(d) and compared against the
/// all-ones profile:
///
///   delta = |v - 1| / sqrt(2 (d - sqrt d))
///   k     = (d - delta^2 (d - sqrt d))^2 / d^2
///   score = (d k - 1) / (d - 1)
///
/// k is the fraction of dimensions the cloud uniformly occupies. The result is
/// clamped into [0, 1] to absorb rounding near the endpoints.
IsoScoreValue isoscore(const EmbeddingSet& x);

/// The scoring part alone, given the principal-axis variances.
double isoscore_from_variances(const Vector& variances);

}  // namespace softzca
