#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

#include "softzca/embedding_set.hpp"

namespace softzca {

/// Haar-distributed orthogonal matrix (QR of a Gaussian matrix with the sign
/// of R's diagonal folded into Q).
Matrix random_orthogonal(std::uint64_t seed, std::size_t dim);

/// n samples from N(0, Q diag(spectrum) Q^T). Q is the identity unless
/// `rotate` is set, in which case it is random_orthogonal(seed + 1, d).
EmbeddingSet generate_anisotropic_gaussian(std::uint64_t seed, std::size_t n,
                                           std::span<const double> spectrum, bool rotate);

/// `count` values spaced geometrically from `first` to `last` inclusive.
Vector geometric_spectrum(double first, double last, std::size_t count);

struct SyntheticCorpusOptions {
  std::uint64_t seed = 7;
  std::size_t pairs = 500;
  std::size_t signal_dim = 8;
  std::size_t nuisance_dim = 56;
  /// Per-side noise added to the shared signal coordinates.
  double signal_noise = 0.3;
};

struct SyntheticCorpus {
  EmbeddingSet comments;
  EmbeddingSet code;
};

/// Row-aligned query/document pairs that share a low-dimensional Gaussian
/// signal. Each side adds its own high-variance anisotropic nuisance
/// directions and a large common offset, then both are mixed by one random
/// rotation. The two sides get different nuisance spectra and offsets.
SyntheticCorpus generate_paired_corpus(const SyntheticCorpusOptions& options);

}  // namespace softzca
