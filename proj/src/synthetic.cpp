#include "softzca/synthetic.hpp"

#include <cmath>
#include <random>
#include <string>

#include "softzca/error.hpp"

namespace softzca {
namespace {

RowMatrix gaussian_matrix(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols) {
  std::normal_distribution<double> normal(0.0, 1.0);
  RowMatrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) {
      m(i, j) = normal(rng);
    }
  }
  return m;
}

Vector random_direction(std::mt19937_64& rng, Eigen::Index dim) {
  Vector v = gaussian_matrix(rng, dim, 1).col(0);
  return v / v.norm();
}

}  // namespace

Matrix random_orthogonal(std::uint64_t seed, std::size_t dim) {
  std::mt19937_64 rng(seed);
  const auto d = static_cast<Eigen::Index>(dim);
  const Matrix g = gaussian_matrix(rng, d, d);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  const Matrix& r = qr.matrixQR();
  for (Eigen::Index j = 0; j < d; ++j) {
    if (r(j, j) < 0.0) q.col(j) *= -1.0;
  }
  return q;
}

Vector geometric_spectrum(double first, double last, std::size_t count) {
  if (count < 2 || !(first > 0.0) || !(last > 0.0)) {
    throw Error(ErrorKind::kInvalidSpectrum, "geometric spectrum needs count >= 2 and positive ends");
  }
  Vector s(static_cast<Eigen::Index>(count));
  const double ratio = std::log(last / first) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) {
    s(static_cast<Eigen::Index>(i)) = first * std::exp(ratio * static_cast<double>(i));
  }
  s(static_cast<Eigen::Index>(count - 1)) = last;
  return s;
}

EmbeddingSet generate_anisotropic_gaussian(std::uint64_t seed, std::size_t n,
                                           std::span<const double> spectrum, bool rotate) {
  if (n < 2) {
    throw Error(ErrorKind::kInvalidInput, "need n >= 2 samples");
  }
  if (spectrum.size() < 2) {
    throw Error(ErrorKind::kInvalidSpectrum, "spectrum must have at least 2 entries");
  }
  for (std::size_t i = 0; i < spectrum.size(); ++i) {
    if (!std::isfinite(spectrum[i]) || spectrum[i] <= 0.0) {
      throw Error(ErrorKind::kInvalidSpectrum,
                  "spectrum entry " + std::to_string(i) + " is not positive");
    }
  }

  const auto d = static_cast<Eigen::Index>(spectrum.size());
  std::mt19937_64 rng(seed);
  RowMatrix z = gaussian_matrix(rng, static_cast<Eigen::Index>(n), d);
  const Vector scale =
      Eigen::Map<const Vector>(spectrum.data(), d).array().sqrt().matrix();
  z = z * scale.asDiagonal();
  if (rotate) {
    z = z * random_orthogonal(seed + 1, spectrum.size()).transpose();
  }
  return EmbeddingSet(std::move(z));
}

SyntheticCorpus generate_paired_corpus(const SyntheticCorpusOptions& options) {
  if (options.pairs < 2 || options.signal_dim < 1 || options.nuisance_dim < 2) {
    throw Error(ErrorKind::kInvalidInput, "synthetic corpus needs >= 2 pairs, >= 1 signal dim "
                                          "and >= 2 nuisance dims");
  }
  const auto n = static_cast<Eigen::Index>(options.pairs);
  const auto k = static_cast<Eigen::Index>(options.signal_dim);
  const auto m = static_cast<Eigen::Index>(options.nuisance_dim);
  const auto d = k + m;

  std::mt19937_64 rng(options.seed);
  const Matrix mixing = random_orthogonal(options.seed + 1, static_cast<std::size_t>(d));
  const RowMatrix signal = gaussian_matrix(rng, n, k);

  auto make_side = [&](double top, double bottom, double offset_norm) {
    RowMatrix latent(n, d);
    latent.leftCols(k) = signal + options.signal_noise * gaussian_matrix(rng, n, k);
    const Vector scale =
        geometric_spectrum(top, bottom, options.nuisance_dim).array().sqrt().matrix();
    latent.rightCols(m) = gaussian_matrix(rng, n, m) * scale.asDiagonal();
    const Vector offset = offset_norm * random_direction(rng, d);
    RowMatrix out = latent * mixing.transpose();
    out.rowwise() += offset.transpose();
    return out;
  };

  RowMatrix comments = make_side(100.0, 1.0, 20.0);
  RowMatrix code = make_side(400.0, 0.5, 30.0);
  return SyntheticCorpus{EmbeddingSet(std::move(comments)), EmbeddingSet(std::move(code))};
}

}  // namespace softzca
