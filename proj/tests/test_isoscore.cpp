#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "softzca/error.hpp"
#include "softzca/isoscore.hpp"
#include "softzca/synthetic.hpp"
#include "softzca/whitening.hpp"
#include "test_helpers.hpp"

namespace softzca {
namespace {

EmbeddingSet signed_basis_cloud(int d, double c) {
  RowMatrix m = RowMatrix::Zero(2 * d, d);
  for (int i = 0; i < d; ++i) {
    m(2 * i, i) = c;
    m(2 * i + 1, i) = -c;
  }
  return EmbeddingSet(std::move(m));
}

TEST(IsoScore, UniformSignedBasisIsPerfectlyIsotropic) {
  for (int d : {2, 3, 7, 32}) {
    for (double c : {0.1, 1.0, 250.0}) {
      const auto v = isoscore(signed_basis_cloud(d, c));
      EXPECT_NEAR(v.score, 1.0, 1e-12) << "d=" << d << " c=" << c;
      EXPECT_EQ(v.dim, static_cast<std::size_t>(d));
      EXPECT_EQ(v.sample_count, static_cast<std::size_t>(2 * d));
    }
  }
}

TEST(IsoScore, CollinearCloudScoresZero) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> normal;
  for (int d : {2, 5, 16}) {
    Vector dir(d);
    for (int j = 0; j < d; ++j) dir(j) = normal(rng);
    RowMatrix m(40, d);
    for (int i = 0; i < 40; ++i) m.row(i) = (normal(rng) * dir).transpose();
    EXPECT_NEAR(isoscore(EmbeddingSet(m)).score, 0.0, 1e-12) << "d=" << d;
  }
}

TEST(IsoScore, FourToOneVarianceProfile) {
  // {(+-2, 0), (0, +-1)}: principal variances (2, 0.5), ratio 4:1.
  const auto x = testing::rows({{2, 0}, {-2, 0}, {0, 1}, {0, -1}});
  EXPECT_NEAR(isoscore(x).score, 0.4706, 1e-3);
  Vector v(2);
  v << 4.0, 1.0;
  EXPECT_NEAR(isoscore_from_variances(v), 0.4706, 1e-3);
  EXPECT_NEAR(isoscore_from_variances(v), 8.0 / 17.0, 1e-12);
}

TEST(IsoScore, RotationInvariant) {
  const std::vector<double> spectrum{25, 9, 4, 1, 1, 0.25};
  const auto x = generate_anisotropic_gaussian(21, 300, spectrum, false);
  const double base = isoscore(x).score;
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const Matrix q = random_orthogonal(seed, spectrum.size());
    const double rotated = isoscore(EmbeddingSet(x.data() * q)).score;
    EXPECT_NEAR(rotated, base, 1e-8);
  }
}

TEST(IsoScore, PositiveScaleInvariant) {
  const std::vector<double> spectrum{25, 9, 4, 1};
  const auto x = generate_anisotropic_gaussian(22, 300, spectrum, true);
  const double base = isoscore(x).score;
  for (double c : {1e-3, 0.5, 7.0, 1e4}) {
    EXPECT_NEAR(isoscore(EmbeddingSet(c * x.data())).score, base, 1e-10);
  }
}

TEST(IsoScore, ZcaWhitenedFullRankSetIsNearlyPerfect) {
  const std::vector<double> spectrum{100, 30, 10, 3, 1, 0.3, 0.1, 0.03};
  const auto x = generate_anisotropic_gaussian(23, 1000, spectrum, true);
  const auto t = build_transform(fit_statistics(x), Method::kZca, 0.0);
  EXPECT_GE(isoscore(apply_transform(t, x)).score, 0.999);
}

TEST(IsoScore, NonIncreasingInEpsilon) {
  std::vector<double> spectrum(16, 1.0);
  spectrum[0] = 100.0;
  spectrum[1] = 10.0;
  const auto x = generate_anisotropic_gaussian(24, 2000, spectrum, true);
  const auto stats = fit_statistics(x);
  double previous = 1.0 + 1e-3;
  for (double eps : {0.0, 1e-4, 1e-3, 1e-2, 1e-1, 1.0}) {
    const double s = isoscore(apply_transform(build_transform(stats, Method::kSoftZca, eps), x)).score;
    EXPECT_LE(s, previous + 1e-3) << "eps=" << eps;
    previous = s;
  }
}

TEST(IsoScore, MatchesStepByStepOracle) {
  std::mt19937_64 rng(77);
  std::normal_distribution<double> normal;
  std::uniform_int_distribution<int> dim(2, 3);
  std::uniform_int_distribution<int> count(3, 20);
  for (int trial = 0; trial < 50; ++trial) {
    const int d = dim(rng);
    const int n = count(rng);
    RowMatrix m(n, d);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < d; ++j) m(i, j) = normal(rng) * (j + 1);
    const double got = isoscore(EmbeddingSet(m)).score;
    EXPECT_NEAR(got, oracle::isoscore(m), 1e-10) << "trial " << trial;
  }
}

TEST(IsoScore, ErrorPaths) {
  try {
    isoscore(testing::rows({{0.1, 0.7}, {0.1, 0.7}, {0.1, 0.7}}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kDegenerateCloud);
  }
  try {
    isoscore(testing::rows({{1, 2}}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kDegenerateSample);
  }
  try {
    isoscore_from_variances(Vector::Ones(1));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kShape);
  }
}

TEST(IsoScore, AlwaysWithinUnitInterval) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  for (int trial = 0; trial < 200; ++trial) {
    Vector v(2 + trial % 30);
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = trial % 4 == 0 && i > 0 ? 0.0 : u(rng);
    if (v.norm() == 0.0) continue;
    const double s = isoscore_from_variances(v);
    EXPECT_GE(s, 0.0);
    EXPECT_LE(s, 1.0);
  }
}

}  // namespace
}  // namespace softzca
