#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "test_util.hpp"
#include "wrec/autoencoder.hpp"
#include "wrec/errors.hpp"
#include "wrec/whitening.hpp"

namespace wrec {
namespace {

using testing::max_abs_diff;
using testing::naive_matmul;
using testing::naive_transpose;

TEST(Covariance, Normalizations) {
  EXPECT_EQ(covariance(DenseMatrix::identity(2), Normalization::mean).values.dense(),
            DenseMatrix({{0.5, 0}, {0, 0.5}}));
  DenseMatrix m({{1, 1}, {1, -1}});
  EXPECT_EQ(covariance(m, Normalization::raw).values.dense(), DenseMatrix({{2, 0}, {0, 2}}));
  EXPECT_EQ(covariance(m, Normalization::mean).values.dense(), DenseMatrix::identity(2));
  EXPECT_THROW(covariance(DenseMatrix(), Normalization::raw), DimensionError);
}

TEST(FitZca, ScalarCase) {
  auto t = fit_zca(DenseMatrix({{2, 0}, {0, 2}}), 0.0);
  EXPECT_LT(max_abs_diff(t.p.dense(), DenseMatrix({{0.5, 0}, {0, 0.5}})), 1e-15);
  EXPECT_EQ(t.source_dim, 2u);
}

TEST(FitZca, ExactWhiteningFullRank) {
  DenseMatrix m({{2, 1}, {0, 1}});
  auto t = fit_zca(m, 0.0);
  auto w = whiten(t, m);
  EXPECT_LT(max_abs_diff(naive_matmul(w, naive_transpose(w)), DenseMatrix::identity(2)), 1e-10);
}

TEST(FitZca, RankDeficiency) {
  DenseMatrix m({{1, 1}, {1, 1}});
  try {
    fit_zca(m, 0.0);
    FAIL() << "expected SingularityError";
  } catch (const SingularityError& e) {
    EXPECT_NE(std::string(e.what()).find("rank 1"), std::string::npos);
  }
  auto t = fit_zca(m, 1.0);
  EXPECT_TRUE(t.p.dense().all_finite());
}

TEST(FitZca, ReconstructsFromEigendecomposition) {
  std::mt19937_64 rng(31);
  auto m = testing::random_dense(5, 12, rng);
  auto t = fit_zca(m, 0.3);
  const auto& u = t.eig.eigenvectors;
  DenseMatrix scaled = u;
  for (std::size_t r = 0; r < 5; ++r) {
    for (std::size_t c = 0; c < 5; ++c) {
      scaled(r, c) /= std::sqrt(t.eig.eigenvalues[c] + 0.3);
    }
  }
  EXPECT_LT(max_abs_diff(naive_matmul(scaled, naive_transpose(u)), t.p.dense()), 1e-10);
}

TEST(FitZca, InvariantUnderColumnPermutation) {
  std::mt19937_64 rng(32);
  auto m = testing::random_dense(4, 10, rng);
  std::vector<std::size_t> perm(10);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  DenseMatrix permuted(4, 10);
  for (std::size_t r = 0; r < 4; ++r) {
    for (std::size_t c = 0; c < 10; ++c) permuted(r, c) = m(r, perm[c]);
  }
  EXPECT_LT(max_abs_diff(fit_zca(m, 0.0).p.dense(), fit_zca(permuted, 0.0).p.dense()), 1e-10);
}

TEST(Whiten, Basics) {
  auto t = fit_zca(DenseMatrix({{2, 0}, {0, 2}}), 0.0);
  EXPECT_LT(max_abs_diff(whiten(t, DenseMatrix({{2, 0}, {0, 2}})), DenseMatrix::identity(2)),
            1e-15);
  EXPECT_THROW(whiten(t, DenseMatrix(3, 2)), DimensionError);
}

TEST(Whiten, ExactWhiteningRandom) {
  std::mt19937_64 rng(33);
  for (int trial = 0; trial < 20; ++trial) {
    auto m = testing::random_dense(5, 9, rng);
    auto w = whiten(fit_zca(m, 0.0), m);
    auto cov = covariance(w, Normalization::raw);
    EXPECT_LT(max_abs_diff(cov.values.dense(), DenseMatrix::identity(5)), 1e-8);
  }
}

TEST(Whiten, ShiftedSpectrum) {
  std::mt19937_64 rng(34);
  const double eps = 0.7;
  auto m = testing::random_dense(4, 7, rng);
  auto w = whiten(fit_zca(m, eps), m);
  auto got = testing::jacobi_eigenvalues(naive_matmul(w, naive_transpose(w)));
  auto source = testing::jacobi_eigenvalues(naive_matmul(m, naive_transpose(m)));
  for (std::size_t k = 0; k < 4; ++k) EXPECT_NEAR(got[k], source[k] / (source[k] + eps), 1e-10);
}

TEST(ZcaSimilarity, IdentityData) {
  InteractionMatrix x({{0}, {1}}, 2);
  auto b = zca_similarity(x, 1.0);
  EXPECT_LT(max_abs_diff(b.values, DenseMatrix({{0.5, 0}, {0, 0.5}})), 1e-15);
  EXPECT_EQ(b.kind, SimilarityKind::zca);
}

TEST(ZcaSimilarity, EqualsRidgeForms) {
  std::mt19937_64 rng(35);
  for (int trial = 0; trial < 10; ++trial) {
    auto x = testing::random_binary(6, 4, 0.5, rng);
    auto zca = zca_similarity(x, 1.0);
    EXPECT_LT(relative_error(zca.values, ridge_primal(x, {1.0}).values), 1e-8);
    EXPECT_LT(relative_error(zca.values, ridge_dual(x, {1.0}).values), 1e-8);
  }
}

TEST(ZcaSimilarity, RequiresPositiveEps) {
  InteractionMatrix x({{0}, {1}}, 2);
  EXPECT_THROW(zca_similarity(x, 0.0), ConfigError);
  EXPECT_THROW(zca_similarity(x, 1.0, 1), CapacityError);
}

TEST(CenterRows, RowMeansVanish) {
  auto c = center_rows(DenseMatrix({{1, 2, 3}, {4, 4, 4}}));
  EXPECT_EQ(c, DenseMatrix({{-1, 0, 1}, {0, 0, 0}}));
}

}  // namespace
}  // namespace wrec
