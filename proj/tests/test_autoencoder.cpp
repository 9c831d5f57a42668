#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "test_util.hpp"
#include "wrec/autoencoder.hpp"
#include "wrec/errors.hpp"

namespace wrec {
namespace {

using testing::max_abs_diff;
using testing::naive_dense;
using testing::naive_inverse;
using testing::naive_matmul;
using testing::naive_relative;
using testing::naive_transpose;

const InteractionMatrix kIdentity2({{0}, {1}}, 2);
const InteractionMatrix kAllOnes2({{0, 1}, {0, 1}}, 2);

DenseMatrix naive_item_gram(const InteractionMatrix& x) {
  auto d = naive_dense(x);
  return naive_matmul(naive_transpose(d), d);
}

TEST(RidgePrimal, IdentityData) {
  auto b = ridge_primal(kIdentity2, {1.0, RidgeForm::primal});
  EXPECT_LT(max_abs_diff(b.values, DenseMatrix({{0.5, 0}, {0, 0.5}})), 1e-15);
  EXPECT_EQ(b.kind, SimilarityKind::ridge);
  EXPECT_EQ(b.config.form, RidgeForm::primal);
}

TEST(RidgePrimal, AllOnesHandComputation) {
  auto b = ridge_primal(kAllOnes2, {2.0, RidgeForm::primal});
  const double third = 1.0 / 3.0;
  EXPECT_LT(max_abs_diff(b.values, DenseMatrix({{third, third}, {third, third}})), 1e-15);
}

TEST(RidgePrimal, SpectrumIsShrunkGramSpectrum) {
  std::mt19937_64 rng(21);
  for (double lambda : {0.1, 1.0, 10.0}) {
    auto x = testing::random_binary(7, 4, 0.5, rng);
    auto b = ridge_primal(x, {lambda});
    auto gram_eig = eigh(gram(x, GramSide::items)).eigenvalues;
    auto b_eig = eigh(SymmetricMatrix::symmetrize(b.values)).eigenvalues;
    for (std::size_t k = 0; k < gram_eig.size(); ++k) {
      const double s = std::max(gram_eig[k], 0.0);
      EXPECT_NEAR(b_eig[k], s / (s + lambda), 1e-10);
      EXPECT_GE(b_eig[k], -1e-12);
      EXPECT_LT(b_eig[k], 1.0);
    }
  }
}

TEST(RidgePrimal, MatchesGaussJordanOracle) {
  std::mt19937_64 rng(22);
  auto x = testing::random_binary(9, 6, 0.4, rng);
  auto g = naive_item_gram(x);
  auto expected = naive_matmul(naive_inverse(testing::plus_identity(g, 3.0)), g);
  EXPECT_LT(naive_relative(ridge_primal(x, {3.0}).values, expected), 1e-12);
}

TEST(RidgeDual, IdentityData) {
  auto b = ridge_dual(kIdentity2, {1.0, RidgeForm::dual});
  EXPECT_LT(max_abs_diff(b.values, DenseMatrix({{0.5, 0}, {0, 0.5}})), 1e-15);
  EXPECT_EQ(b.config.form, RidgeForm::dual);
}

TEST(RidgeDual, EqualsPrimalBothAspectRatios) {
  std::mt19937_64 rng(23);
  for (auto [users, items] : {std::pair{5, 3}, std::pair{3, 5}}) {
    auto x = testing::random_binary(users, items, 0.5, rng);
    auto p = ridge_primal(x, {1.0});
    auto d = ridge_dual(x, {1.0});
    EXPECT_LT(relative_error(d.values, p.values), 1e-8);
    EXPECT_EQ(p.config.lambda, d.config.lambda);
    EXPECT_EQ(p.config.embedding_dim, d.config.embedding_dim);
    EXPECT_EQ(p.kind, d.kind);
  }
}

TEST(RidgeDual, PrimalDualPropertyOverLambdaGrid) {
  std::mt19937_64 rng(24);
  std::uniform_int_distribution<int> dim(2, 25);
  for (int trial = 0; trial < 40; ++trial) {
    auto x = testing::random_binary(dim(rng), dim(rng), 0.3, rng);
    for (double lambda : {0.1, 1.0, 10.0, 200.0}) {
      auto p = ridge_primal(x, {lambda});
      auto d = ridge_dual(x, {lambda});
      EXPECT_LE(frobenius_distance(p.values, d.values), 1e-8 * frobenius_norm(p.values));
    }
  }
}

TEST(RidgeDual, CapacityErrorOnUserSide) {
  std::mt19937_64 rng(1);
  auto x = testing::random_binary(10, 3, 0.5, rng);
  EXPECT_THROW(ridge_dual(x, {1.0, RidgeForm::dual, 5}), CapacityError);
  EXPECT_NO_THROW(ridge_primal(x, {1.0, RidgeForm::primal, 5}));
}

TEST(Ridge, AutoPicksSmallerSystem) {
  std::mt19937_64 rng(25);
  auto tall = testing::random_binary(8, 3, 0.5, rng);
  auto wide = testing::random_binary(3, 8, 0.5, rng);
  EXPECT_EQ(ridge(tall, {1.0}).config.form, RidgeForm::primal);
  EXPECT_EQ(ridge(wide, {1.0}).config.form, RidgeForm::dual);
}

TEST(Ridge, RejectsNonPositiveLambda) {
  EXPECT_THROW(ridge_primal(kIdentity2, {0.0}), ConfigError);
  EXPECT_THROW(ridge_dual(kIdentity2, {-1.0}), ConfigError);
  EXPECT_THROW(ease(kIdentity2, 0.0), ConfigError);
}

TEST(Ridge, SymmetricAndLimits) {
  std::mt19937_64 rng(26);
  // Full column rank: the identity block guarantees it.
  std::vector<std::vector<ItemIndex>> rows{{0}, {1}, {2}, {3}, {0, 1}, {1, 2, 3}};
  InteractionMatrix x(rows, 4);
  auto g = naive_item_gram(x);

  auto b = ridge_primal(x, {1.0});
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_NE(b.values(i, i), 0.0);  // diagonal is not zeroed
    for (std::size_t j = 0; j < 4; ++j) EXPECT_EQ(b.values(i, j), b.values(j, i));
  }

  for (double lambda : {1e2, 1e4, 1e6}) {
    const double norm = frobenius_norm(ridge_primal(x, {lambda}).values);
    EXPECT_LE(norm, testing::naive_frobenius(g) / lambda);
  }
  EXPECT_LT(frobenius_norm(ridge_primal(x, {1e6}).values), 1e-3);

  auto near_zero = eigh(SymmetricMatrix::symmetrize(ridge_primal(x, {1e-8}).values));
  for (double ev : near_zero.eigenvalues) EXPECT_NEAR(ev, 1.0, 1e-6);
}

TEST(Ridge, ObjectiveBeatsTrivialSolutions) {
  std::mt19937_64 rng(27);
  for (int trial = 0; trial < 10; ++trial) {
    auto x = testing::random_binary(12, 6, 0.4, rng);
    for (double lambda : {0.1, 1.0, 50.0}) {
      auto b = ridge_primal(x, {lambda});
      const double at_opt = ridge_objective(x, b.values, lambda);
      EXPECT_LT(at_opt, ridge_objective(x, DenseMatrix::identity(6), lambda));
      EXPECT_LT(at_opt, ridge_objective(x, DenseMatrix(6, 6), lambda));
    }
  }
}

TEST(Ease, IdentityDataGivesZero) {
  for (double lambda : {0.5, 1.0, 200.0}) {
    auto sol = ease(kIdentity2, lambda);
    EXPECT_LT(max_abs_diff(sol.b.values, DenseMatrix(2, 2)), 1e-15);
  }
}

TEST(Ease, AllOnesHandComputation) {
  auto sol = ease(kAllOnes2, 2.0);
  EXPECT_LT(max_abs_diff(sol.b.values, DenseMatrix({{0, 0.5}, {0.5, 0}})), 1e-12);
  EXPECT_NEAR(sol.alpha[0], 1.0, 1e-12);
  EXPECT_NEAR(sol.alpha[1], 1.0, 1e-12);
  EXPECT_EQ(sol.b.kind, SimilarityKind::ease);
}

TEST(Ease, MatchesLagrangianForm) {
  std::mt19937_64 rng(28);
  for (int trial = 0; trial < 10; ++trial) {
    auto x = testing::random_binary(8, 5, 0.4, rng);
    const double lambda = 1.5;
    auto sol = ease(x, lambda);
    auto g = naive_item_gram(x);
    DenseMatrix g_minus = g;
    for (std::size_t i = 0; i < 5; ++i) g_minus(i, i) -= sol.alpha[i];
    auto lagrangian = naive_matmul(naive_inverse(testing::plus_identity(g, lambda)), g_minus);
    EXPECT_LT(max_abs_diff(sol.b.values, lagrangian), 1e-10);

    for (std::size_t i = 0; i < 5; ++i) {
      EXPECT_EQ(sol.b.values(i, i), 0.0);
      EXPECT_DOUBLE_EQ(sol.alpha[i], 1.0 / sol.p_hat(i, i) - lambda);
    }
  }
}

TEST(EaseDecompose, IdentityData) {
  auto sol = ease(kIdentity2, 1.0);
  auto parts = ease_decompose(sol, kIdentity2, 1.0);
  EXPECT_LT(max_abs_diff(parts.whitening_term.values, DenseMatrix({{0.5, 0}, {0, 0.5}})), 1e-15);
  EXPECT_LT(max_abs_diff(parts.diagonal_term, DenseMatrix({{0.5, 0}, {0, 0.5}})), 1e-15);
}

TEST(EaseDecompose, AllOnesHandComputation) {
  auto sol = ease(kAllOnes2, 2.0);
  auto parts = ease_decompose(sol, kAllOnes2, 2.0);
  const double third = 1.0 / 3.0, sixth = 1.0 / 6.0;
  EXPECT_LT(max_abs_diff(parts.whitening_term.values, DenseMatrix({{third, third}, {third, third}})),
            1e-15);
  EXPECT_LT(max_abs_diff(parts.diagonal_term, DenseMatrix({{third, -sixth}, {-sixth, third}})),
            1e-15);
  EXPECT_EQ(parts.whitening_term.kind, SimilarityKind::zca);
}

TEST(EaseDecompose, ReconstructionResidual) {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 10; ++trial) {
    auto x = testing::random_binary(8, 5, 0.4, rng);
    auto sol = ease(x, 2.5);
    auto parts = ease_decompose(sol, x, 2.5);
    DenseMatrix recon = parts.whitening_term.values;
    for (std::size_t k = 0; k < recon.size(); ++k) {
      recon.data()[k] -= parts.diagonal_term.data()[k];
    }
    EXPECT_LT(frobenius_distance(sol.b.values, recon), 1e-10);
  }
}

TEST(EaseDecompose, DimensionMismatch) {
  auto sol = ease(kIdentity2, 1.0);
  InteractionMatrix other({{0, 1, 2}}, 3);
  EXPECT_THROW(ease_decompose(sol, other, 1.0), DimensionError);
}

}  // namespace
}  // namespace wrec
