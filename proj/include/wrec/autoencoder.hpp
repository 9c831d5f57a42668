#pragma once

#include <cstddef>
#include <vector>

#include "wrec/interaction_matrix.hpp"
#include "wrec/linalg.hpp"
#include "wrec/similarity.hpp"

namespace wrec {

struct RidgeConfig {
  double lambda = 200.0;
  RidgeForm form = RidgeForm::automatic;
  std::size_t max_dense_dim = kDefaultMaxDenseDim;
};

/// Closed-form EASE result.
struct EaseSolution {
  SimilarityMatrix b;          // diag exactly zero
  std::vector<double> alpha;   // Lagrange multipliers, 1 / diag(P_hat) - lambda
  SymmetricMatrix p_hat;       // (G + lambda I)^{-1}
};

/// (X^T X + lambda I)^{-1} X^T X.
SimilarityMatrix ridge_primal(const InteractionMatrix& x, const RidgeConfig& cfg);

/// X^T (X X^T + lambda I)^{-1} X. The |U| x |U| system is capped by cfg.max_dense_dim.
SimilarityMatrix ridge_dual(const InteractionMatrix& x, const RidgeConfig& cfg);

/// Dispatches on cfg.form; `automatic` picks primal when |I| <= |U|.
SimilarityMatrix ridge(const InteractionMatrix& x, const RidgeConfig& cfg);

/// EASE on the item Gram matrix of X.
EaseSolution ease(const InteractionMatrix& x, double lambda,
                  std::size_t max_dense_dim = kDefaultMaxDenseDim);

/// EASE closed form for an arbitrary Gram matrix G (X^T X, or E^T E for embeddings).
EaseSolution ease_from_gram(SymmetricMatrix gram, double lambda,
                            SimilarityKind kind = SimilarityKind::ease);

/// Splits an EASE solution into the ridge (whitening) term and the diagonal
/// constraint term: B = whitening_term - diagonal_term.
struct EaseDecomposition {
  SimilarityMatrix whitening_term;  // (G + lambda I)^{-1} G
  DenseMatrix diagonal_term;        // (G + lambda I)^{-1} diagMat(alpha)
};

EaseDecomposition ease_decompose(const EaseSolution& sol, const InteractionMatrix& x,
                                 double lambda);

/// ||X - XB||_F^2 + lambda ||B||_F^2.
double ridge_objective(const InteractionMatrix& x, const DenseMatrix& b, double lambda);

}  // namespace wrec
