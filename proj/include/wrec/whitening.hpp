#pragma once

#include <cstddef>

#include "wrec/interaction_matrix.hpp"
#include "wrec/linalg.hpp"
#include "wrec/similarity.hpp"

namespace wrec {

enum class Normalization { mean, raw };

struct CovarianceMatrix {
  SymmetricMatrix values;
  Normalization normalization = Normalization::raw;

  std::size_t dim() const { return values.dim(); }
};

/// ZCA transform P = U (S + eps I)^{-1/2} U^T built from the eigendecomposition
/// of M M^T (rows of M are features, columns are samples).
struct WhiteningTransform {
  SymmetricMatrix p;
  double eps = 0.0;
  std::size_t source_dim = 0;
  EigenDecomposition eig;
};

/// M M^T, divided by the number of columns for Normalization::mean.
CovarianceMatrix covariance(const DenseMatrix& m, Normalization normalization);

/// Throws SingularityError when eps == 0 and M M^T is rank deficient.
WhiteningTransform fit_zca(const DenseMatrix& m, double eps);

/// P M. Throws DimensionError when M.rows() != source_dim.
DenseMatrix whiten(const WhiteningTransform& t, const DenseMatrix& m);

/// Subtracts each row's mean across columns. Not applied anywhere by default.
DenseMatrix center_rows(const DenseMatrix& m);

/// W^T W with W = P_ZCA X, users as feature dimensions and items as samples.
SimilarityMatrix zca_similarity(const InteractionMatrix& x, double eps,
                                std::size_t max_dense_dim = kDefaultMaxDenseDim);

}  // namespace wrec
