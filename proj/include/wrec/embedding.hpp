#pragma once

#include <cstddef>
#include <vector>

#include "wrec/interaction_matrix.hpp"
#include "wrec/linalg.hpp"
#include "wrec/similarity.hpp"

namespace wrec {

/// D x |I| item embedding; column i embeds item i.
struct EmbeddingMatrix {
  DenseMatrix values;
  std::vector<double> singular_values;  // descending, length D
  std::size_t rank_deficient_dims = 0;  // trailing rows whose singular value is numerically zero

  std::size_t dim() const { return values.rows(); }
  std::size_t n_items() const { return values.cols(); }
};

/// E = S_D^{1/2} V_D^T from the top-D singular triplets of X, obtained from
/// the eigendecomposition of the smaller Gram matrix.
EmbeddingMatrix svd_embed(const InteractionMatrix& x, std::size_t dim,
                          std::size_t max_dense_dim = kDefaultMaxDenseDim);

/// E^T E.
SimilarityMatrix embed_dot(const EmbeddingMatrix& e);

/// E^T (E E^T + lambda I_D)^{-1} E. Only D x D and D x |I| intermediates are formed.
SimilarityMatrix embed_ridge(const EmbeddingMatrix& e, double lambda);

/// EASE on the Gram matrix E^T E. Forms the |I| x |I| inverse.
SimilarityMatrix embed_ease(const EmbeddingMatrix& e, double lambda,
                            std::size_t max_dense_dim = kDefaultMaxDenseDim);

/// Copy of E with each latent dimension centered across items.
EmbeddingMatrix center_embedding(const EmbeddingMatrix& e);

}  // namespace wrec
