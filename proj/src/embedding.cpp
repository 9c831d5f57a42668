#include "wrec/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "wrec/autoencoder.hpp"
#include "wrec/errors.hpp"

namespace wrec {
namespace {

void check_lambda(double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw ConfigError("lambda must be a positive finite number, got " + std::to_string(lambda));
  }
}

SimilarityMatrix make(SimilarityKind kind, DenseMatrix values, double lambda, std::size_t dim) {
  SimilarityMatrix s;
  s.kind = kind;
  s.values = std::move(values);
  s.config.lambda = lambda;
  s.config.embedding_dim = dim;
  return s;
}

}  // namespace

EmbeddingMatrix svd_embed(const InteractionMatrix& x, std::size_t dim,
                          std::size_t max_dense_dim) {
  const std::size_t limit = std::min(x.n_users(), x.n_items());
  if (dim < 1 || dim > limit) {
    throw ConfigError("svd_embed: embedding dimension " + std::to_string(dim) +
                      " outside [1, " + std::to_string(limit) + "]");
  }
  const bool item_side = x.n_items() <= x.n_users();
  const EigenDecomposition eig =
      eigh(gram(x, item_side ? GramSide::items : GramSide::users, max_dense_dim));
  const double top = std::max(eig.eigenvalues.front(), 0.0);

  EmbeddingMatrix e;
  e.values = DenseMatrix(dim, x.n_items());
  e.singular_values.resize(dim);
  for (std::size_t k = 0; k < dim; ++k) {
    // Eigenvalues of the Gram matrix are squared singular values.
    const double squared = std::max(eig.eigenvalues[k], 0.0);
    const bool zero = !(squared > kRankTolerance * top);
    // Roundoff eigenvalues would survive as sigma^{1/2} ~ 1e-4 entries.
    const double sigma = zero ? 0.0 : std::sqrt(squared);
    e.singular_values[k] = sigma;
    if (zero) ++e.rank_deficient_dims;

    auto out = e.values.row(k);
    if (zero) {
      continue;
    } else if (item_side) {
      const double w = std::sqrt(sigma);
      for (std::size_t i = 0; i < out.size(); ++i) out[i] = w * eig.eigenvectors(i, k);
    } else {
      // v_k = X^T u_k / sigma_k, so sigma_k^{1/2} v_k = X^T u_k / sigma_k^{1/2}.
      const double w = 1.0 / std::sqrt(sigma);
      for (std::size_t u = 0; u < x.n_users(); ++u) {
        const double coeff = w * eig.eigenvectors(u, k);
        for (ItemIndex i : x.row(u)) out[i] += coeff;
      }
    }
  }
  return e;
}

SimilarityMatrix embed_dot(const EmbeddingMatrix& e) {
  return make(SimilarityKind::embed_dot, std::move(gram_cols(e.values)).dense(), 0.0, e.dim());
}

SimilarityMatrix embed_ridge(const EmbeddingMatrix& e, double lambda) {
  check_lambda(lambda);
  SymmetricMatrix k = gram_rows(e.values);  // D x D
  k.add_to_diagonal(lambda);
  const DenseMatrix z = spd_solve(k, e.values);  // D x |I|
  DenseMatrix b = matmul_tn(e.values, z);        // the only |I| x |I| buffer
  return make(SimilarityKind::embed_ridge,
              std::move(SymmetricMatrix::symmetrize(std::move(b))).dense(), lambda, e.dim());
}

SimilarityMatrix embed_ease(const EmbeddingMatrix& e, double lambda, std::size_t max_dense_dim) {
  check_lambda(lambda);
  if (e.n_items() > max_dense_dim) throw CapacityError(e.n_items(), max_dense_dim);
  EaseSolution sol = ease_from_gram(gram_cols(e.values), lambda, SimilarityKind::embed_ease);
  sol.b.config.embedding_dim = e.dim();
  return std::move(sol.b);
}

EmbeddingMatrix center_embedding(const EmbeddingMatrix& e) {
  EmbeddingMatrix out;
  out.values = e.values;
  for (std::size_t r = 0; r < out.values.rows(); ++r) {
    auto row = out.values.row(r);
    if (row.empty()) continue;
    double mean = 0.0;
    for (double v : row) mean += v;
    mean /= static_cast<double>(row.size());
    for (double& v : row) v -= mean;
  }
  // Squared row norms play the role of singular values for E = S^{1/2} V^T.
  out.singular_values.resize(out.values.rows());
  for (std::size_t r = 0; r < out.values.rows(); ++r) {
    double s = 0.0;
    for (double v : out.values.row(r)) s += v * v;
    out.singular_values[r] = s;
  }
  return out;
}

}  // namespace wrec
