#include "wrec/whitening.hpp"

#include <string>

#include "wrec/errors.hpp"

namespace wrec {

CovarianceMatrix covariance(const DenseMatrix& m, Normalization normalization) {
  if (m.rows() == 0 || m.cols() == 0) throw DimensionError("covariance of an empty matrix");
  DenseMatrix c = std::move(gram_rows(m)).dense();
  if (normalization == Normalization::mean) {
    const double n = static_cast<double>(m.cols());
    for (std::size_t i = 0; i < c.rows(); ++i) {
      for (double& v : c.row(i)) v /= n;
    }
  }
  return CovarianceMatrix{SymmetricMatrix::symmetrize(std::move(c)), normalization};
}

WhiteningTransform fit_zca(const DenseMatrix& m, double eps) {
  if (!(eps >= 0.0)) throw ConfigError("fit_zca: eps must be >= 0");
  // Raw second moment: no 1/N factor and no centering.
  CovarianceMatrix cov = covariance(m, Normalization::raw);
  WhiteningTransform t;
  t.eig = eigh(cov.values);
  t.eps = eps;
  t.source_dim = m.rows();
  try {
    t.p = inv_sqrt(t.eig, eps);
  } catch (const SingularityError&) {
    throw SingularityError("fit_zca: data matrix has rank " +
                           std::to_string(numerical_rank(t.eig)) + " < " +
                           std::to_string(m.rows()) + " rows; exact whitening needs eps > 0");
  }
  return t;
}

DenseMatrix whiten(const WhiteningTransform& t, const DenseMatrix& m) {
  if (m.rows() != t.source_dim) {
    throw DimensionError("whiten: transform expects " + std::to_string(t.source_dim) +
                         " rows, got " + std::to_string(m.rows()));
  }
  return matmul(t.p.dense(), m);
}

DenseMatrix center_rows(const DenseMatrix& m) {
  DenseMatrix out = m;
  if (m.cols() == 0) return out;
  for (std::size_t r = 0; r < out.rows(); ++r) {
    auto row = out.row(r);
    double mean = 0.0;
    for (double v : row) mean += v;
    mean /= static_cast<double>(row.size());
    for (double& v : row) v -= mean;
  }
  return out;
}

SimilarityMatrix zca_similarity(const InteractionMatrix& x, double eps,
                                std::size_t max_dense_dim) {
  if (!(eps > 0.0)) throw ConfigError("zca_similarity: eps must be > 0");
  const DenseMatrix dense = densify(x, max_dense_dim);
  const WhiteningTransform t = fit_zca(dense, eps);
  const DenseMatrix w = whiten(t, dense);
  SimilarityMatrix s;
  s.kind = SimilarityKind::zca;
  s.values = std::move(gram_cols(w)).dense();
  s.config.lambda = eps;
  return s;
}

}  // namespace wrec
