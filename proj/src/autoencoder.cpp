#include "wrec/autoencoder.hpp"

#include <cmath>
#include <string>

#include "wrec/errors.hpp"

namespace wrec {
namespace {

void check_lambda(double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw ConfigError("lambda must be a positive finite number, got " + std::to_string(lambda));
  }
}

SimilarityMatrix make_ridge(DenseMatrix b, double lambda, RidgeForm form) {
  SimilarityMatrix s;
  s.kind = SimilarityKind::ridge;
  s.values = std::move(SymmetricMatrix::symmetrize(std::move(b))).dense();
  s.config.lambda = lambda;
  s.config.form = form;
  return s;
}

}  // namespace

SimilarityMatrix ridge_primal(const InteractionMatrix& x, const RidgeConfig& cfg) {
  check_lambda(cfg.lambda);
  SymmetricMatrix g = gram(x, GramSide::items, cfg.max_dense_dim);
  SymmetricMatrix shifted = g;
  shifted.add_to_diagonal(cfg.lambda);
  return make_ridge(spd_solve(shifted, g.dense()), cfg.lambda, RidgeForm::primal);
}

SimilarityMatrix ridge_dual(const InteractionMatrix& x, const RidgeConfig& cfg) {
  check_lambda(cfg.lambda);
  SymmetricMatrix k = gram(x, GramSide::users, cfg.max_dense_dim);
  k.add_to_diagonal(cfg.lambda);
  // Z = (X X^T + lambda I)^{-1} X, then B = X^T Z as a sparse row combination.
  const DenseMatrix z = spd_solve(k, densify(x, cfg.max_dense_dim));
  DenseMatrix b(x.n_items(), x.n_items());
  for (std::size_t u = 0; u < x.n_users(); ++u) {
    auto zu = z.row(u);
    for (ItemIndex i : x.row(u)) {
      auto bi = b.row(i);
      for (std::size_t j = 0; j < bi.size(); ++j) bi[j] += zu[j];
    }
  }
  return make_ridge(std::move(b), cfg.lambda, RidgeForm::dual);
}

SimilarityMatrix ridge(const InteractionMatrix& x, const RidgeConfig& cfg) {
  switch (cfg.form) {
    case RidgeForm::primal:
      return ridge_primal(x, cfg);
    case RidgeForm::dual:
      return ridge_dual(x, cfg);
    case RidgeForm::automatic:
      break;
  }
  return x.n_items() <= x.n_users() ? ridge_primal(x, cfg) : ridge_dual(x, cfg);
}

EaseSolution ease_from_gram(SymmetricMatrix gram, double lambda, SimilarityKind kind) {
  check_lambda(lambda);
  gram.add_to_diagonal(lambda);
  SymmetricMatrix p = spd_inverse(gram);
  const std::size_t n = p.dim();

  std::vector<double> inv_diag(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double d = p(j, j);
    if (!(d != 0.0) || !std::isfinite(d)) {
      throw NumericalError("ease: diag(P_hat) entry " + std::to_string(j) + " is " +
                           std::to_string(d));
    }
    inv_diag[j] = 1.0 / d;
  }

  // B = I - P diagMat(1 / diag(P)).
  DenseMatrix b(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      b(i, j) = (i == j ? 1.0 : 0.0) - p(i, j) * inv_diag[j];
    }
    b(i, i) = 0.0;
  }

  EaseSolution sol;
  sol.b.kind = kind;
  sol.b.values = std::move(b);
  sol.b.config.lambda = lambda;
  sol.alpha.resize(n);
  for (std::size_t j = 0; j < n; ++j) sol.alpha[j] = inv_diag[j] - lambda;
  sol.p_hat = std::move(p);
  return sol;
}

EaseSolution ease(const InteractionMatrix& x, double lambda, std::size_t max_dense_dim) {
  check_lambda(lambda);
  return ease_from_gram(gram(x, GramSide::items, max_dense_dim), lambda, SimilarityKind::ease);
}

EaseDecomposition ease_decompose(const EaseSolution& sol, const InteractionMatrix& x,
                                 double lambda) {
  const std::size_t n = x.n_items();
  if (sol.b.dim() != n || sol.p_hat.dim() != n || sol.alpha.size() != n) {
    throw DimensionError("ease_decompose: solution has dimension " +
                         std::to_string(sol.b.dim()) + " but X has " + std::to_string(n) +
                         " items");
  }
  EaseDecomposition out;
  out.whitening_term = ridge_primal(x, RidgeConfig{lambda, RidgeForm::primal});
  out.whitening_term.kind = SimilarityKind::zca;
  out.diagonal_term = DenseMatrix(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) out.diagonal_term(i, j) = sol.p_hat(i, j) * sol.alpha[j];
  }
  return out;
}

double ridge_objective(const InteractionMatrix& x, const DenseMatrix& b, double lambda) {
  if (b.rows() != x.n_items() || b.cols() != x.n_items()) {
    throw DimensionError("ridge_objective: B must be |I| x |I|");
  }
  double loss = 0.0;
  std::vector<double> recon(x.n_items());
  for (std::size_t u = 0; u < x.n_users(); ++u) {
    std::fill(recon.begin(), recon.end(), 0.0);
    for (ItemIndex i : x.row(u)) {
      auto bi = b.row(i);
      for (std::size_t j = 0; j < recon.size(); ++j) recon[j] += bi[j];
    }
    for (ItemIndex i : x.row(u)) recon[i] -= 1.0;
    for (double r : recon) loss += r * r;
  }
  const double norm = frobenius_norm(b);
  return loss + lambda * norm * norm;
}

}  // namespace wrec
