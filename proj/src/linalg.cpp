#include "wrec/linalg.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <string>

#include "wrec/errors.hpp"

namespace wrec {
namespace {

using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ConstMap = Eigen::Map<const RowMajor>;
using MutMap = Eigen::Map<RowMajor>;

ConstMap view(const DenseMatrix& m) {
  return ConstMap(m.data(), static_cast<Eigen::Index>(m.rows()),
                  static_cast<Eigen::Index>(m.cols()));
}

MutMap view(DenseMatrix& m) {
  return MutMap(m.data(), static_cast<Eigen::Index>(m.rows()),
                static_cast<Eigen::Index>(m.cols()));
}

void check_cap(std::size_t dim, std::size_t cap) {
  if (dim > cap) throw CapacityError(dim, cap);
}

void check_finite(const DenseMatrix& m, const char* what) {
  if (!m.all_finite()) throw NumericalError(std::string(what) + ": non-finite entry");
}

}  // namespace

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> values)
    : rows_(rows), cols_(cols), values_(std::move(values)) {
  if (values_.size() != rows * cols) {
    throw DimensionError("dense matrix expects " + std::to_string(rows * cols) +
                         " values, got " + std::to_string(values_.size()));
  }
}

DenseMatrix::DenseMatrix(std::initializer_list<std::initializer_list<double>> rows)
    : rows_(rows.size()), cols_(rows.size() ? rows.begin()->size() : 0) {
  values_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw DimensionError("ragged matrix literal");
    values_.insert(values_.end(), r.begin(), r.end());
  }
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

DenseMatrix DenseMatrix::transposed() const {
  DenseMatrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  }
  return t;
}

bool DenseMatrix::all_finite() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

SymmetricMatrix SymmetricMatrix::symmetrize(DenseMatrix m) {
  if (m.rows() != m.cols()) {
    throw DimensionError("symmetric matrix must be square, got " + std::to_string(m.rows()) +
                         "x" + std::to_string(m.cols()));
  }
  const std::size_t n = m.rows();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double avg = 0.5 * (m(i, j) + m(j, i));
      m(i, j) = avg;
      m(j, i) = avg;
    }
  }
  SymmetricMatrix s;
  s.full_ = std::move(m);
  return s;
}

SymmetricMatrix SymmetricMatrix::identity(std::size_t n) {
  return symmetrize(DenseMatrix::identity(n));
}

void SymmetricMatrix::add_to_diagonal(double v) {
  for (std::size_t i = 0; i < dim(); ++i) full_(i, i) += v;
}

std::vector<double> SymmetricMatrix::diagonal() const {
  std::vector<double> d(dim());
  for (std::size_t i = 0; i < dim(); ++i) d[i] = full_(i, i);
  return d;
}

DenseMatrix EigenDecomposition::reconstruct() const {
  const std::size_t n = eigenvectors.rows();
  const std::size_t k = eigenvalues.size();
  DenseMatrix scaled(n, k);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < k; ++c) scaled(r, c) = eigenvectors(r, c) * eigenvalues[c];
  }
  DenseMatrix out(n, n);
  view(out).noalias() = view(scaled) * view(eigenvectors).transpose();
  return out;
}

SymmetricMatrix gram(const InteractionMatrix& x, GramSide side, std::size_t max_dim) {
  if (x.empty()) throw EmptyDatasetError("gram of an empty interaction matrix");

  if (side == GramSide::items) {
    check_cap(x.n_items(), max_dim);
    DenseMatrix g(x.n_items(), x.n_items());
    for (std::size_t u = 0; u < x.n_users(); ++u) {
      auto r = x.row(u);
      for (std::size_t a = 0; a < r.size(); ++a) {
        double* out = &g(r[a], 0);
        for (std::size_t b = a; b < r.size(); ++b) out[r[b]] += 1.0;
      }
    }
    // Only the upper triangle was accumulated.
    for (std::size_t i = 0; i < g.rows(); ++i) {
      for (std::size_t j = i + 1; j < g.cols(); ++j) g(j, i) = g(i, j);
    }
    return SymmetricMatrix::symmetrize(std::move(g));
  }

  check_cap(x.n_users(), max_dim);
  std::vector<std::vector<std::size_t>> by_item(x.n_items());
  for (std::size_t u = 0; u < x.n_users(); ++u) {
    for (ItemIndex i : x.row(u)) by_item[i].push_back(u);
  }
  DenseMatrix g(x.n_users(), x.n_users());
  for (const auto& users : by_item) {
    for (std::size_t a = 0; a < users.size(); ++a) {
      double* out = &g(users[a], 0);
      for (std::size_t b = a; b < users.size(); ++b) out[users[b]] += 1.0;
    }
  }
  for (std::size_t i = 0; i < g.rows(); ++i) {
    for (std::size_t j = i + 1; j < g.cols(); ++j) g(j, i) = g(i, j);
  }
  return SymmetricMatrix::symmetrize(std::move(g));
}

SymmetricMatrix gram_rows(const DenseMatrix& m) {
  DenseMatrix out(m.rows(), m.rows());
  view(out).noalias() = view(m) * view(m).transpose();
  return SymmetricMatrix::symmetrize(std::move(out));
}

SymmetricMatrix gram_cols(const DenseMatrix& m) {
  DenseMatrix out(m.cols(), m.cols());
  view(out).noalias() = view(m).transpose() * view(m);
  return SymmetricMatrix::symmetrize(std::move(out));
}

DenseMatrix densify(const InteractionMatrix& x, std::size_t max_dim) {
  check_cap(x.n_users(), max_dim);
  check_cap(x.n_items(), max_dim);
  DenseMatrix d(x.n_users(), x.n_items());
  for (std::size_t u = 0; u < x.n_users(); ++u) {
    for (ItemIndex i : x.row(u)) d(u, i) = 1.0;
  }
  return d;
}

EigenDecomposition eigh(const SymmetricMatrix& a) {
  check_finite(a.dense(), "eigh");
  const std::size_t n = a.dim();
  EigenDecomposition out{DenseMatrix(n, n), std::vector<double>(n)};
  if (n == 0) return out;

  // Storage is exactly symmetric, so the row-major buffer is also the column-major one.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(
      Eigen::Map<const Eigen::MatrixXd>(a.dense().data(), static_cast<Eigen::Index>(n),
                                        static_cast<Eigen::Index>(n)),
      Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("eigh: tridiagonal QR did not converge for dimension " +
                         std::to_string(n) + " within " +
                         std::to_string(Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>::m_maxIterations) +
                         " iterations per eigenvalue");
  }

  const auto& values = solver.eigenvalues();
  const auto& vectors = solver.eigenvectors();
  for (std::size_t k = 0; k < n; ++k) {
    // Eigen sorts ascending.
    const auto src = static_cast<Eigen::Index>(n - 1 - k);
    out.eigenvalues[k] = values(src);
    double sign = 1.0;
    for (std::size_t r = 0; r < n; ++r) {
      const double v = vectors(static_cast<Eigen::Index>(r), src);
      if (std::abs(v) > 1e-12) {
        sign = v < 0 ? -1.0 : 1.0;
        break;
      }
    }
    for (std::size_t r = 0; r < n; ++r) {
      out.eigenvectors(r, k) = sign * vectors(static_cast<Eigen::Index>(r), src);
    }
  }
  return out;
}

DenseMatrix spd_solve(const SymmetricMatrix& a, const DenseMatrix& b) {
  if (a.dim() != b.rows()) {
    throw DimensionError("spd_solve: system is " + std::to_string(a.dim()) + "x" +
                         std::to_string(a.dim()) + " but right-hand side has " +
                         std::to_string(b.rows()) + " rows");
  }
  check_finite(a.dense(), "spd_solve");
  Eigen::LLT<Eigen::MatrixXd> llt(Eigen::Map<const Eigen::MatrixXd>(
      a.dense().data(), static_cast<Eigen::Index>(a.dim()), static_cast<Eigen::Index>(a.dim())));
  if (llt.info() != Eigen::Success) {
    throw NotSpdError("spd_solve: non-positive pivot in Cholesky factorization of a " +
                      std::to_string(a.dim()) + "x" + std::to_string(a.dim()) + " matrix");
  }
  DenseMatrix z(b.rows(), b.cols());
  view(z) = llt.solve(view(b));
  return z;
}

SymmetricMatrix spd_inverse(const SymmetricMatrix& a) {
  return SymmetricMatrix::symmetrize(spd_solve(a, DenseMatrix::identity(a.dim())));
}

SymmetricMatrix inv_sqrt(const EigenDecomposition& eig, double eps) {
  if (!(eps >= 0.0)) throw ConfigError("inv_sqrt: eps must be >= 0");
  const std::size_t n = eig.eigenvalues.size();
  if (n == 0) return SymmetricMatrix(0);

  const double largest = eig.eigenvalues.front();
  const double scale = std::max(std::abs(largest), std::abs(eig.eigenvalues.back()));
  if (eig.eigenvalues.back() < -1e-8 * scale) {
    throw NumericalError("inv_sqrt: matrix is indefinite (eigenvalue " +
                         std::to_string(eig.eigenvalues.back()) + ")");
  }
  if (eps == 0.0) {
    const std::size_t rank = numerical_rank(eig);
    if (rank < n) {
      throw SingularityError("inv_sqrt: rank " + std::to_string(rank) + " < dimension " +
                             std::to_string(n) + " and eps = 0");
    }
  }

  DenseMatrix scaled(n, n);
  for (std::size_t c = 0; c < n; ++c) {
    const double d = 1.0 / std::sqrt(std::max(eig.eigenvalues[c], 0.0) + eps);
    for (std::size_t r = 0; r < n; ++r) scaled(r, c) = eig.eigenvectors(r, c) * d;
  }
  DenseMatrix p(n, n);
  view(p).noalias() = view(scaled) * view(eig.eigenvectors).transpose();
  return SymmetricMatrix::symmetrize(std::move(p));
}

SymmetricMatrix inv_sqrt(const SymmetricMatrix& a, double eps) { return inv_sqrt(eigh(a), eps); }

std::size_t numerical_rank(const EigenDecomposition& eig) {
  if (eig.eigenvalues.empty()) return 0;
  const double largest = eig.eigenvalues.front();
  if (!(largest > 0.0)) return 0;
  return static_cast<std::size_t>(
      std::count_if(eig.eigenvalues.begin(), eig.eigenvalues.end(),
                    [&](double v) { return v > kRankTolerance * largest; }));
}

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.rows()) throw DimensionError("matmul: inner dimensions differ");
  DenseMatrix out(a.rows(), b.cols());
  view(out).noalias() = view(a) * view(b);
  return out;
}

DenseMatrix matmul_tn(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows() != b.rows()) throw DimensionError("matmul_tn: row counts differ");
  DenseMatrix out(a.cols(), b.cols());
  view(out).noalias() = view(a).transpose() * view(b);
  return out;
}

double frobenius_norm(const DenseMatrix& a) { return view(a).norm(); }

double frobenius_distance(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError("frobenius_distance: shapes differ");
  }
  return (view(a) - view(b)).norm();
}

double relative_error(const DenseMatrix& a, const DenseMatrix& b) {
  const double diff = frobenius_distance(a, b);
  const double ref = frobenius_norm(b);
  return ref > 0.0 ? diff / ref : diff;
}

double max_abs_difference(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError("max_abs_difference: shapes differ");
  }
  return a.size() == 0 ? 0.0 : (view(a) - view(b)).cwiseAbs().maxCoeff();
}

}  // namespace wrec
