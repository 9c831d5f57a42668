#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <utility>
#include <vector>

#include "wrec/interaction_matrix.hpp"

namespace wrec {

/// Largest square dense intermediate (rows == cols == cap) a solver may form
/// unless the caller overrides it. 20000^2 doubles is 3.2 GB.
inline constexpr std::size_t kDefaultMaxDenseDim = 20000;

/// Row-major dense matrix of doubles.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), values_(rows * cols, fill) {}
  DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> values);
  DenseMatrix(std::initializer_list<std::initializer_list<double>> rows);

  static DenseMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return values_.size(); }

  double& operator()(std::size_t r, std::size_t c) { return values_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return values_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) { return {values_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const { return {values_.data() + r * cols_, cols_}; }

  double* data() { return values_.data(); }
  const double* data() const { return values_.data(); }
  const std::vector<double>& values() const { return values_; }

  DenseMatrix transposed() const;
  bool all_finite() const;

  friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> values_;
};

/// Square matrix whose storage is kept symmetric: every write goes to both
/// (i, j) and (j, i).
class SymmetricMatrix {
 public:
  SymmetricMatrix() = default;
  explicit SymmetricMatrix(std::size_t dim) : full_(dim, dim) {}

  /// Averages `m` with its transpose. Throws DimensionError if not square.
  static SymmetricMatrix symmetrize(DenseMatrix m);
  static SymmetricMatrix identity(std::size_t n);

  std::size_t dim() const { return full_.rows(); }
  double operator()(std::size_t i, std::size_t j) const { return full_(i, j); }
  void set(std::size_t i, std::size_t j, double v) {
    full_(i, j) = v;
    full_(j, i) = v;
  }
  void add_to_diagonal(double v);

  const DenseMatrix& dense() const& { return full_; }
  DenseMatrix dense() && { return std::move(full_); }
  std::vector<double> diagonal() const;

  friend bool operator==(const SymmetricMatrix&, const SymmetricMatrix&) = default;

 private:
  DenseMatrix full_;
};

/// A = U diag(eigenvalues) U^T with eigenvalues sorted descending and the
/// first nonzero component of each eigenvector positive.
struct EigenDecomposition {
  DenseMatrix eigenvectors;  // columns
  std::vector<double> eigenvalues;

  DenseMatrix reconstruct() const;
};

enum class GramSide { items, users };

/// X^T X (items) or X X^T (users), accumulated from the sparse rows.
SymmetricMatrix gram(const InteractionMatrix& x, GramSide side,
                     std::size_t max_dim = kDefaultMaxDenseDim);

/// M M^T.
SymmetricMatrix gram_rows(const DenseMatrix& m);

/// M^T M.
SymmetricMatrix gram_cols(const DenseMatrix& m);

/// Dense |U| x |I| copy of X. Throws CapacityError when either side exceeds max_dim.
DenseMatrix densify(const InteractionMatrix& x, std::size_t max_dim = kDefaultMaxDenseDim);

EigenDecomposition eigh(const SymmetricMatrix& a);

/// Solves A Z = B for SPD A via Cholesky. Throws NotSpdError.
DenseMatrix spd_solve(const SymmetricMatrix& a, const DenseMatrix& b);

/// A^{-1} for SPD A.
SymmetricMatrix spd_inverse(const SymmetricMatrix& a);

/// U (max(S, 0) + eps I)^{-1/2} U^T.
SymmetricMatrix inv_sqrt(const SymmetricMatrix& a, double eps);
SymmetricMatrix inv_sqrt(const EigenDecomposition& eig, double eps);

/// Eigenvalues at or below this fraction of the largest one count as zero.
inline constexpr double kRankTolerance = 1e-10;

/// Number of eigenvalues above kRankTolerance * max eigenvalue.
std::size_t numerical_rank(const EigenDecomposition& eig);

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b);
/// A^T B without materializing A^T.
DenseMatrix matmul_tn(const DenseMatrix& a, const DenseMatrix& b);

double frobenius_norm(const DenseMatrix& a);
double frobenius_distance(const DenseMatrix& a, const DenseMatrix& b);
/// ||a - b||_F / ||b||_F, or the absolute distance when b is zero.
double relative_error(const DenseMatrix& a, const DenseMatrix& b);
double max_abs_difference(const DenseMatrix& a, const DenseMatrix& b);

}  // namespace wrec
