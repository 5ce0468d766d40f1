#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <iosfwd>
#include <memory>
#include <variant>
#include <vector>

#include "opjac/errors.hpp"

namespace opjac {

using Index = Eigen::Index;
using GridFunction = Eigen::VectorXd;
using RowVector = Eigen::RowVectorXd;
using DenseMatrix = Eigen::MatrixXd;
using SparseMatrix = Eigen::SparseMatrix<double>;

bool all_finite(const GridFunction& v);

/// Ordered, duplicate-free list of 0-based positions within a grid of size n.
class IndexSubset {
 public:
  IndexSubset(std::vector<Index> indices, Index grid_size);

  static IndexSubset full(Index n);
  /// Half-open range [first, last) within a grid of size n.
  static IndexSubset range(Index first, Index last, Index n);

  Index size() const { return static_cast<Index>(indices_.size()); }
  Index grid_size() const { return grid_size_; }
  const std::vector<Index>& indices() const { return indices_; }
  Index operator[](Index k) const { return indices_[static_cast<size_t>(k)]; }

 private:
  std::vector<Index> indices_;
  Index grid_size_;
};

/// A real matrix representing a discrete linear operator (differentiation,
/// quadrature, restriction, ...). Storage is dense or compressed sparse;
/// instances are immutable once built and safe to share across threads.
class OperatorMatrix {
 public:
  OperatorMatrix() : storage_(DenseMatrix(0, 0)) {}
  explicit OperatorMatrix(DenseMatrix m) : storage_(std::move(m)) {}
  explicit OperatorMatrix(SparseMatrix m);

  static OperatorMatrix identity(Index n, bool sparse = true);
  static OperatorMatrix zero(Index rows, Index cols, bool sparse = true);

  Index rows() const;
  Index cols() const;
  bool is_sparse() const { return std::holds_alternative<SparseMatrix>(storage_); }

  const DenseMatrix& dense() const;    // throws unless dense storage
  const SparseMatrix& sparse() const;  // throws unless sparse storage
  DenseMatrix to_dense() const;
  SparseMatrix to_sparse() const;

  GridFunction apply(const GridFunction& v) const;
  RowVector row_dense(Index i) const;
  double coeff(Index i, Index j) const;
  double max_abs() const;
  Index nonzeros() const;

  OperatorMatrix transpose() const;
  OperatorMatrix scaled(double s) const;

  OperatorMatrix& operator+=(const OperatorMatrix& other);

 private:
  std::variant<DenseMatrix, SparseMatrix> storage_;
};

GridFunction operator*(const OperatorMatrix& a, const GridFunction& v);
OperatorMatrix operator+(const OperatorMatrix& a, const OperatorMatrix& b);
OperatorMatrix operator-(const OperatorMatrix& a, const OperatorMatrix& b);
OperatorMatrix operator*(double s, const OperatorMatrix& a);

/// Kronecker product; sparse whenever either factor is sparse.
OperatorMatrix kron(const OperatorMatrix& a, const OperatorMatrix& b);

/// Sparse diagonal matrix with v on the diagonal.
OperatorMatrix diag(const GridFunction& v);

/// m-by-n 0/1 matrix extracting `subset`; the prolongation is its transpose.
OperatorMatrix restriction(const IndexSubset& subset);

/// R_to * d * R_from^T without forming the products.
OperatorMatrix restrict_operator(const OperatorMatrix& d, const IndexSubset& from,
                                 const IndexSubset& to);

/// diag(v) * a and a * diag(v) computed in O(nnz) as row/column scalings.
OperatorMatrix scale_rows(const GridFunction& v, const OperatorMatrix& a);
OperatorMatrix scale_cols(const OperatorMatrix& a, const GridFunction& v);

/// Explicit matrix-matrix product. O(n^3) dense / O(nnz^2)-ish sparse:
/// intended for one-time operator assembly. Per-iteration Jacobian builders
/// should use scale_rows/scale_cols and rank-1 outer products instead.
OperatorMatrix matmul(const OperatorMatrix& a, const OperatorMatrix& b);

/// Rank-1 dense matrix col * row.
OperatorMatrix outer(const GridFunction& col, const RowVector& row);

/// Stack a 2d grid of conforming blocks; sparse iff any block is sparse.
OperatorMatrix block_assemble(const std::vector<std::vector<OperatorMatrix>>& blocks);

/// Solve a*x = b. Dense path: partially pivoted LU; sparse path: direct
/// sparse LU. The residual satisfies ||a*x - b||_inf <= c*n*eps*||a||*||x||
/// (backward-stable factorization); matrices singular to working precision
/// raise SingularMatrixError with the pivot location.
GridFunction solve_linear(const OperatorMatrix& a, const GridFunction& b);

/// Factor once, solve many right-hand sides.
class LinearFactorization {
 public:
  explicit LinearFactorization(const OperatorMatrix& a);
  ~LinearFactorization();
  LinearFactorization(LinearFactorization&&) noexcept;
  LinearFactorization& operator=(LinearFactorization&&) noexcept;
  LinearFactorization(const LinearFactorization&) = delete;
  LinearFactorization& operator=(const LinearFactorization&) = delete;

  GridFunction solve(const GridFunction& b) const;
  DenseMatrix solve_dense(const DenseMatrix& b) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Plain-text coordinate dump (row, col, value per line, 1-based indices).
/// Debugging aid, not a compatibility contract.
void dump_coordinate(const OperatorMatrix& a, std::ostream& os);

}  // namespace opjac
