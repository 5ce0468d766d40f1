#include "opjac/matrix.hpp"

#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <unordered_set>

namespace opjac {

namespace {

[[noreturn]] void dim_fail(const std::string& what) { throw DimensionError(what); }

void check_product_size(Index ar, Index br) {
  const double prod = static_cast<double>(ar) * static_cast<double>(br);
  if (prod > static_cast<double>(std::numeric_limits<Index>::max())) {
    dim_fail("kron: dimension overflow");
  }
}

}  // namespace

bool all_finite(const GridFunction& v) { return v.allFinite(); }

IndexSubset::IndexSubset(std::vector<Index> indices, Index grid_size)
    : indices_(std::move(indices)), grid_size_(grid_size) {
  std::unordered_set<Index> seen;
  for (Index i : indices_) {
    if (i < 0 || i >= grid_size_) dim_fail("IndexSubset: index out of range");
    if (!seen.insert(i).second) dim_fail("IndexSubset: duplicate index");
  }
}

IndexSubset IndexSubset::full(Index n) { return range(0, n, n); }

IndexSubset IndexSubset::range(Index first, Index last, Index n) {
  std::vector<Index> ix;
  ix.reserve(static_cast<size_t>(std::max<Index>(0, last - first)));
  for (Index i = first; i < last; ++i) ix.push_back(i);
  return IndexSubset(std::move(ix), n);
}

OperatorMatrix::OperatorMatrix(SparseMatrix m) : storage_(std::move(m)) {
  std::get<SparseMatrix>(storage_).makeCompressed();
}

OperatorMatrix OperatorMatrix::identity(Index n, bool sparse) {
  if (sparse) {
    SparseMatrix m(n, n);
    m.setIdentity();
    return OperatorMatrix(std::move(m));
  }
  return OperatorMatrix(DenseMatrix(DenseMatrix::Identity(n, n)));
}

OperatorMatrix OperatorMatrix::zero(Index rows, Index cols, bool sparse) {
  if (sparse) return OperatorMatrix(SparseMatrix(rows, cols));
  return OperatorMatrix(DenseMatrix(DenseMatrix::Zero(rows, cols)));
}

Index OperatorMatrix::rows() const {
  return is_sparse() ? sparse().rows() : dense().rows();
}

Index OperatorMatrix::cols() const {
  return is_sparse() ? sparse().cols() : dense().cols();
}

const DenseMatrix& OperatorMatrix::dense() const {
  if (is_sparse()) throw Error("OperatorMatrix: dense() called on sparse storage");
  return std::get<DenseMatrix>(storage_);
}

const SparseMatrix& OperatorMatrix::sparse() const {
  if (!is_sparse()) throw Error("OperatorMatrix: sparse() called on dense storage");
  return std::get<SparseMatrix>(storage_);
}

DenseMatrix OperatorMatrix::to_dense() const {
  return is_sparse() ? DenseMatrix(sparse()) : dense();
}

SparseMatrix OperatorMatrix::to_sparse() const {
  if (is_sparse()) return sparse();
  SparseMatrix m = dense().sparseView();
  m.makeCompressed();
  return m;
}

GridFunction OperatorMatrix::apply(const GridFunction& v) const {
  if (v.size() != cols()) dim_fail("OperatorMatrix::apply: length mismatch");
  return is_sparse() ? GridFunction(sparse() * v) : GridFunction(dense() * v);
}

RowVector OperatorMatrix::row_dense(Index i) const {
  if (i < 0 || i >= rows()) dim_fail("OperatorMatrix::row_dense: row out of range");
  if (!is_sparse()) return dense().row(i);
  RowVector r = RowVector::Zero(cols());
  const SparseMatrix& m = sparse();
  for (Index j = 0; j < m.outerSize(); ++j) {
    for (SparseMatrix::InnerIterator it(m, j); it; ++it) {
      if (it.row() == i) r(it.col()) = it.value();
    }
  }
  return r;
}

double OperatorMatrix::coeff(Index i, Index j) const {
  return is_sparse() ? sparse().coeff(i, j) : dense()(i, j);
}

double OperatorMatrix::max_abs() const {
  if (rows() == 0 || cols() == 0) return 0.0;
  if (!is_sparse()) return dense().cwiseAbs().maxCoeff();
  double m = 0.0;
  const SparseMatrix& s = sparse();
  for (Index j = 0; j < s.outerSize(); ++j) {
    for (SparseMatrix::InnerIterator it(s, j); it; ++it) {
      m = std::max(m, std::abs(it.value()));
    }
  }
  return m;
}

Index OperatorMatrix::nonzeros() const {
  return is_sparse() ? sparse().nonZeros() : rows() * cols();
}

OperatorMatrix OperatorMatrix::transpose() const {
  if (is_sparse()) return OperatorMatrix(SparseMatrix(sparse().transpose()));
  return OperatorMatrix(DenseMatrix(dense().transpose()));
}

OperatorMatrix OperatorMatrix::scaled(double s) const {
  if (is_sparse()) return OperatorMatrix(SparseMatrix(s * sparse()));
  return OperatorMatrix(DenseMatrix(s * dense()));
}

OperatorMatrix& OperatorMatrix::operator+=(const OperatorMatrix& other) {
  *this = *this + other;
  return *this;
}

GridFunction operator*(const OperatorMatrix& a, const GridFunction& v) {
  return a.apply(v);
}

OperatorMatrix operator+(const OperatorMatrix& a, const OperatorMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) dim_fail("operator+: shape mismatch");
  if (a.is_sparse() && b.is_sparse()) {
    return OperatorMatrix(SparseMatrix(a.sparse() + b.sparse()));
  }
  return OperatorMatrix(DenseMatrix(a.to_dense() + b.to_dense()));
}

OperatorMatrix operator-(const OperatorMatrix& a, const OperatorMatrix& b) {
  return a + b.scaled(-1.0);
}

OperatorMatrix operator*(double s, const OperatorMatrix& a) { return a.scaled(s); }

OperatorMatrix kron(const OperatorMatrix& a, const OperatorMatrix& b) {
  check_product_size(a.rows(), b.rows());
  check_product_size(a.cols(), b.cols());
  const Index rows = a.rows() * b.rows();
  const Index cols = a.cols() * b.cols();
  if (!a.is_sparse() && !b.is_sparse()) {
    const DenseMatrix& da = a.dense();
    const DenseMatrix& db = b.dense();
    DenseMatrix out(rows, cols);
    for (Index i = 0; i < da.rows(); ++i) {
      for (Index j = 0; j < da.cols(); ++j) {
        out.block(i * db.rows(), j * db.cols(), db.rows(), db.cols()) = da(i, j) * db;
      }
    }
    return OperatorMatrix(std::move(out));
  }
  const SparseMatrix sa = a.to_sparse();
  const SparseMatrix sb = b.to_sparse();
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<size_t>(sa.nonZeros()) * static_cast<size_t>(sb.nonZeros()));
  for (Index ja = 0; ja < sa.outerSize(); ++ja) {
    for (SparseMatrix::InnerIterator ita(sa, ja); ita; ++ita) {
      for (Index jb = 0; jb < sb.outerSize(); ++jb) {
        for (SparseMatrix::InnerIterator itb(sb, jb); itb; ++itb) {
          trips.emplace_back(ita.row() * sb.rows() + itb.row(),
                             ita.col() * sb.cols() + itb.col(),
                             ita.value() * itb.value());
        }
      }
    }
  }
  SparseMatrix out(rows, cols);
  out.setFromTriplets(trips.begin(), trips.end());
  return OperatorMatrix(std::move(out));
}

OperatorMatrix diag(const GridFunction& v) {
  const Index n = v.size();
  SparseMatrix m(n, n);
  m.reserve(Eigen::VectorXi::Constant(n, 1));
  for (Index i = 0; i < n; ++i) m.insert(i, i) = v(i);
  m.makeCompressed();
  return OperatorMatrix(std::move(m));
}

OperatorMatrix restriction(const IndexSubset& subset) {
  SparseMatrix m(subset.size(), subset.grid_size());
  m.reserve(Eigen::VectorXi::Constant(subset.grid_size(), 1));
  for (Index k = 0; k < subset.size(); ++k) m.insert(k, subset[k]) = 1.0;
  m.makeCompressed();
  return OperatorMatrix(std::move(m));
}

OperatorMatrix restrict_operator(const OperatorMatrix& d, const IndexSubset& from,
                                 const IndexSubset& to) {
  if (from.grid_size() != d.cols() || to.grid_size() != d.rows()) {
    dim_fail("restrict_operator: subset sizes do not match the operator");
  }
  if (!d.is_sparse()) {
    DenseMatrix out(to.size(), from.size());
    const DenseMatrix& m = d.dense();
    for (Index i = 0; i < to.size(); ++i) {
      for (Index j = 0; j < from.size(); ++j) out(i, j) = m(to[i], from[j]);
    }
    return OperatorMatrix(std::move(out));
  }
  std::vector<Index> rowpos(static_cast<size_t>(d.rows()), -1);
  std::vector<Index> colpos(static_cast<size_t>(d.cols()), -1);
  for (Index k = 0; k < to.size(); ++k) rowpos[static_cast<size_t>(to[k])] = k;
  for (Index k = 0; k < from.size(); ++k) colpos[static_cast<size_t>(from[k])] = k;
  std::vector<Eigen::Triplet<double>> trips;
  const SparseMatrix& m = d.sparse();
  for (Index j = 0; j < m.outerSize(); ++j) {
    for (SparseMatrix::InnerIterator it(m, j); it; ++it) {
      const Index r = rowpos[static_cast<size_t>(it.row())];
      const Index c = colpos[static_cast<size_t>(it.col())];
      if (r >= 0 && c >= 0) trips.emplace_back(r, c, it.value());
    }
  }
  SparseMatrix out(to.size(), from.size());
  out.setFromTriplets(trips.begin(), trips.end());
  return OperatorMatrix(std::move(out));
}

OperatorMatrix scale_rows(const GridFunction& v, const OperatorMatrix& a) {
  if (v.size() != a.rows()) dim_fail("scale_rows: length mismatch");
  if (a.is_sparse()) {
    SparseMatrix out = a.sparse();
    for (Index j = 0; j < out.outerSize(); ++j) {
      for (SparseMatrix::InnerIterator it(out, j); it; ++it) {
        it.valueRef() *= v(it.row());
      }
    }
    return OperatorMatrix(std::move(out));
  }
  return OperatorMatrix(DenseMatrix(v.asDiagonal() * a.dense()));
}

OperatorMatrix scale_cols(const OperatorMatrix& a, const GridFunction& v) {
  if (v.size() != a.cols()) dim_fail("scale_cols: length mismatch");
  if (a.is_sparse()) {
    SparseMatrix out = a.sparse();
    for (Index j = 0; j < out.outerSize(); ++j) {
      for (SparseMatrix::InnerIterator it(out, j); it; ++it) {
        it.valueRef() *= v(it.col());
      }
    }
    return OperatorMatrix(std::move(out));
  }
  return OperatorMatrix(DenseMatrix(a.dense() * v.asDiagonal()));
}

OperatorMatrix matmul(const OperatorMatrix& a, const OperatorMatrix& b) {
  if (a.cols() != b.rows()) dim_fail("matmul: inner dimension mismatch");
  if (a.is_sparse() && b.is_sparse()) {
    SparseMatrix out = a.sparse() * b.sparse();
    out.makeCompressed();
    return OperatorMatrix(std::move(out));
  }
  return OperatorMatrix(DenseMatrix(a.to_dense() * b.to_dense()));
}

OperatorMatrix outer(const GridFunction& col, const RowVector& row) {
  return OperatorMatrix(DenseMatrix(col * row));
}

OperatorMatrix block_assemble(const std::vector<std::vector<OperatorMatrix>>& blocks) {
  if (blocks.empty() || blocks.front().empty()) dim_fail("block_assemble: empty layout");
  const size_t brows = blocks.size();
  const size_t bcols = blocks.front().size();
  std::vector<Index> row_of(brows, 0), col_of(bcols, 0);
  bool any_sparse = false;
  for (size_t i = 0; i < brows; ++i) {
    if (blocks[i].size() != bcols) dim_fail("block_assemble: ragged layout");
    row_of[i] = blocks[i][0].rows();
    for (size_t j = 0; j < bcols; ++j) {
      if (blocks[i][j].rows() != row_of[i]) dim_fail("block_assemble: row mismatch");
      any_sparse |= blocks[i][j].is_sparse();
    }
  }
  for (size_t j = 0; j < bcols; ++j) {
    col_of[j] = blocks[0][j].cols();
    for (size_t i = 0; i < brows; ++i) {
      if (blocks[i][j].cols() != col_of[j]) dim_fail("block_assemble: column mismatch");
    }
  }
  Index total_rows = 0, total_cols = 0;
  std::vector<Index> row0(brows, 0), col0(bcols, 0);
  for (size_t i = 0; i < brows; ++i) { row0[i] = total_rows; total_rows += row_of[i]; }
  for (size_t j = 0; j < bcols; ++j) { col0[j] = total_cols; total_cols += col_of[j]; }

  if (!any_sparse) {
    DenseMatrix out(total_rows, total_cols);
    for (size_t i = 0; i < brows; ++i) {
      for (size_t j = 0; j < bcols; ++j) {
        out.block(row0[i], col0[j], row_of[i], col_of[j]) = blocks[i][j].dense();
      }
    }
    return OperatorMatrix(std::move(out));
  }
  std::vector<Eigen::Triplet<double>> trips;
  for (size_t i = 0; i < brows; ++i) {
    for (size_t j = 0; j < bcols; ++j) {
      const OperatorMatrix& blk = blocks[i][j];
      if (blk.is_sparse()) {
        const SparseMatrix& m = blk.sparse();
        for (Index c = 0; c < m.outerSize(); ++c) {
          for (SparseMatrix::InnerIterator it(m, c); it; ++it) {
            trips.emplace_back(row0[i] + it.row(), col0[j] + it.col(), it.value());
          }
        }
      } else {
        const DenseMatrix& m = blk.dense();
        for (Index r = 0; r < m.rows(); ++r) {
          for (Index c = 0; c < m.cols(); ++c) {
            if (m(r, c) != 0.0) trips.emplace_back(row0[i] + r, col0[j] + c, m(r, c));
          }
        }
      }
    }
  }
  SparseMatrix out(total_rows, total_cols);
  out.setFromTriplets(trips.begin(), trips.end());
  return OperatorMatrix(std::move(out));
}

struct LinearFactorization::Impl {
  std::variant<Eigen::PartialPivLU<DenseMatrix>,
               Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>>>
      lu;
  Index n = 0;
};

namespace {

void check_dense_pivots(const Eigen::PartialPivLU<DenseMatrix>& lu, double scale, Index n) {
  const auto& u_diag = lu.matrixLU().diagonal();
  const double tol = static_cast<double>(n) * std::numeric_limits<double>::epsilon() *
                     std::max(scale, 1e-300);
  for (Index i = 0; i < n; ++i) {
    if (std::abs(u_diag(i)) <= tol) {
      throw SingularMatrixError(
          "solve_linear: matrix singular to working precision (pivot " +
              std::to_string(i) + ", |u_ii| = " + std::to_string(std::abs(u_diag(i))) + ")",
          static_cast<long>(i));
    }
  }
}

}  // namespace

LinearFactorization::LinearFactorization(const OperatorMatrix& a)
    : impl_(std::make_unique<Impl>()) {
  if (a.rows() != a.cols()) dim_fail("LinearFactorization: matrix must be square");
  impl_->n = a.rows();
  if (a.is_sparse()) {
    auto& lu = impl_->lu.emplace<1>();
    lu.analyzePattern(a.sparse());
    lu.factorize(a.sparse());
    if (lu.info() != Eigen::Success) {
      throw SingularMatrixError(
          "solve_linear: sparse factorization failed (" + lu.lastErrorMessage() + ")", -1);
    }
  } else {
    auto& lu = impl_->lu.emplace<0>(a.dense());
    check_dense_pivots(lu, a.max_abs(), impl_->n);
  }
}

LinearFactorization::~LinearFactorization() = default;
LinearFactorization::LinearFactorization(LinearFactorization&&) noexcept = default;
LinearFactorization& LinearFactorization::operator=(LinearFactorization&&) noexcept = default;

GridFunction LinearFactorization::solve(const GridFunction& b) const {
  if (b.size() != impl_->n) dim_fail("LinearFactorization::solve: length mismatch");
  if (impl_->lu.index() == 0) return std::get<0>(impl_->lu).solve(b);
  return std::get<1>(impl_->lu).solve(b);
}

DenseMatrix LinearFactorization::solve_dense(const DenseMatrix& b) const {
  if (b.rows() != impl_->n) dim_fail("LinearFactorization::solve_dense: shape mismatch");
  if (impl_->lu.index() == 0) return std::get<0>(impl_->lu).solve(b);
  return std::get<1>(impl_->lu).solve(b);
}

GridFunction solve_linear(const OperatorMatrix& a, const GridFunction& b) {
  if (a.rows() != a.cols()) dim_fail("solve_linear: matrix must be square");
  if (b.size() != a.rows()) dim_fail("solve_linear: right-hand side length mismatch");
  return LinearFactorization(a).solve(b);
}

void dump_coordinate(const OperatorMatrix& a, std::ostream& os) {
  os.precision(17);
  if (a.is_sparse()) {
    const SparseMatrix& m = a.sparse();
    for (Index j = 0; j < m.outerSize(); ++j) {
      for (SparseMatrix::InnerIterator it(m, j); it; ++it) {
        os << it.row() + 1 << ' ' << it.col() + 1 << ' ' << it.value() << '\n';
      }
    }
    return;
  }
  const DenseMatrix& m = a.dense();
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (m(i, j) != 0.0) os << i + 1 << ' ' << j + 1 << ' ' << m(i, j) << '\n';
    }
  }
}

}  // namespace opjac
