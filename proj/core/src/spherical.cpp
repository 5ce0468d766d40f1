#include "opjac/spherical.hpp"

#include <cmath>

namespace opjac {

namespace {

// Recompute the diagonal so each row annihilates constants exactly; valid
// only for operators whose continuous analogue kills constants.
void zero_row_sums(DenseMatrix& m) {
  for (Index i = 0; i < m.rows(); ++i) {
    double s = 0.0;
    for (Index j = 0; j < m.cols(); ++j) s += m(i, j);
    m(i, i) -= s;
  }
}

IndexSubset strided_subset(Index n_lines, Index line_len, Index first, Index count,
                           Index grid_size) {
  std::vector<Index> ix;
  ix.reserve(static_cast<size_t>(n_lines * count));
  for (Index l = 0; l < n_lines; ++l) {
    for (Index k = 0; k < count; ++k) ix.push_back(l * line_len + first + k);
  }
  return IndexSubset(std::move(ix), grid_size);
}

}  // namespace

SphericalOperators spherical_operators(Index n_r, Index n_t, double l_r) {
  if (n_r < 2 || n_t < 2) {
    throw DimensionError("spherical_operators: need n_r >= 2 and n_t >= 2");
  }
  SphericalOperators s;
  s.n_r = n_r;
  s.n_t = n_t;
  s.l_r = l_r;

  const RadialGrid rad = rational_radial_grid(n_r + 1, l_r);
  const PolarGrid pol = polar_grid(n_t);
  s.r = rad.r;
  s.one_over_r = rad.one_over_r;
  s.theta = pol.theta;
  s.d_r = rad.d;
  s.d_theta = pol.d;

  const Index nrp = n_r + 1;  // radial points per line, infinity included
  const Index n_full = n_t * nrp;

  s.cos_theta = s.theta.array().cos();
  s.sin_theta = s.theta.array().sin();
  s.cos_theta_full.resize(n_t * n_r);
  s.sin_theta_full.resize(n_t * n_r);
  for (Index l = 0; l < n_t; ++l) {
    s.cos_theta_full.segment(l * n_r, n_r).setConstant(s.cos_theta(l));
    s.sin_theta_full.segment(l * n_r, n_r).setConstant(s.sin_theta(l));
  }

  const DenseMatrix& dr = s.d_r.dense();
  const DenseMatrix& dt = s.d_theta.dense();
  const Eigen::VectorXd inv_r = s.one_over_r;
  const Eigen::VectorXd inv_r2 = inv_r.array().square();
  const Eigen::VectorXd inv_sin = s.sin_theta.cwiseInverse();

  // 1d building blocks
  DenseMatrix div_rad = dr;
  div_rad.diagonal() += 2.0 * inv_r;

  DenseMatrix lap_rad = inv_r.asDiagonal() * dr;
  lap_rad = 2.0 * lap_rad + dr * dr;
  zero_row_sums(lap_rad);

  DenseMatrix ang_div = inv_sin.asDiagonal() * dt * s.sin_theta.asDiagonal();
  DenseMatrix ang_lap = ang_div * dt;
  zero_row_sums(ang_lap);

  const OperatorMatrix eye_t = OperatorMatrix::identity(n_t);

  s.div_r = kron(eye_t, OperatorMatrix(div_rad));
  s.div_theta = kron(OperatorMatrix(ang_div), diag(inv_r));
  s.grad_r = kron(eye_t, s.d_r);
  s.grad_theta = kron(s.d_theta, diag(inv_r));
  s.laplacian = kron(eye_t, OperatorMatrix(lap_rad)) +
                kron(OperatorMatrix(ang_lap), diag(inv_r2));

  const double r_surf = s.r(nrp - 1);
  s.d_s = OperatorMatrix(DenseMatrix(ang_div / r_surf));
  s.g_s = OperatorMatrix(DenseMatrix(dt / r_surf));
  s.g_n = kron(eye_t, OperatorMatrix(DenseMatrix(-dr.row(nrp - 1))));

  const IndexSubset finite = strided_subset(n_t, nrp, 1, n_r, n_full);
  const IndexSubset interior = strided_subset(n_t, nrp, 1, n_r - 1, n_full);
  const IndexSubset infinity = strided_subset(n_t, nrp, 0, 1, n_full);
  const IndexSubset surface_of_finite = strided_subset(n_t, n_r, n_r - 1, 1, n_t * n_r);
  const IndexSubset full_t = IndexSubset::full(n_t);

  s.r_finite = restriction(finite);
  s.r_interior = restriction(interior);
  s.r_surface = restriction(surface_of_finite);
  s.r_infinity = restriction(infinity);
  s.surface_in_finite = surface_of_finite.indices();

  s.grad_r_f = restrict_operator(s.grad_r, finite, finite);
  s.grad_theta_f = restrict_operator(s.grad_theta, finite, finite);
  s.div_r_f = restrict_operator(s.div_r, finite, interior);
  s.div_theta_f = restrict_operator(s.div_theta, finite, interior);
  s.div_r_inf = restrict_operator(s.div_r, infinity, interior);
  s.div_theta_inf = restrict_operator(s.div_theta, infinity, interior);
  s.lap_f = restrict_operator(s.laplacian, finite, interior);
  s.lap_inf = restrict_operator(s.laplacian, infinity, interior);
  s.g_n_f = restrict_operator(s.g_n, finite, full_t);
  s.g_n_inf = restrict_operator(s.g_n, infinity, full_t);

  return s;
}

}  // namespace opjac
