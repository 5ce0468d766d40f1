#pragma once

#include "opjac/grids.hpp"
#include "opjac/matrix.hpp"

namespace opjac {

/// Discrete operators on the axisymmetric spherical tensor-product grid
/// (shifted rational Chebyshev in r, pole-avoiding uniform angles in theta).
/// The full grid is flattened angle-major with the radial index fastest;
/// within each radial line the first point is at infinity and the last is
/// the sphere surface (r = 1).
///
/// Every operator is provided both on the full grid and split by
/// restriction into the pieces the colloid problem consumes: finite ->
/// finite (gradients), finite/infinity -> interior (divergence, Laplacian)
/// and finite/infinity -> surface rows (normal derivative).
struct SphericalOperators {
  Index n_r = 0;  // finite radial points per line
  Index n_t = 0;
  double l_r = 0.0;

  Eigen::VectorXd r;           // n_r + 1 entries, r[0] = inf, r[n_r] = 1
  Eigen::VectorXd one_over_r;  // 0 at the infinity point (analytic limit)
  Eigen::VectorXd theta;
  OperatorMatrix d_r;      // radial derivative, zero row at infinity
  OperatorMatrix d_theta;  // polar-angle derivative

  // full tensor-grid operators (n_t*(n_r+1) columns)
  OperatorMatrix div_r;       // I (x) (2/r + d_r)
  OperatorMatrix div_theta;   // (1/sin)d_theta sin (x) (1/r)
  OperatorMatrix grad_r;      // I (x) d_r
  OperatorMatrix grad_theta;  // d_theta (x) (1/r)
  OperatorMatrix laplacian;
  OperatorMatrix g_n;  // outward-normal derivative at the surface, n_t rows

  // surface operators (n_t x n_t)
  OperatorMatrix d_s;
  OperatorMatrix g_s;

  // restriction matrices
  OperatorMatrix r_finite;    // full -> finite
  OperatorMatrix r_interior;  // full -> interior (finite minus surface)
  OperatorMatrix r_surface;   // finite -> surface
  OperatorMatrix r_infinity;  // full -> infinity points

  // split operators
  OperatorMatrix grad_r_f, grad_theta_f;    // finite -> finite
  OperatorMatrix div_r_f, div_theta_f;      // finite -> interior
  OperatorMatrix div_r_inf, div_theta_inf;  // infinity -> interior
  OperatorMatrix lap_f, lap_inf;
  OperatorMatrix g_n_f, g_n_inf;

  Eigen::VectorXd cos_theta, sin_theta;
  Eigen::VectorXd cos_theta_full, sin_theta_full;  // over the finite grid

  std::vector<Index> surface_in_finite;  // surface positions within the finite vector

  Index full_size() const { return n_t * (n_r + 1); }
  Index finite_size() const { return n_t * n_r; }
  Index interior_size() const { return n_t * (n_r - 1); }
};

SphericalOperators spherical_operators(Index n_r, Index n_t, double l_r);

}  // namespace opjac
