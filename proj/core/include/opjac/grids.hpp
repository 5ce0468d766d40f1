#pragma once

#include "opjac/matrix.hpp"

namespace opjac {

/// 1D collocation grid: points descending (x[0] = 1 ... x[n-1] = -1 for
/// Chebyshev), first-derivative matrix, and quadrature weights.
struct Grid1D {
  Eigen::VectorXd points;
  OperatorMatrix d;
  RowVector w;

  Index size() const { return points.size(); }
};

/// Gauss-Lobatto-Chebyshev grid with the standard collocation derivative
/// matrix; differentiation is exact (to roundoff) on polynomials of
/// degree < n. Quadrature weights are Clenshaw-Curtis.
Grid1D chebyshev(Index n);

/// Clenshaw-Curtis weights on the n-point Chebyshev grid, computed by the
/// explicit cosine-sum formula; exact for polynomials of degree < n.
RowVector clenshaw_curtis(Index n);

/// n-by-n matrix with every row equal to w, so Q*f is a constant vector of
/// the integral approximation. Rank 1: Q = ones * w.
OperatorMatrix quadrature_matrix(const RowVector& w);

/// Chebyshev grid under the boundary-layer map x = tanh(alpha*y)/beta,
/// alpha = atanh(beta). gamma = dy/dx; the mapped second-derivative
/// operator is diag(gamma)*D*diag(gamma)*D.
struct MappedThinFilmGrid {
  double beta = 0.0;
  double alpha = 0.0;
  Eigen::VectorXd y;
  Eigen::VectorXd x;
  GridFunction gamma;
  OperatorMatrix d;         // derivative on the y grid
  OperatorMatrix l_mapped;  // diag(gamma)*D*diag(gamma)*D
  RowVector w;              // Clenshaw-Curtis weights on the y grid

  Index size() const { return y.size(); }
};

MappedThinFilmGrid mapped_thinfilm_grid(Index n, double beta);

/// Pole-avoiding polar-angle grid theta_k = (2k-1)*pi/(2*n_t) with the
/// trigonometric-interpolation derivative matrix (differentiates functions
/// of the form p(cos(theta)) exactly for polynomial degree < n_t).
struct PolarGrid {
  Eigen::VectorXd theta;
  OperatorMatrix d;
};

PolarGrid polar_grid(Index n_t);

/// Shifted semi-infinite rational Chebyshev grid r = l_r*(1+y)/(1-y) + 1.
/// r[0] is the explicit point at infinity (its derivative row is zero by
/// the (1-y)^2 factor); r[n-1] = 1 is the sphere surface. one_over_r
/// carries the analytic limit 0 at infinity.
struct RadialGrid {
  Eigen::VectorXd y;
  Eigen::VectorXd r;
  Eigen::VectorXd one_over_r;
  OperatorMatrix d;
};

RadialGrid rational_radial_grid(Index n, double l_r);

/// Magnitudes of the cosine-series coefficients of a Chebyshev-grid sample,
/// i.e. |fft| of the even extension [u; flip(u(2:end-1))], computed by a
/// direct O(N^2) cosine sum.
Eigen::VectorXd chebyshev_coefficients(const GridFunction& u);

/// Barycentric evaluation of the Chebyshev-grid interpolant at query points.
Eigen::VectorXd chebyshev_interpolate(const Eigen::VectorXd& points,
                                      const GridFunction& values,
                                      const Eigen::VectorXd& query);

}  // namespace opjac
