#include "opjac/grids.hpp"

#include <cmath>
#include <limits>

namespace opjac {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

Grid1D chebyshev(Index n) {
  if (n < 2) throw DimensionError("chebyshev: need at least 2 points");
  const Index m = n - 1;
  Eigen::VectorXd x(n);
  for (Index j = 0; j < n; ++j) x(j) = std::cos(kPi * static_cast<double>(j) / m);
  x(0) = 1.0;
  x(m) = -1.0;
  if (n % 2 == 1) x(m / 2) = 0.0;

  DenseMatrix d(n, n);
  Eigen::VectorXd c(n);
  for (Index j = 0; j < n; ++j) {
    c(j) = ((j == 0 || j == m) ? 2.0 : 1.0) * ((j % 2 == 0) ? 1.0 : -1.0);
  }
  for (Index i = 0; i < n; ++i) {
    double rowsum = 0.0;
    for (Index j = 0; j < n; ++j) {
      if (i == j) continue;
      d(i, j) = (c(i) / c(j)) / (x(i) - x(j));
      rowsum += d(i, j);
    }
    // negative-sum trick: rows annihilate constants exactly
    d(i, i) = -rowsum;
  }

  Grid1D g;
  g.points = std::move(x);
  g.d = OperatorMatrix(std::move(d));
  g.w = clenshaw_curtis(n);
  return g;
}

RowVector clenshaw_curtis(Index n) {
  if (n < 2) throw DimensionError("clenshaw_curtis: need at least 2 points");
  const Index m = n - 1;
  RowVector w = RowVector::Zero(n);
  if (m % 2 == 0) {
    w(0) = w(m) = 1.0 / (static_cast<double>(m) * m - 1.0);
  } else {
    w(0) = w(m) = 1.0 / (static_cast<double>(m) * m);
  }
  for (Index i = 1; i < m; ++i) {
    const double theta = kPi * static_cast<double>(i) / m;
    double v = 1.0;
    const Index kmax = (m % 2 == 0) ? m / 2 - 1 : (m - 1) / 2;
    for (Index k = 1; k <= kmax; ++k) {
      v -= 2.0 * std::cos(2.0 * k * theta) / (4.0 * static_cast<double>(k) * k - 1.0);
    }
    if (m % 2 == 0) {
      v -= std::cos(static_cast<double>(m) * theta) / (static_cast<double>(m) * m - 1.0);
    }
    w(i) = 2.0 * v / m;
  }
  return w;
}

OperatorMatrix quadrature_matrix(const RowVector& w) {
  const Index n = w.size();
  DenseMatrix q(n, n);
  for (Index i = 0; i < n; ++i) q.row(i) = w;
  return OperatorMatrix(std::move(q));
}

MappedThinFilmGrid mapped_thinfilm_grid(Index n, double beta) {
  if (!(beta > 0.0 && beta < 1.0)) {
    throw DomainError("mapped_thinfilm_grid: beta must lie in (0, 1)");
  }
  Grid1D base = chebyshev(n);
  MappedThinFilmGrid g;
  g.beta = beta;
  g.alpha = std::atanh(beta);
  g.y = base.points;
  g.w = base.w;
  g.x.resize(n);
  g.gamma.resize(n);
  for (Index i = 0; i < n; ++i) {
    g.x(i) = std::tanh(g.alpha * g.y(i)) / beta;
    const double ch = std::cosh(g.alpha * g.y(i));
    g.gamma(i) = beta / g.alpha * ch * ch;
  }
  g.x(0) = 1.0;
  g.x(n - 1) = -1.0;
  OperatorMatrix mapped_d = scale_rows(g.gamma, base.d);  // d/dx on the y grid
  g.l_mapped = matmul(mapped_d, mapped_d);
  g.d = std::move(base.d);
  return g;
}

PolarGrid polar_grid(Index n_t) {
  if (n_t < 2) throw DimensionError("polar_grid: need at least 2 angles");
  PolarGrid g;
  g.theta.resize(n_t);
  for (Index k = 0; k < n_t; ++k) {
    g.theta(k) = (2.0 * static_cast<double>(k + 1) - 1.0) * kPi / (2.0 * n_t);
  }
  DenseMatrix d(n_t, n_t);
  for (Index i = 0; i < n_t; ++i) {
    const double sin_nti = std::sin(static_cast<double>(n_t) * g.theta(i));
    for (Index j = 0; j < n_t; ++j) {
      if (i == j) {
        d(i, i) = -0.5 / std::tan(g.theta(i));
      } else {
        const double sign = (j % 2 == 0) ? 1.0 : -1.0;  // (-1)^(j+1), 1-based j
        d(i, j) = sign * sin_nti * std::sin(g.theta(j)) /
                  (std::cos(g.theta(j)) - std::cos(g.theta(i)));
      }
    }
  }
  g.d = OperatorMatrix(std::move(d));
  return g;
}

RadialGrid rational_radial_grid(Index n, double l_r) {
  if (n < 2) throw DimensionError("rational_radial_grid: need at least 2 points");
  if (!(l_r > 0.0)) throw DomainError("rational_radial_grid: l_r must be positive");
  Grid1D base = chebyshev(n);
  RadialGrid g;
  g.y = base.points;
  g.r.resize(n);
  g.one_over_r.resize(n);
  for (Index i = 0; i < n; ++i) {
    if (i == 0) {
      g.r(i) = std::numeric_limits<double>::infinity();
      g.one_over_r(i) = 0.0;  // analytic limit; the row is removed by restriction
    } else {
      g.r(i) = l_r * (1.0 + g.y(i)) / (1.0 - g.y(i)) + 1.0;
      g.one_over_r(i) = 1.0 / g.r(i);
    }
  }
  GridFunction factor(n);
  for (Index i = 0; i < n; ++i) {
    const double omy = 1.0 - g.y(i);
    factor(i) = 0.5 / l_r * omy * omy;
  }
  g.d = scale_rows(factor, base.d);
  return g;
}

Eigen::VectorXd chebyshev_coefficients(const GridFunction& u) {
  const Index n = u.size();
  if (n < 2) throw DimensionError("chebyshev_coefficients: need at least 2 samples");
  const Index m = n - 1;
  Eigen::VectorXd a(n);
  for (Index k = 0; k < n; ++k) {
    double s = u(0) + ((k % 2 == 0) ? u(m) : -u(m));
    for (Index j = 1; j < m; ++j) {
      s += 2.0 * u(j) * std::cos(kPi * static_cast<double>(k) * j / m);
    }
    a(k) = std::abs(s);
  }
  return a;
}

Eigen::VectorXd chebyshev_interpolate(const Eigen::VectorXd& points,
                                      const GridFunction& values,
                                      const Eigen::VectorXd& query) {
  const Index n = points.size();
  if (values.size() != n) throw DimensionError("chebyshev_interpolate: length mismatch");
  // Gauss-Lobatto barycentric weights: (-1)^j, halved at the ends.
  Eigen::VectorXd bw(n);
  for (Index j = 0; j < n; ++j) {
    bw(j) = (j % 2 == 0) ? 1.0 : -1.0;
    if (j == 0 || j == n - 1) bw(j) *= 0.5;
  }
  Eigen::VectorXd out(query.size());
  for (Index q = 0; q < query.size(); ++q) {
    double num = 0.0, den = 0.0;
    bool exact = false;
    for (Index j = 0; j < n && !exact; ++j) {
      const double dx = query(q) - points(j);
      if (dx == 0.0) {
        out(q) = values(j);
        exact = true;
      } else {
        const double t = bw(j) / dx;
        num += t * values(j);
        den += t;
      }
    }
    if (!exact) out(q) = num / den;
  }
  return out;
}

}  // namespace opjac
