#include "opjac/problems/pnp1d.hpp"

namespace opjac::problems {

PnpProblem::PnpProblem(PnpConfig cfg, std::shared_ptr<const Grid1D> grid,
                       GridFunction prev_plus, GridFunction prev_minus)
    : cfg_(cfg),
      grid_(std::move(grid)),
      prev_plus_(std::move(prev_plus)),
      prev_minus_(std::move(prev_minus)) {
  const Index n = cfg_.n;
  if (grid_->size() != n) throw DimensionError("pnp1d: grid size mismatch");
  if (prev_plus_.size() != n || prev_minus_.size() != n) {
    throw DimensionError("pnp1d: previous-state length mismatch");
  }
  if (!(cfg_.dt > 0.0)) throw DomainError("pnp1d: dt must be positive");
  if (!(cfg_.epsilon > 0.0)) throw DomainError("pnp1d: epsilon must be positive");

  lap_ = matmul(grid_->d, grid_->d);
  const DenseMatrix& l = lap_.dense();
  const Index ni = n - 2;
  const DenseMatrix l_int = l.block(1, 1, ni, ni);
  // Chebyshev D^2 with Dirichlet rows removed is nonsingular; the
  // factorization would throw otherwise.
  poisson_ = std::make_unique<LinearFactorization>(OperatorMatrix(l_int));

  bdry_rhs_ = -(l.block(1, 0, ni, 1) * cfg_.phi_bc[0] +
                l.block(1, n - 1, ni, 1) * cfg_.phi_bc[1]);

  pad_inv_ = DenseMatrix::Zero(n, n);
  pad_inv_.block(1, 1, ni, ni) = poisson_->solve_dense(DenseMatrix::Identity(ni, ni));
  d_pad_inv_ = grid_->d.dense() * pad_inv_;

  Expr drift_p =
      Expr::matvec(grid_->d, Expr::hadamard(Expr::var("cp"), Expr::var("dphi")), "D");
  Expr drift_m =
      Expr::matvec(grid_->d, Expr::hadamard(Expr::var("cm"), Expr::var("dphi")), "D");
  res_p_expr_ = Expr::lincomb({{1.0, Expr::var("cp")},
                               {-cfg_.dt, Expr::matvec(lap_, Expr::var("cp"), "D2")},
                               {-cfg_.dt, drift_p},
                               {-1.0, Expr::constant(prev_plus_)}});
  res_m_expr_ = Expr::lincomb({{1.0, Expr::var("cm")},
                               {-cfg_.dt, Expr::matvec(lap_, Expr::var("cm"), "D2")},
                               {cfg_.dt, drift_m},
                               {-1.0, Expr::constant(prev_minus_)}});
}

GridFunction PnpProblem::potential(const GridFunction& u) const {
  const Index n = cfg_.n;
  if (u.size() != 2 * n) throw DimensionError("pnp1d: state length mismatch");
  const GridFunction charge = u.head(n) - u.tail(n);
  const GridFunction rhs =
      bdry_rhs_ - (1.0 / cfg_.epsilon) * charge.segment(1, n - 2);
  GridFunction phi(n);
  phi(0) = cfg_.phi_bc[0];
  phi(n - 1) = cfg_.phi_bc[1];
  phi.segment(1, n - 2) = poisson_->solve(rhs);
  return phi;
}

GridFunction PnpProblem::residual(const GridFunction& u) const {
  const Index n = cfg_.n;
  const GridFunction phi = potential(u);
  const GridFunction c_p = u.head(n);
  const GridFunction c_m = u.tail(n);
  const GridFunction dphi = grid_->d * phi;

  Environment env{{"cp", c_p}, {"cm", c_m}, {"dphi", dphi}};
  GridFunction rp = res_p_expr_.evaluate(env);
  GridFunction rm = res_m_expr_.evaluate(env);
  rp(0) = c_p(0) - cfg_.c_plus_bc[0];
  rp(n - 1) = c_p(n - 1) - cfg_.c_plus_bc[1];
  rm(0) = c_m(0) - cfg_.c_minus_bc[0];
  rm(n - 1) = c_m(n - 1) - cfg_.c_minus_bc[1];

  GridFunction res(2 * n);
  res.head(n) = rp;
  res.tail(n) = rm;
  return res;
}

OperatorMatrix PnpProblem::jacobian(const GridFunction& u) const {
  const Index n = cfg_.n;
  if (u.size() != 2 * n) throw DimensionError("pnp1d: state length mismatch");
  const GridFunction c_p = u.head(n);
  const GridFunction c_m = u.tail(n);
  const GridFunction dphi = grid_->d * potential(u);
  const DenseMatrix& d = grid_->d.dense();
  const double dt = cfg_.dt;
  const double inv_eps = 1.0 / cfg_.epsilon;

  // D*diag(c)*D*M with M the padded interior inverse; dphi/dc+- = -+(1/eps)*M
  const DenseMatrix coupling_p = scale_cols(grid_->d, c_p).dense() * d_pad_inv_;
  const DenseMatrix coupling_m = scale_cols(grid_->d, c_m).dense() * d_pad_inv_;

  const DenseMatrix transport = lap_.dense() + scale_cols(grid_->d, dphi).dense();
  DenseMatrix j_pp = DenseMatrix::Identity(n, n) - dt * transport +
                     dt * inv_eps * coupling_p;
  DenseMatrix j_pm = -dt * inv_eps * coupling_p;
  DenseMatrix j_mm = DenseMatrix::Identity(n, n) - dt * lap_.dense() +
                     dt * scale_cols(grid_->d, dphi).dense() +
                     dt * inv_eps * coupling_m;
  DenseMatrix j_mp = -dt * inv_eps * coupling_m;

  // Dirichlet rows
  for (Index r : {Index(0), n - 1}) {
    j_pp.row(r).setZero();
    j_pp(r, r) = 1.0;
    j_pm.row(r).setZero();
    j_mm.row(r).setZero();
    j_mm(r, r) = 1.0;
    j_mp.row(r).setZero();
  }

  return block_assemble({{OperatorMatrix(j_pp), OperatorMatrix(j_pm)},
                         {OperatorMatrix(j_mp), OperatorMatrix(j_mm)}});
}

ProblemFamily pnp1d_family(PnpConfig cfg, std::shared_ptr<const Grid1D> grid,
                           GridFunction prev_plus, GridFunction prev_minus) {
  return [cfg, grid, prev_plus, prev_minus](double dt) {
    PnpConfig c = cfg;
    c.dt = dt;
    return std::make_shared<const PnpProblem>(c, grid, prev_plus, prev_minus);
  };
}

}  // namespace opjac::problems
