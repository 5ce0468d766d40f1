#include "opjac/problems/thinfilm.hpp"

#include <cmath>

namespace opjac::problems {

GridFunction thinfilm_initial(const ThinFilmConfig& cfg, const Eigen::VectorXd& x) {
  const double c0 = 1.0 - cfg.j;
  GridFunction e(x.size());
  for (Index i = 0; i < x.size(); ++i) {
    e(i) = -2.0 * cfg.j / (cfg.j * (x(i) + 1.0) + c0);
  }
  return e;
}

namespace {

Expr interior_expr(const OperatorMatrix& lap, const GridFunction& xp1, double eps,
                   double j, const Expr& field) {
  const Index n = xp1.size();
  const double eps2 = eps * eps;
  Expr c0_plus_jx = Expr::lincomb({{1.0, Expr::var("C0")},
                                   {1.0, Expr::constant(j * xp1)}});
  return Expr::lincomb({
      {eps2, Expr::matvec(lap, field, "D2")},
      {-0.5 * eps2, Expr::cwise(cw::ipow(3), field)},
      {-0.25, Expr::hadamard(c0_plus_jx, field)},
      {-0.25 * j, Expr::constant(GridFunction::Ones(n))},
  });
}

}  // namespace

ThinFilmProblem::ThinFilmProblem(ThinFilmConfig cfg, std::shared_ptr<const Grid1D> grid)
    : cfg_(cfg), grid_(std::move(grid)) {
  if (grid_->size() != cfg_.n) throw DimensionError("thinfilm: grid size mismatch");
  if (cfg_.n < 4) throw DimensionError("thinfilm: need at least 4 grid points");
  if (!(cfg_.epsilon > 0.0)) throw DomainError("thinfilm: epsilon must be positive");
  lap_ = matmul(grid_->d, grid_->d);
  xp1_ = grid_->points.array() + 1.0;
  interior_ = interior_expr(lap_, xp1_, cfg_.epsilon, cfg_.j, Expr::var("E"));
}

double ThinFilmProblem::c0(const GridFunction& e) const {
  const Index n = cfg_.n;
  const double eps2 = cfg_.epsilon * cfg_.epsilon;
  const double quad = grid_->w * e.array().square().matrix();
  return 1.0 - cfg_.j + eps2 * (2.0 * e(0) - 2.0 * e(n - 1) - quad);
}

RowVector ThinFilmProblem::dc0_de(const GridFunction& e) const {
  const Index n = cfg_.n;
  const double eps2 = cfg_.epsilon * cfg_.epsilon;
  RowVector d = -2.0 * eps2 * grid_->w.cwiseProduct(e.transpose());
  d(0) += 2.0 * eps2;
  d(n - 1) -= 2.0 * eps2;
  return d;
}

GridFunction ThinFilmProblem::residual(const GridFunction& e) const {
  const Index n = cfg_.n;
  if (e.size() != n) throw DimensionError("thinfilm residual: state length mismatch");
  const double eps2 = cfg_.epsilon * cfg_.epsilon;
  const double c0v = c0(e);

  Environment env{{"E", e}, {"C0", GridFunction::Constant(n, c0v)}};
  GridFunction res = interior_.evaluate(env);

  const RowVector d1 = grid_->d.row_dense(0);
  const RowVector dn = grid_->d.row_dense(n - 1);
  res(0) = -cfg_.k_c * (c0v + 2.0 * cfg_.j + eps2 * (2.0 * e(0) * e(0) + 4.0 * (d1 * e))) +
           cfg_.j_r - cfg_.j;
  res(n - 1) = cfg_.k_c * (c0v + eps2 * (2.0 * e(n - 1) * e(n - 1) + 4.0 * (dn * e))) -
               cfg_.j_r - cfg_.j;
  return res;
}

OperatorMatrix ThinFilmProblem::jacobian(const GridFunction& e) const {
  const Index n = cfg_.n;
  if (e.size() != n) throw DimensionError("thinfilm jacobian: state length mismatch");
  const double eps2 = cfg_.epsilon * cfg_.epsilon;
  const double c0v = c0(e);
  const RowVector dc0 = dc0_de(e);
  const DenseMatrix& d = grid_->d.dense();

  DenseMatrix jac = eps2 * lap_.dense();
  jac.diagonal() -= (1.5 * eps2 * e.array().square() +
                     0.25 * (c0v + cfg_.j * xp1_.array()))
                        .matrix();
  jac.noalias() -= 0.25 * e * dc0;

  jac.row(0) = -cfg_.k_c * (dc0 + 4.0 * eps2 * d.row(0));
  jac(0, 0) -= 4.0 * cfg_.k_c * eps2 * e(0);
  jac.row(n - 1) = cfg_.k_c * (dc0 + 4.0 * eps2 * d.row(n - 1));
  jac(n - 1, n - 1) += 4.0 * cfg_.k_c * eps2 * e(n - 1);
  return OperatorMatrix(std::move(jac));
}

ThinFilmState ThinFilmProblem::state(const GridFunction& e) const {
  const double eps2 = cfg_.epsilon * cfg_.epsilon;
  ThinFilmState s;
  s.e_hat = e;
  s.c0 = c0(e);
  s.c = (s.c0 + cfg_.j * xp1_.array() + 2.0 * eps2 * e.array().square()).matrix();
  s.rho = 4.0 * eps2 * (grid_->d * e);
  return s;
}

MappedThinFilmProblem::MappedThinFilmProblem(
    ThinFilmConfig cfg, std::shared_ptr<const MappedThinFilmGrid> grid)
    : cfg_(cfg), grid_(std::move(grid)) {
  if (grid_->size() != cfg_.n) throw DimensionError("thinfilm-mapped: grid size mismatch");
  if (!cfg_.beta || grid_->beta != *cfg_.beta) {
    throw DomainError("thinfilm-mapped: config beta must match the grid");
  }
  xp1_ = grid_->x.array() + 1.0;
  Expr phys = Expr::hadamard(Expr::constant(grid_->gamma), Expr::var("E"));
  interior_ = interior_expr(grid_->l_mapped, xp1_, cfg_.epsilon, cfg_.j, phys);
}

double MappedThinFilmProblem::c0(const GridFunction& e) const {
  const Index n = cfg_.n;
  const double eps2 = cfg_.epsilon * cfg_.epsilon;
  const GridFunction& g = grid_->gamma;
  const double quad = grid_->w * (g.array() * e.array().square()).matrix();
  return 1.0 - cfg_.j +
         eps2 * (2.0 * g(0) * e(0) - 2.0 * g(n - 1) * e(n - 1) - quad);
}

RowVector MappedThinFilmProblem::dc0_de(const GridFunction& e) const {
  const Index n = cfg_.n;
  const double eps2 = cfg_.epsilon * cfg_.epsilon;
  const GridFunction& g = grid_->gamma;
  RowVector d = -2.0 * eps2 *
                grid_->w.cwiseProduct((g.array() * e.array()).matrix().transpose());
  d(0) += 2.0 * eps2 * g(0);
  d(n - 1) -= 2.0 * eps2 * g(n - 1);
  return d;
}

GridFunction MappedThinFilmProblem::residual(const GridFunction& e) const {
  const Index n = cfg_.n;
  if (e.size() != n) throw DimensionError("thinfilm-mapped residual: length mismatch");
  const double eps2 = cfg_.epsilon * cfg_.epsilon;
  const GridFunction& g = grid_->gamma;
  const double c0v = c0(e);

  Environment env{{"E", e}, {"C0", GridFunction::Constant(n, c0v)}};
  GridFunction res = interior_.evaluate(env);

  const GridFunction ge = g.cwiseProduct(e);
  const RowVector d1 = grid_->d.row_dense(0);
  const RowVector dn = grid_->d.row_dense(n - 1);
  res(0) = -cfg_.k_c * (c0v + 2.0 * cfg_.j +
                        eps2 * (2.0 * g(0) * g(0) * e(0) * e(0) +
                                4.0 * g(0) * (d1 * ge))) +
           cfg_.j_r - cfg_.j;
  res(n - 1) = cfg_.k_c * (c0v + eps2 * (2.0 * g(n - 1) * g(n - 1) * e(n - 1) * e(n - 1) +
                                         4.0 * g(n - 1) * (dn * ge))) -
               cfg_.j_r - cfg_.j;
  return res;
}

OperatorMatrix MappedThinFilmProblem::jacobian(const GridFunction& e) const {
  const Index n = cfg_.n;
  if (e.size() != n) throw DimensionError("thinfilm-mapped jacobian: length mismatch");
  const double eps2 = cfg_.epsilon * cfg_.epsilon;
  const GridFunction& g = grid_->gamma;
  const double c0v = c0(e);
  const RowVector dc0 = dc0_de(e);
  const DenseMatrix& d = grid_->d.dense();
  const GridFunction ge = g.cwiseProduct(e);

  DenseMatrix jac = eps2 * scale_cols(grid_->l_mapped, g).dense();
  jac.diagonal() -= (1.5 * eps2 * g.array().cube() * e.array().square() +
                     0.25 * g.array() * (c0v + cfg_.j * xp1_.array()))
                        .matrix();
  jac.noalias() -= 0.25 * ge * dc0;

  jac.row(0) = -cfg_.k_c *
               (dc0 + 4.0 * eps2 * g(0) * d.row(0).cwiseProduct(g.transpose()));
  jac(0, 0) -= 4.0 * cfg_.k_c * eps2 * g(0) * g(0) * e(0);
  jac.row(n - 1) = cfg_.k_c * (dc0 + 4.0 * eps2 * g(n - 1) *
                                         d.row(n - 1).cwiseProduct(g.transpose()));
  jac(n - 1, n - 1) += 4.0 * cfg_.k_c * eps2 * g(n - 1) * g(n - 1) * e(n - 1);
  return OperatorMatrix(std::move(jac));
}

GridFunction MappedThinFilmProblem::physical_field(const GridFunction& e) const {
  return grid_->gamma.cwiseProduct(e);
}

ProblemFamily thinfilm_family(ThinFilmConfig cfg, std::shared_ptr<const Grid1D> grid) {
  return [cfg, grid](double j) {
    ThinFilmConfig c = cfg;
    c.j = j;
    return std::make_shared<const ThinFilmProblem>(c, grid);
  };
}

ProblemFamily thinfilm_mapped_family(ThinFilmConfig cfg,
                                     std::shared_ptr<const MappedThinFilmGrid> grid) {
  return [cfg, grid](double j) {
    ThinFilmConfig c = cfg;
    c.j = j;
    return std::make_shared<const MappedThinFilmProblem>(c, grid);
  };
}

}  // namespace opjac::problems
