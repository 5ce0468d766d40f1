#pragma once

#include <memory>
#include <optional>

#include "opjac/expr.hpp"
#include "opjac/grids.hpp"
#include "opjac/newton.hpp"

namespace opjac::problems {

struct ThinFilmConfig {
  Index n = 100;
  double epsilon = 0.01;
  double k_c = 10.0;
  double j_r = 10.0;
  double j = 1.5;  // current density; the continuation parameter
  std::optional<double> beta;  // boundary-layer mapping parameter, if mapped
};

/// Derived physical fields reported alongside the electric-field unknown.
struct ThinFilmState {
  GridFunction e_hat;
  double c0 = 0.0;
  GridFunction c;    // c0 + j(x+1) + 2 eps^2 E^2
  GridFunction rho;  // 4 eps^2 dE/dx
};

/// Leading-order asymptotic iterate E = -2j/(j(x+1) + (1-j)) used to start
/// the continuation.
GridFunction thinfilm_initial(const ThinFilmConfig& cfg, const Eigen::VectorXd& x);

/// Steady-state electrochemical thin film on the Chebyshev grid: interior
/// collocation rows of eps^2(D^2 E - E^3/2) - (C0 + j(x+1))E/4 - j/4 with
/// reaction-kinetics rows at both ends. The scalar c0 is computed once and
/// broadcast; the Jacobian's nonlocal quadrature coupling enters as a
/// rank-1 outer product, never as a matrix-matrix product.
class ThinFilmProblem final : public ProblemDef {
 public:
  ThinFilmProblem(ThinFilmConfig cfg, std::shared_ptr<const Grid1D> grid);

  std::string name() const override { return "thinfilm"; }
  GridFunction residual(const GridFunction& e) const override;
  OperatorMatrix jacobian(const GridFunction& e) const override;

  double c0(const GridFunction& e) const;
  RowVector dc0_de(const GridFunction& e) const;
  ThinFilmState state(const GridFunction& e) const;
  const Grid1D& grid() const { return *grid_; }
  const ThinFilmConfig& config() const { return cfg_; }
  const OperatorMatrix& lap() const { return lap_; }

 private:
  ThinFilmConfig cfg_;
  std::shared_ptr<const Grid1D> grid_;
  OperatorMatrix lap_;  // D^2, assembled once
  GridFunction xp1_;
  Expr interior_;  // residual expression over variables E and C0
};

/// Thin film under the variable transformation x = tanh(alpha*y)/beta.
/// The computational unknown is E(y); the physical field is gamma .* E.
class MappedThinFilmProblem final : public ProblemDef {
 public:
  MappedThinFilmProblem(ThinFilmConfig cfg,
                        std::shared_ptr<const MappedThinFilmGrid> grid);

  std::string name() const override { return "thinfilm-mapped"; }
  GridFunction residual(const GridFunction& e) const override;
  OperatorMatrix jacobian(const GridFunction& e) const override;

  double c0(const GridFunction& e) const;
  RowVector dc0_de(const GridFunction& e) const;
  GridFunction physical_field(const GridFunction& e) const;
  const MappedThinFilmGrid& grid() const { return *grid_; }
  const ThinFilmConfig& config() const { return cfg_; }

 private:
  ThinFilmConfig cfg_;
  std::shared_ptr<const MappedThinFilmGrid> grid_;
  GridFunction xp1_;
  Expr interior_;
};

ProblemFamily thinfilm_family(ThinFilmConfig cfg, std::shared_ptr<const Grid1D> grid);
ProblemFamily thinfilm_mapped_family(ThinFilmConfig cfg,
                                     std::shared_ptr<const MappedThinFilmGrid> grid);

}  // namespace opjac::problems
