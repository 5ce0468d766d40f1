#pragma once

#include <memory>

#include "opjac/expr.hpp"
#include "opjac/grids.hpp"
#include "opjac/newton.hpp"

namespace opjac::problems {

struct PnpConfig {
  Index n = 32;
  double epsilon = 1.0;
  double dt = 0.05;
  // Dirichlet data; index 0 is x = +1 (first grid point), 1 is x = -1.
  double phi_bc[2] = {1.0, -1.0};
  double c_plus_bc[2] = {1.0, 1.0};
  double c_minus_bc[2] = {1.0, 1.0};
};

/// One backward-Euler step of the 1D Poisson-Nernst-Planck system. The
/// unknowns are the new-time concentrations stacked [c+; c-]; the potential
/// is an auxiliary variable eliminated through the (linear) Poisson
/// equation, so the Jacobian needs a single interior factorization rather
/// than one Poisson solve per perturbed column.
class PnpProblem final : public ProblemDef {
 public:
  PnpProblem(PnpConfig cfg, std::shared_ptr<const Grid1D> grid,
             GridFunction prev_plus, GridFunction prev_minus);

  std::string name() const override { return "pnp1d"; }
  GridFunction residual(const GridFunction& u) const override;
  OperatorMatrix jacobian(const GridFunction& u) const override;

  /// Solves the interior Poisson equation for the potential at this iterate
  /// (Dirichlet rows imposed).
  GridFunction potential(const GridFunction& u) const;

  const Grid1D& grid() const { return *grid_; }
  const PnpConfig& config() const { return cfg_; }
  /// Zero-padded interior inverse (D^2)_int^{-1}; dphi/dc+- = -+(1/eps) times it.
  const DenseMatrix& padded_interior_inverse() const { return pad_inv_; }

 private:
  PnpConfig cfg_;
  std::shared_ptr<const Grid1D> grid_;
  GridFunction prev_plus_, prev_minus_;
  OperatorMatrix lap_;                         // D^2
  std::unique_ptr<LinearFactorization> poisson_;  // (D^2)_int, factored once
  GridFunction bdry_rhs_;  // -(D^2)_{int,bdry} * phi_bdry, fixed per config
  DenseMatrix pad_inv_;    // zero-padded (D^2)_int^{-1}
  DenseMatrix d_pad_inv_;  // D * pad_inv_, shared across Jacobian evaluations
  Expr res_p_expr_, res_m_expr_;  // over variables cp, cm, dphi
};

ProblemFamily pnp1d_family(PnpConfig cfg, std::shared_ptr<const Grid1D> grid,
                           GridFunction prev_plus, GridFunction prev_minus);

}  // namespace opjac::problems
