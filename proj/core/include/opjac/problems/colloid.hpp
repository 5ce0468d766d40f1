#pragma once

#include <memory>

#include "opjac/expr.hpp"
#include "opjac/newton.hpp"
#include "opjac/spherical.hpp"

namespace opjac::problems {

struct ColloidConfig {
  Index n_r = 30;  // finite radial points per line
  Index n_t = 30;
  double l_r = 0.5;
  double e_applied = 10.0;  // applied-field strength; the continuation parameter
  double v = 0.0;           // colloid potential
  double epsilon = 0.01;
  double delta = 1.0;  // Stern capacitance parameter
  double c_infinity = 1.0;
};

struct ZetaTols {
  double res_tol = 1e-9;
  double delta_tol = 1e-13;
  int max_iters = 20;
};

/// Component-wise Newton solve of zeta + 2*delta*sqrt(c)*sinh(zeta/2) = Psi,
/// initialized at zeta = Psi.
GridFunction zeta_solve(const GridFunction& psi_drive, const GridFunction& c_s,
                        double delta, const ZetaTols& tols = {});

/// Implicit-function derivatives of the Stern closure; both component-wise.
struct ZetaSensitivities {
  GridFunction dpsi_s;  // dzeta/dpsi_s = -1/(1 + delta*sqrt(c)*cosh(zeta/2))
  GridFunction dc_s;
};

ZetaSensitivities zeta_sensitivities(const GridFunction& zeta, const GridFunction& c_s,
                                     double delta);

struct ColloidState {
  GridFunction c_f, psi_f;
  GridFunction c_s, psi_s, phi_s;  // surface slices; phi_s = psi_s - E*cos(theta)
  GridFunction zeta, q, w;         // double-layer quantities
};

/// Double-layer charging of a metal colloid sphere: Laplace bulk equations
/// for concentration and potential deviation, surface-conservation boundary
/// conditions closed by the Stern condition. Unknowns are c and psi at
/// finite grid points, stacked [c_f; psi_f]; residual rows are stacked
/// [F1; F2; H1; H2].
class ColloidProblem final : public ProblemDef {
 public:
  ColloidProblem(ColloidConfig cfg, std::shared_ptr<const SphericalOperators> ops);

  std::string name() const override { return "colloid"; }
  GridFunction residual(const GridFunction& u) const override;
  OperatorMatrix jacobian(const GridFunction& u) const override;

  /// Slices the stacked state and runs the inner zeta solve. Throws
  /// DomainError on non-positive surface concentration.
  ColloidState unpack(const GridFunction& u) const;

  static GridFunction quiescent(const SphericalOperators& ops);

  const SphericalOperators& ops() const { return *ops_; }
  const ColloidConfig& config() const { return cfg_; }

 private:
  ColloidConfig cfg_;
  std::shared_ptr<const SphericalOperators> ops_;
  GridFunction f1_const_, f2_const_, h2_const_;
  Expr f1_expr_, f2_expr_;  // bulk rows over variables c and psi
};

ProblemFamily colloid_family(ColloidConfig cfg,
                             std::shared_ptr<const SphericalOperators> ops);

}  // namespace opjac::problems
