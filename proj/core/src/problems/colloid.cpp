#include "opjac/problems/colloid.hpp"

#include <cmath>

namespace opjac::problems {

GridFunction zeta_solve(const GridFunction& psi_drive, const GridFunction& c_s,
                        double delta, const ZetaTols& tols) {
  if (psi_drive.size() != c_s.size()) {
    throw DimensionError("zeta_solve: length mismatch");
  }
  GridFunction zeta(psi_drive.size());
  for (Index k = 0; k < psi_drive.size(); ++k) {
    const double psi = psi_drive(k);
    const double a = delta * std::sqrt(c_s(k));
    double z = psi;
    double res = z + 2.0 * a * std::sinh(0.5 * z) - psi;
    bool done = std::abs(res) <= tols.res_tol;
    for (int it = 0; it < tols.max_iters && !done; ++it) {
      const double step = -res / (1.0 + a * std::cosh(0.5 * z));
      z += step;
      res = z + 2.0 * a * std::sinh(0.5 * z) - psi;
      done = std::abs(res) <= tols.res_tol || std::abs(step) <= tols.delta_tol;
    }
    if (!done) {
      throw ConvergenceError("zeta_solve: component " + std::to_string(k) +
                             " did not converge (residual " + std::to_string(res) + ")");
    }
    zeta(k) = z;
  }
  return zeta;
}

ZetaSensitivities zeta_sensitivities(const GridFunction& zeta, const GridFunction& c_s,
                                     double delta) {
  if (zeta.size() != c_s.size()) {
    throw DimensionError("zeta_sensitivities: length mismatch");
  }
  ZetaSensitivities s;
  s.dpsi_s.resize(zeta.size());
  s.dc_s.resize(zeta.size());
  for (Index k = 0; k < zeta.size(); ++k) {
    if (!(c_s(k) > 0.0)) {
      throw DomainError("zeta_sensitivities: non-positive surface concentration");
    }
    const double sq = std::sqrt(c_s(k));
    const double denom = 1.0 + delta * sq * std::cosh(0.5 * zeta(k));
    s.dpsi_s(k) = -1.0 / denom;
    s.dc_s(k) = -delta * std::sinh(0.5 * zeta(k)) / (sq * denom);
  }
  return s;
}

ColloidProblem::ColloidProblem(ColloidConfig cfg,
                               std::shared_ptr<const SphericalOperators> ops)
    : cfg_(cfg), ops_(std::move(ops)) {
  if (ops_->n_r != cfg_.n_r || ops_->n_t != cfg_.n_t) {
    throw DimensionError("colloid: operator bundle does not match the config");
  }
  if (!(cfg_.epsilon > 0.0) || cfg_.delta < 0.0 || !(cfg_.c_infinity > 0.0)) {
    throw DomainError("colloid: invalid physical parameters");
  }
  const SphericalOperators& s = *ops_;
  const double e = cfg_.e_applied;
  const GridFunction ones_t = GridFunction::Ones(s.n_t);

  f1_const_ = cfg_.c_infinity * (s.lap_inf * ones_t);
  f2_const_ = e * cfg_.c_infinity *
              (-(s.div_r_inf * s.cos_theta) + s.div_theta_inf * s.sin_theta);
  h2_const_ = -cfg_.c_infinity * (s.g_n_inf * ones_t);

  f1_expr_ = Expr::matvec(s.lap_f, Expr::var("c"), "Lf") + Expr::constant(f1_const_);
  Expr radial_flux = Expr::hadamard(
      Expr::var("c"),
      Expr::affine_shift(Expr::matvec(s.grad_r_f, Expr::var("psi"), "Grf"),
                         GridFunction(-e * s.cos_theta_full)));
  Expr angular_flux = Expr::hadamard(
      Expr::var("c"),
      Expr::affine_shift(Expr::matvec(s.grad_theta_f, Expr::var("psi"), "Gtf"),
                         GridFunction(e * s.sin_theta_full)));
  f2_expr_ = Expr::lincomb({{1.0, Expr::matvec(s.div_r_f, radial_flux, "Drf")},
                            {1.0, Expr::matvec(s.div_theta_f, angular_flux, "Dtf")},
                            {1.0, Expr::constant(f2_const_)}});
}

GridFunction ColloidProblem::quiescent(const SphericalOperators& ops) {
  GridFunction u = GridFunction::Zero(2 * ops.finite_size());
  u.head(ops.finite_size()).setOnes();
  return u;
}

ColloidState ColloidProblem::unpack(const GridFunction& u) const {
  const SphericalOperators& s = *ops_;
  const Index nf = s.finite_size();
  if (u.size() != 2 * nf) throw DimensionError("colloid: state length mismatch");

  ColloidState st;
  st.c_f = u.head(nf);
  st.psi_f = u.tail(nf);
  st.c_s.resize(s.n_t);
  st.psi_s.resize(s.n_t);
  for (Index k = 0; k < s.n_t; ++k) {
    st.c_s(k) = st.c_f(s.surface_in_finite[static_cast<size_t>(k)]);
    st.psi_s(k) = st.psi_f(s.surface_in_finite[static_cast<size_t>(k)]);
  }
  for (Index k = 0; k < s.n_t; ++k) {
    if (!(st.c_s(k) > 0.0)) {
      throw DomainError("colloid: non-positive surface concentration at angle index " +
                        std::to_string(k) + " (c_s = " + std::to_string(st.c_s(k)) +
                        "); reduce the continuation step");
    }
  }
  st.phi_s = st.psi_s - cfg_.e_applied * s.cos_theta;
  st.zeta = zeta_solve(GridFunction((cfg_.v - st.phi_s.array()).matrix()), st.c_s,
                       cfg_.delta);
  st.q = (-2.0 * st.c_s.array().sqrt() * (0.5 * st.zeta.array()).sinh()).matrix();
  st.w = (4.0 * st.c_s.array().sqrt() * (0.25 * st.zeta.array()).sinh().square()).matrix();
  return st;
}

GridFunction ColloidProblem::residual(const GridFunction& u) const {
  const SphericalOperators& s = *ops_;
  const ColloidState st = unpack(u);
  const double e = cfg_.e_applied;
  const double eps = cfg_.epsilon;

  Environment env{{"c", st.c_f}, {"psi", st.psi_f}};
  const GridFunction f1 = f1_expr_.evaluate(env);
  const GridFunction f2 = f2_expr_.evaluate(env);

  const GridFunction log_cs = st.c_s.array().log().matrix();
  const GridFunction gs_logc = s.g_s * log_cs;
  const GridFunction gs_phi = s.g_s * st.phi_s;
  const GridFunction gn_psi = s.g_n_f * st.psi_f;

  const GridFunction h1 =
      eps * (s.d_s * GridFunction(st.q.cwiseProduct(gs_logc) +
                                  st.w.cwiseProduct(gs_phi))) -
      (st.c_s.array() * (gn_psi.array() + e * s.cos_theta.array())).matrix();
  const GridFunction h2 =
      eps * (s.d_s * GridFunction(st.w.cwiseProduct(gs_logc) +
                                  st.q.cwiseProduct(gs_phi))) -
      (s.g_n_f * st.c_f) + h2_const_;

  GridFunction res(2 * s.finite_size());
  const Index ni = s.interior_size();
  res.segment(0, ni) = f1;
  res.segment(ni, ni) = f2;
  res.segment(2 * ni, s.n_t) = h1;
  res.segment(2 * ni + s.n_t, s.n_t) = h2;
  return res;
}

OperatorMatrix ColloidProblem::jacobian(const GridFunction& u) const {
  const SphericalOperators& s = *ops_;
  const ColloidState st = unpack(u);
  const double e = cfg_.e_applied;
  const double eps = cfg_.epsilon;

  Environment env{{"c", st.c_f}, {"psi", st.psi_f}};
  auto bulk = jacobian_blocks({f1_expr_, f2_expr_}, {"c", "psi"}, env);

  const ZetaSensitivities sens = zeta_sensitivities(st.zeta, st.c_s, cfg_.delta);
  const Eigen::ArrayXd sq = st.c_s.array().sqrt();
  const Eigen::ArrayXd ch = (0.5 * st.zeta.array()).cosh();
  const Eigen::ArrayXd sh = (0.5 * st.zeta.array()).sinh();
  const Eigen::ArrayXd gs_logc = (s.g_s * GridFunction(st.c_s.array().log())).array();
  const Eigen::ArrayXd gs_phi = (s.g_s * st.phi_s).array();
  const Eigen::ArrayXd gn_psi = (s.g_n_f * st.psi_f).array();
  const Eigen::ArrayXd inv_cs = st.c_s.array().inverse();

  // dH1/dc_s and dH2/dc_s (surface columns, expanded to full width below)
  const GridFunction h1_c_diag =
      (0.5 * st.q.array() * inv_cs * gs_logc - sq * ch * sens.dc_s.array() * gs_logc +
       0.5 * st.w.array() * inv_cs * gs_phi + sq * sh * sens.dc_s.array() * gs_phi)
          .matrix();
  const GridFunction h2_c_diag =
      (0.5 * st.w.array() * inv_cs * gs_logc + sq * sh * sens.dc_s.array() * gs_logc +
       0.5 * st.q.array() * inv_cs * gs_phi - sq * ch * sens.dc_s.array() * gs_phi)
          .matrix();
  const GridFunction h1_psi_diag =
      (-sq * ch * sens.dpsi_s.array() * gs_logc + sq * sh * sens.dpsi_s.array() * gs_phi)
          .matrix();
  const GridFunction h2_psi_diag =
      (sq * sh * sens.dpsi_s.array() * gs_logc - sq * ch * sens.dpsi_s.array() * gs_phi)
          .matrix();

  const OperatorMatrix gs_over_c = scale_cols(s.g_s, GridFunction(inv_cs.matrix()));

  OperatorMatrix h1_c_surf =
      eps * matmul(s.d_s, diag(h1_c_diag) + scale_rows(st.q, gs_over_c)) -
      diag(GridFunction((gn_psi + e * s.cos_theta.array()).matrix()));
  OperatorMatrix h2_c_surf =
      eps * matmul(s.d_s, diag(h2_c_diag) + scale_rows(st.w, gs_over_c));
  OperatorMatrix h1_psi_surf =
      eps * matmul(s.d_s, diag(h1_psi_diag) + scale_rows(st.w, s.g_s));
  OperatorMatrix h2_psi_surf =
      eps * matmul(s.d_s, diag(h2_psi_diag) + scale_rows(st.q, s.g_s));

  OperatorMatrix dh1_dc = matmul(h1_c_surf, s.r_surface);
  OperatorMatrix dh2_dc = matmul(h2_c_surf, s.r_surface) - s.g_n_f;
  OperatorMatrix dh1_dpsi =
      matmul(h1_psi_surf, s.r_surface) - scale_rows(st.c_s, s.g_n_f);
  OperatorMatrix dh2_dpsi = matmul(h2_psi_surf, s.r_surface);

  return block_assemble({{bulk[0][0], bulk[0][1]},
                         {bulk[1][0], bulk[1][1]},
                         {dh1_dc, dh1_dpsi},
                         {dh2_dc, dh2_dpsi}});
}

ProblemFamily colloid_family(ColloidConfig cfg,
                             std::shared_ptr<const SphericalOperators> ops) {
  return [cfg, ops](double e_applied) {
    ColloidConfig c = cfg;
    c.e_applied = e_applied;
    return std::make_shared<const ColloidProblem>(c, ops);
  };
}

}  // namespace opjac::problems
