#include "opjac/fdjac.hpp"

#include <cmath>
#include <limits>

namespace opjac {

double FdConfig::resolved_base_step() const {
  if (base_step > 0.0) return base_step;
  const double eps = std::numeric_limits<double>::epsilon();
  return scheme == Scheme::Forward ? std::sqrt(eps) : std::cbrt(eps);
}

OperatorMatrix fd_jacobian(const ResidualFn& residual, const GridFunction& u,
                           const FdConfig& cfg) {
  if (!all_finite(u)) throw DomainError("fd_jacobian: base point is not finite");
  const Index n = u.size();
  const double h0 = cfg.resolved_base_step();

  GridFunction f0;
  if (cfg.scheme == FdConfig::Scheme::Forward) {
    f0 = residual(u);
    if (!all_finite(f0)) {
      throw DomainError("fd_jacobian: residual not finite at the base point");
    }
  }
  const Index m = (cfg.scheme == FdConfig::Scheme::Forward)
                      ? f0.size()
                      : residual(u).size();

  DenseMatrix jac(m, n);
  GridFunction up = u;
  for (Index j = 0; j < n; ++j) {
    const double h = h0 * std::max(std::abs(u(j)), cfg.typical_scale);
    if (cfg.scheme == FdConfig::Scheme::Forward) {
      up(j) = u(j) + h;
      GridFunction fp = residual(up);
      up(j) = u(j);
      if (!all_finite(fp)) {
        throw DomainError("fd_jacobian: residual not finite at perturbed column " +
                          std::to_string(j));
      }
      jac.col(j) = (fp - f0) / h;
    } else {
      up(j) = u(j) + h;
      GridFunction fp = residual(up);
      up(j) = u(j) - h;
      GridFunction fm = residual(up);
      up(j) = u(j);
      if (!all_finite(fp) || !all_finite(fm)) {
        throw DomainError("fd_jacobian: residual not finite at perturbed column " +
                          std::to_string(j));
      }
      jac.col(j) = (fp - fm) / (2.0 * h);
    }
  }
  return OperatorMatrix(std::move(jac));
}

}  // namespace opjac
