#pragma once

#include <functional>

#include "opjac/matrix.hpp"

namespace opjac {

using ResidualFn = std::function<GridFunction(const GridFunction&)>;

/// Column-wise finite-difference Jacobian configuration. The step for
/// column j is base_step * max(|u_j|, typical_scale).
struct FdConfig {
  enum class Scheme { Forward, Central };
  Scheme scheme = Scheme::Central;
  double base_step = 0.0;  // 0 selects sqrt(eps) forward / cbrt(eps) central
  double typical_scale = 1.0;

  double resolved_base_step() const;
};

/// Naive O(N) residual-evaluation finite-difference Jacobian: the
/// verification oracle and the baseline for the performance comparison.
/// Columns are evaluated sequentially. Central scheme error is O(h^2).
OperatorMatrix fd_jacobian(const ResidualFn& residual, const GridFunction& u,
                           const FdConfig& cfg = {});

}  // namespace opjac
