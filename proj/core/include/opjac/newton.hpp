#pragma once

#include <functional>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "opjac/matrix.hpp"

namespace opjac {

/// A named nonlinear system exposing its residual and analytical Jacobian
/// at a point. Implementations are stateless evaluators: repeated calls at
/// the same state return the same values.
class ProblemDef {
 public:
  virtual ~ProblemDef() = default;
  virtual std::string name() const = 0;
  virtual GridFunction residual(const GridFunction& u) const = 0;
  virtual OperatorMatrix jacobian(const GridFunction& u) const = 0;
};

struct NewtonConfig {
  double res_tol = 1e-8;  // infinity-norm residual tolerance
  int max_iters = 20;
  double delta_tol = 0.0;  // infinity-norm step tolerance; 0 disables
};

struct NewtonReport {
  int iterations = 0;
  std::vector<double> residual_history;   // includes the initial residual
  std::vector<double> step_norm_history;  // one entry per iteration
  bool converged = false;
  double wall_time_seconds = 0.0;
};

struct NewtonResult {
  GridFunction solution;
  NewtonReport report;
};

/// Full-step (undamped) Newton iteration: u <- u - J^{-1} F until
/// ||F||_inf <= res_tol, ||du||_inf <= delta_tol, or max_iters.
NewtonResult newton_solve(const ProblemDef& problem, const GridFunction& u0,
                          const NewtonConfig& cfg);

using ProblemFamily = std::function<std::shared_ptr<const ProblemDef>(double)>;

struct ContinuationSchedule {
  std::string param_name;
  double start = 0.0;
  double step = 0.0;  // positive; applied toward target
  double target = 0.0;
};

struct ContinuationStage {
  double param = 0.0;
  NewtonReport report;
};

struct ContinuationResult {
  GridFunction solution;
  std::vector<ContinuationStage> stages;
  bool converged = false;
  double param_reached = 0.0;
  std::string failure;  // diagnostic when a stage aborted
};

/// Fixed-step parameter continuation: solves at start, steps the parameter
/// by `step` (clamping the final step so the last stage lands exactly on
/// `target`), warm-starting each stage from the previous solution. Aborts
/// on the first stage failure and returns the partial stage list.
ContinuationResult continuation_solve(const ProblemFamily& family,
                                      const ContinuationSchedule& schedule,
                                      const GridFunction& u0,
                                      const NewtonConfig& cfg);

/// One JSON record per iteration (residual and step norms).
void write_report_jsonl(const NewtonReport& report, std::ostream& os);

}  // namespace opjac
