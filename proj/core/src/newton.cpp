#include "opjac/newton.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <ostream>

#include <nlohmann/json.hpp>

namespace opjac {

namespace {
double inf_norm(const GridFunction& v) {
  return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff();
}
}  // namespace

NewtonResult newton_solve(const ProblemDef& problem, const GridFunction& u0,
                          const NewtonConfig& cfg) {
  if (cfg.res_tol <= 0.0 || cfg.max_iters < 1) {
    throw Error("newton_solve: invalid configuration");
  }
  const auto t0 = std::chrono::steady_clock::now();

  NewtonResult out;
  out.solution = u0;
  GridFunction res = problem.residual(out.solution);
  if (!all_finite(res)) throw Error("newton_solve: non-finite residual at start");
  double res_norm = inf_norm(res);
  out.report.residual_history.push_back(res_norm);

  double step_norm = std::numeric_limits<double>::infinity();
  while (res_norm > cfg.res_tol && out.report.iterations < cfg.max_iters &&
         step_norm > cfg.delta_tol) {
    OperatorMatrix jac = problem.jacobian(out.solution);
    GridFunction delta = solve_linear(jac, GridFunction(-res));
    out.solution += delta;
    step_norm = inf_norm(delta);
    out.report.step_norm_history.push_back(step_norm);

    res = problem.residual(out.solution);
    if (!all_finite(res)) {
      throw Error("newton_solve: non-finite residual at iteration " +
                  std::to_string(out.report.iterations + 1));
    }
    res_norm = inf_norm(res);
    out.report.residual_history.push_back(res_norm);
    ++out.report.iterations;
  }

  out.report.converged = res_norm <= cfg.res_tol;
  out.report.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

ContinuationResult continuation_solve(const ProblemFamily& family,
                                      const ContinuationSchedule& schedule,
                                      const GridFunction& u0,
                                      const NewtonConfig& cfg) {
  if (!(schedule.step > 0.0) && schedule.start != schedule.target) {
    throw Error("continuation_solve: step must be positive");
  }
  const double dir = (schedule.target >= schedule.start) ? 1.0 : -1.0;

  ContinuationResult out;
  out.solution = u0;
  out.param_reached = schedule.start;

  double param = schedule.start;
  while (true) {
    auto problem = family(param);
    ContinuationStage stage;
    stage.param = param;
    try {
      NewtonResult r = newton_solve(*problem, out.solution, cfg);
      stage.report = r.report;
      out.stages.push_back(stage);
      if (!r.report.converged) {
        out.converged = false;
        out.failure = "stage at parameter " + std::to_string(param) +
                      " did not converge";
        return out;
      }
      out.solution = std::move(r.solution);
      out.param_reached = param;
    } catch (const Error& e) {
      out.stages.push_back(stage);
      out.converged = false;
      out.failure = "stage at parameter " + std::to_string(param) + ": " + e.what();
      return out;
    }

    if (param == schedule.target) break;
    double next = param + dir * schedule.step;
    // clamp the final step so the last stage lands exactly on target
    if (dir * (schedule.target - next) <= 0.0) next = schedule.target;
    param = next;
  }
  out.converged = true;
  return out;
}

void write_report_jsonl(const NewtonReport& report, std::ostream& os) {
  for (size_t i = 0; i < report.residual_history.size(); ++i) {
    nlohmann::json rec;
    rec["iteration"] = i;
    rec["residual_inf"] = report.residual_history[i];
    if (i > 0 && i - 1 < report.step_norm_history.size()) {
      rec["step_inf"] = report.step_norm_history[i - 1];
    }
    os << rec.dump() << '\n';
  }
}

}  // namespace opjac
