#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "opjac/fdjac.hpp"
#include "opjac/newton.hpp"

namespace opjac::problems {

/// Numeric flags forwarded from the CLI; absent keys fall back to each
/// problem's standard values.
using Options = std::map<std::string, double>;
double option_or(const Options& o, const std::string& key, double fallback);

struct JacobianBlockSpec {
  std::string name;
  Index row0 = 0, rows = 0, col0 = 0, cols = 0;
};

/// One analytical-vs-FD comparison point: a problem state plus the residual
/// and Jacobian evaluators to compare there.
struct VerifyCase {
  std::string label;
  GridFunction state;
  ResidualFn residual;
  std::function<OperatorMatrix(const GridFunction&)> jacobian;
  std::vector<JacobianBlockSpec> blocks;
};

struct BenchSetup {
  Index size = 0;
  GridFunction state;
  ResidualFn residual;  // baseline for the forward-FD timing
  std::function<OperatorMatrix()> direct;
};

struct ProblemHooks {
  std::string name;
  std::function<std::vector<VerifyCase>(const Options&)> verify_cases;
  std::function<BenchSetup(Index size, const Options&)> bench;
};

/// The problems registered for CLI dispatch: thinfilm, thinfilm-mapped,
/// colloid, pnp1d.
const std::vector<ProblemHooks>& registry();
const ProblemHooks* find_problem(const std::string& name);
std::vector<std::string> problem_names();

}  // namespace opjac::problems
