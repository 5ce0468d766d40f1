#include "opjac/problems/registry.hpp"

#include <cmath>
#include <memory>

#include "opjac/problems/colloid.hpp"
#include "opjac/problems/pnp1d.hpp"
#include "opjac/problems/thinfilm.hpp"
#include "opjac/spherical.hpp"

namespace opjac::problems {

double option_or(const Options& o, const std::string& key, double fallback) {
  auto it = o.find(key);
  return it == o.end() ? fallback : it->second;
}

namespace {

GridFunction take_newton_steps(const ProblemDef& p, GridFunction u, int steps) {
  for (int k = 0; k < steps; ++k) {
    GridFunction res = p.residual(u);
    u += solve_linear(p.jacobian(u), GridFunction(-res));
  }
  return u;
}

template <typename Problem>
VerifyCase make_case(const std::string& label, std::shared_ptr<const Problem> prob,
                     GridFunction state, std::vector<JacobianBlockSpec> blocks) {
  VerifyCase c;
  c.label = label;
  c.state = std::move(state);
  c.residual = [prob](const GridFunction& u) { return prob->residual(u); };
  c.jacobian = [prob](const GridFunction& u) { return prob->jacobian(u); };
  c.blocks = std::move(blocks);
  return c;
}

std::vector<JacobianBlockSpec> thinfilm_blocks(Index n) {
  return {{"interior", 1, n - 2, 0, n},
          {"row-x1", 0, 1, 0, n},
          {"row-xN", n - 1, 1, 0, n}};
}

ThinFilmConfig thinfilm_config(const Options& o, bool mapped) {
  ThinFilmConfig cfg;
  cfg.n = static_cast<Index>(option_or(o, "n", 50));
  cfg.epsilon = option_or(o, "epsilon", 0.01);
  cfg.k_c = option_or(o, "kc", 10.0);
  cfg.j_r = option_or(o, "jr", 10.0);
  cfg.j = option_or(o, "j", 0.5);
  if (mapped) cfg.beta = option_or(o, "beta", 0.75);
  return cfg;
}

std::vector<VerifyCase> thinfilm_verify(const Options& o) {
  ThinFilmConfig cfg = thinfilm_config(o, false);
  auto grid = std::make_shared<const Grid1D>(chebyshev(cfg.n));
  auto prob = std::make_shared<const ThinFilmProblem>(cfg, grid);
  GridFunction e0 = thinfilm_initial(cfg, grid->points);
  GridFunction e1 = e0;
  for (Index i = 0; i < e1.size(); ++i) {
    e1(i) = e1(i) * (1.0 + 0.1 * std::cos(3.0 * grid->points(i))) - 0.05;
  }
  GridFunction e2 = take_newton_steps(*prob, e0, 2);
  auto blocks = thinfilm_blocks(cfg.n);
  return {make_case("initial-iterate", prob, e0, blocks),
          make_case("perturbed", prob, e1, blocks),
          make_case("after-2-newton-steps", prob, e2, blocks)};
}

std::vector<VerifyCase> thinfilm_mapped_verify(const Options& o) {
  ThinFilmConfig cfg = thinfilm_config(o, true);
  auto grid = std::make_shared<const MappedThinFilmGrid>(
      mapped_thinfilm_grid(cfg.n, *cfg.beta));
  auto prob = std::make_shared<const MappedThinFilmProblem>(cfg, grid);
  GridFunction e0 = thinfilm_initial(cfg, grid->x);
  GridFunction e1 = e0;
  for (Index i = 0; i < e1.size(); ++i) {
    e1(i) = e1(i) * (1.0 + 0.1 * std::cos(3.0 * grid->x(i))) - 0.05;
  }
  GridFunction e2 = take_newton_steps(*prob, e0, 2);
  auto blocks = thinfilm_blocks(cfg.n);
  return {make_case("initial-iterate", prob, e0, blocks),
          make_case("perturbed", prob, e1, blocks),
          make_case("after-2-newton-steps", prob, e2, blocks)};
}

ColloidConfig colloid_config(const Options& o) {
  ColloidConfig cfg;
  cfg.n_r = static_cast<Index>(option_or(o, "nr", 10));
  cfg.n_t = static_cast<Index>(option_or(o, "nt", 8));
  cfg.l_r = option_or(o, "lr", 0.5);
  cfg.e_applied = option_or(o, "efield", 1.0);
  cfg.v = option_or(o, "v", 0.0);
  cfg.epsilon = option_or(o, "epsilon", 0.01);
  cfg.delta = option_or(o, "delta", 1.0);
  return cfg;
}

std::vector<JacobianBlockSpec> colloid_blocks(const SphericalOperators& s) {
  const Index ni = s.interior_size();
  const Index nf = s.finite_size();
  std::vector<JacobianBlockSpec> b;
  const std::pair<std::string, std::pair<Index, Index>> rows[] = {
      {"F1", {0, ni}}, {"F2", {ni, ni}}, {"H1", {2 * ni, s.n_t}},
      {"H2", {2 * ni + s.n_t, s.n_t}}};
  for (const auto& [rname, rr] : rows) {
    b.push_back({"d" + rname + "/dc", rr.first, rr.second, 0, nf});
    b.push_back({"d" + rname + "/dpsi", rr.first, rr.second, nf, nf});
  }
  return b;
}

std::vector<VerifyCase> colloid_verify(const Options& o) {
  ColloidConfig cfg = colloid_config(o);
  auto ops = std::make_shared<const SphericalOperators>(
      spherical_operators(cfg.n_r, cfg.n_t, cfg.l_r));
  auto prob = std::make_shared<const ColloidProblem>(cfg, ops);
  const Index nf = ops->finite_size();

  GridFunction u0 = ColloidProblem::quiescent(*ops);
  GridFunction u1 = u0;
  for (Index i = 0; i < nf; ++i) {
    u1(i) += 0.05 * std::cos(0.37 * static_cast<double>(i));
    u1(nf + i) = 0.05 * std::sin(0.23 * static_cast<double>(i) + 0.5);
  }
  GridFunction u2 = take_newton_steps(*prob, u0, 1);
  auto blocks = colloid_blocks(*ops);
  return {make_case("quiescent", prob, u0, blocks),
          make_case("perturbed", prob, u1, blocks),
          make_case("after-1-newton-step", prob, u2, blocks)};
}

PnpConfig pnp_config(const Options& o) {
  PnpConfig cfg;
  cfg.n = static_cast<Index>(option_or(o, "n", 32));
  cfg.epsilon = option_or(o, "epsilon", 1.0);
  cfg.dt = option_or(o, "dt", 0.05);
  return cfg;
}

std::vector<VerifyCase> pnp_verify(const Options& o) {
  PnpConfig cfg = pnp_config(o);
  auto grid = std::make_shared<const Grid1D>(chebyshev(cfg.n));
  const Index n = cfg.n;
  GridFunction ones = GridFunction::Ones(n);
  auto prob = std::make_shared<const PnpProblem>(cfg, grid, ones, ones);

  GridFunction u0(2 * n);
  u0.setOnes();
  GridFunction u1 = u0;
  GridFunction u2 = u0;
  for (Index i = 0; i < n; ++i) {
    const double bump = 1.0 - grid->points(i) * grid->points(i);
    u1(i) += 0.2 * bump;
    u1(n + i) -= 0.1 * bump;
    u2(i) += 0.15 * bump * std::sin(2.0 * grid->points(i) + 0.4);
    u2(n + i) += 0.1 * bump * std::cos(1.7 * grid->points(i));
  }
  std::vector<JacobianBlockSpec> blocks = {{"dF+/dc+", 0, n, 0, n},
                                           {"dF+/dc-", 0, n, n, n},
                                           {"dF-/dc+", n, n, 0, n},
                                           {"dF-/dc-", n, n, n, n}};
  return {make_case("uniform", prob, u0, blocks),
          make_case("perturbed-1", prob, u1, blocks),
          make_case("perturbed-2", prob, u2, blocks)};
}

BenchSetup thinfilm_bench(Index size, const Options& o) {
  Options local = o;
  local["n"] = static_cast<double>(size);
  ThinFilmConfig cfg = thinfilm_config(local, false);
  auto grid = std::make_shared<const Grid1D>(chebyshev(cfg.n));
  auto prob = std::make_shared<const ThinFilmProblem>(cfg, grid);
  BenchSetup b;
  b.size = size;
  b.state = thinfilm_initial(cfg, grid->points);
  b.residual = [prob](const GridFunction& u) { return prob->residual(u); };
  b.direct = [prob, state = b.state]() { return prob->jacobian(state); };
  return b;
}

BenchSetup thinfilm_mapped_bench(Index size, const Options& o) {
  Options local = o;
  local["n"] = static_cast<double>(size);
  ThinFilmConfig cfg = thinfilm_config(local, true);
  auto grid = std::make_shared<const MappedThinFilmGrid>(
      mapped_thinfilm_grid(cfg.n, *cfg.beta));
  auto prob = std::make_shared<const MappedThinFilmProblem>(cfg, grid);
  BenchSetup b;
  b.size = size;
  b.state = thinfilm_initial(cfg, grid->x);
  b.residual = [prob](const GridFunction& u) { return prob->residual(u); };
  b.direct = [prob, state = b.state]() { return prob->jacobian(state); };
  return b;
}

BenchSetup colloid_bench(Index size, const Options& o) {
  Options local = o;
  local["nr"] = static_cast<double>(size);
  local["nt"] = static_cast<double>(size);
  ColloidConfig cfg = colloid_config(local);
  auto ops = std::make_shared<const SphericalOperators>(
      spherical_operators(cfg.n_r, cfg.n_t, cfg.l_r));
  auto prob = std::make_shared<const ColloidProblem>(cfg, ops);
  BenchSetup b;
  b.size = size;
  b.state = ColloidProblem::quiescent(*ops);
  b.residual = [prob](const GridFunction& u) { return prob->residual(u); };
  b.direct = [prob, state = b.state]() { return prob->jacobian(state); };
  return b;
}

BenchSetup pnp_bench(Index size, const Options& o) {
  Options local = o;
  local["n"] = static_cast<double>(size);
  PnpConfig cfg = pnp_config(local);
  auto grid = std::make_shared<const Grid1D>(chebyshev(cfg.n));
  GridFunction ones = GridFunction::Ones(cfg.n);
  auto prob = std::make_shared<const PnpProblem>(cfg, grid, ones, ones);
  BenchSetup b;
  b.size = size;
  b.state = GridFunction::Ones(2 * cfg.n);
  b.residual = [prob](const GridFunction& u) { return prob->residual(u); };
  b.direct = [prob, state = b.state]() { return prob->jacobian(state); };
  return b;
}

}  // namespace

const std::vector<ProblemHooks>& registry() {
  static const std::vector<ProblemHooks> reg = {
      {"thinfilm", thinfilm_verify, thinfilm_bench},
      {"thinfilm-mapped", thinfilm_mapped_verify, thinfilm_mapped_bench},
      {"colloid", colloid_verify, colloid_bench},
      {"pnp1d", pnp_verify, pnp_bench},
  };
  return reg;
}

const ProblemHooks* find_problem(const std::string& name) {
  for (const auto& h : registry()) {
    if (h.name == name) return &h;
  }
  return nullptr;
}

std::vector<std::string> problem_names() {
  std::vector<std::string> names;
  for (const auto& h : registry()) names.push_back(h.name);
  return names;
}

}  // namespace opjac::problems
