#pragma once

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "opjac/matrix.hpp"

namespace opjac {

/// Component-wise scalar function paired with its analytical derivative.
/// Caller-supplied pairs are allowed; the caller owns the correctness of df.
struct CwiseFn {
  std::string name;
  std::function<double(double)> f;
  std::function<double(double)> df;
};

/// Built-in catalog. log and sqrt raise DomainError on non-positive input
/// so bad Newton iterates surface instead of producing silent NaNs.
namespace cw {
CwiseFn exp();
CwiseFn log();
CwiseFn sin();
CwiseFn cos();
CwiseFn sinh();
CwiseFn cosh();
CwiseFn sqrt();
CwiseFn ipow(int k);
CwiseFn pow(double p);
CwiseFn affine(double a, double b);  // a*u + b
}  // namespace cw

using Environment = std::map<std::string, GridFunction>;

namespace detail {
struct Node;
}

/// Immutable operator-expression tree over named grid-function variables.
/// evaluate() computes the value by structural recursion; jacobian()
/// applies the matrix-vector, diagonal, chain and product rules so the
/// Jacobian emerges directly as a matrix. Adjacent diagonal factors are
/// folded and diag-times-matrix is realized as row/column scaling; a plain
/// matrix-over-matrix composition stays lazy until materialized.
class Expr {
 public:
  Expr() = default;  // empty; evaluating it is an error

  static Expr var(std::string name);
  static Expr constant(GridFunction v);
  static Expr matvec(OperatorMatrix a, Expr child, std::string label = "");
  static Expr cwise(CwiseFn fn, Expr child);
  static Expr hadamard(Expr a, Expr b);
  static Expr lincomb(std::vector<std::pair<double, Expr>> terms);
  static Expr affine_shift(Expr child, GridFunction shift);

  GridFunction evaluate(const Environment& env) const;
  OperatorMatrix jacobian(const std::string& var, const Environment& env) const;
  std::string to_string() const;

 private:
  explicit Expr(std::shared_ptr<const detail::Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const detail::Node> node_;
};

Expr operator+(Expr a, Expr b);
Expr operator-(Expr a, Expr b);
Expr operator*(double s, Expr e);

/// Full system Jacobian [dF_i/dv_j], one block per (expression, variable).
std::vector<std::vector<OperatorMatrix>> jacobian_blocks(
    const std::vector<Expr>& exprs, const std::vector<std::string>& vars,
    const Environment& env);

}  // namespace opjac
