#include "opjac/expr.hpp"

#include <cmath>
#include <sstream>

namespace opjac {

namespace cw {

CwiseFn exp() {
  return {"exp", [](double x) { return std::exp(x); },
          [](double x) { return std::exp(x); }};
}

CwiseFn log() {
  auto check = [](double x) {
    if (!(x > 0.0)) {
      throw DomainError("cwise log: non-positive argument " + std::to_string(x));
    }
  };
  return {"log",
          [check](double x) { check(x); return std::log(x); },
          [check](double x) { check(x); return 1.0 / x; }};
}

CwiseFn sin() {
  return {"sin", [](double x) { return std::sin(x); },
          [](double x) { return std::cos(x); }};
}

CwiseFn cos() {
  return {"cos", [](double x) { return std::cos(x); },
          [](double x) { return -std::sin(x); }};
}

CwiseFn sinh() {
  return {"sinh", [](double x) { return std::sinh(x); },
          [](double x) { return std::cosh(x); }};
}

CwiseFn cosh() {
  return {"cosh", [](double x) { return std::cosh(x); },
          [](double x) { return std::sinh(x); }};
}

CwiseFn sqrt() {
  auto check = [](double x) {
    if (!(x > 0.0)) {
      throw DomainError("cwise sqrt: non-positive argument " + std::to_string(x));
    }
  };
  return {"sqrt",
          [check](double x) { check(x); return std::sqrt(x); },
          [check](double x) { check(x); return 0.5 / std::sqrt(x); }};
}

CwiseFn ipow(int k) {
  return {"ipow" + std::to_string(k),
          [k](double x) { return std::pow(x, k); },
          [k](double x) { return k * std::pow(x, k - 1); }};
}

CwiseFn pow(double p) {
  return {"pow", [p](double x) { return std::pow(x, p); },
          [p](double x) { return p * std::pow(x, p - 1.0); }};
}

CwiseFn affine(double a, double b) {
  return {"affine", [a, b](double x) { return a * x + b; },
          [a](double) { return a; }};
}

}  // namespace cw

namespace detail {

// Jacobian intermediate: keeps diagonal structure symbolic so folding and
// row/column scaling happen instead of explicit diag-matrix products. A
// chain of plain matrices (A*(B*u)) stays lazy until materialized.
struct Jac {
  enum class Kind { Zero, Ident, Diag, Mat, Chain } kind = Kind::Zero;
  Index rows = 0, cols = 0;
  GridFunction d;                    // Kind::Diag
  OperatorMatrix m;                  // Kind::Mat
  std::vector<OperatorMatrix> chain; // Kind::Chain, applied left to right

  static Jac zero(Index r, Index c) { return {Kind::Zero, r, c, {}, {}, {}}; }
  static Jac ident(Index n) { return {Kind::Ident, n, n, {}, {}, {}}; }
  static Jac diagonal(GridFunction v) {
    Index n = v.size();
    return {Kind::Diag, n, n, std::move(v), {}, {}};
  }
  static Jac matrix(OperatorMatrix a) {
    Index r = a.rows(), c = a.cols();
    return {Kind::Mat, r, c, {}, std::move(a), {}};
  }
};

OperatorMatrix materialize(const Jac& j) {
  switch (j.kind) {
    case Jac::Kind::Zero:
      return OperatorMatrix::zero(j.rows, j.cols);
    case Jac::Kind::Ident:
      return OperatorMatrix::identity(j.rows);
    case Jac::Kind::Diag:
      return diag(j.d);
    case Jac::Kind::Mat:
      return j.m;
    case Jac::Kind::Chain: {
      OperatorMatrix out = j.chain.front();
      for (size_t k = 1; k < j.chain.size(); ++k) out = matmul(out, j.chain[k]);
      return out;
    }
  }
  throw Error("materialize: bad kind");
}

Jac scale(double s, Jac j) {
  switch (j.kind) {
    case Jac::Kind::Zero:
      return j;
    case Jac::Kind::Ident:
      return Jac::diagonal(GridFunction::Constant(j.rows, s));
    case Jac::Kind::Diag:
      j.d *= s;
      return j;
    case Jac::Kind::Mat:
      j.m = j.m.scaled(s);
      return j;
    case Jac::Kind::Chain:
      j.chain.front() = j.chain.front().scaled(s);
      return j;
  }
  throw Error("scale: bad kind");
}

Jac add(Jac a, Jac b) {
  if (a.rows != b.rows || a.cols != b.cols) {
    throw DimensionError("jacobian: block shape mismatch in sum");
  }
  if (a.kind == Jac::Kind::Zero) return b;
  if (b.kind == Jac::Kind::Zero) return a;
  auto as_diag = [](const Jac& j) -> GridFunction {
    return j.kind == Jac::Kind::Ident ? GridFunction(GridFunction::Ones(j.rows)) : j.d;
  };
  const bool a_diagish = a.kind == Jac::Kind::Ident || a.kind == Jac::Kind::Diag;
  const bool b_diagish = b.kind == Jac::Kind::Ident || b.kind == Jac::Kind::Diag;
  if (a_diagish && b_diagish) return Jac::diagonal(as_diag(a) + as_diag(b));
  return Jac::matrix(materialize(a) + materialize(b));
}

// diag(g) * X  (product rule / diagonal rule contributions)
Jac lmul_diag(const GridFunction& g, Jac x) {
  switch (x.kind) {
    case Jac::Kind::Zero:
      return x;
    case Jac::Kind::Ident:
      return Jac::diagonal(g);
    case Jac::Kind::Diag:
      return Jac::diagonal(g.cwiseProduct(x.d));
    case Jac::Kind::Mat:
      return Jac::matrix(scale_rows(g, x.m));
    case Jac::Kind::Chain:
      x.chain.front() = scale_rows(g, x.chain.front());
      return x;
  }
  throw Error("lmul_diag: bad kind");
}

// A * X  (matrix-vector product / chain rule contributions)
Jac lmul_matrix(const OperatorMatrix& a, Jac x) {
  switch (x.kind) {
    case Jac::Kind::Zero:
      return Jac::zero(a.rows(), x.cols);
    case Jac::Kind::Ident:
      return Jac::matrix(a);
    case Jac::Kind::Diag:
      return Jac::matrix(scale_cols(a, x.d));
    case Jac::Kind::Mat: {
      Jac out;
      out.kind = Jac::Kind::Chain;
      out.rows = a.rows();
      out.cols = x.cols;
      out.chain = {a, std::move(x.m)};
      return out;
    }
    case Jac::Kind::Chain:
      x.chain.insert(x.chain.begin(), a);
      x.rows = a.rows();
      return x;
  }
  throw Error("lmul_matrix: bad kind");
}

struct Node {
  virtual ~Node() = default;
  virtual GridFunction eval(const Environment& env) const = 0;
  virtual Jac jac(const std::string& var, const Environment& env) const = 0;
  virtual void render(std::ostream& os) const = 0;
};

using NodePtr = std::shared_ptr<const Node>;

Index var_length(const std::string& var, const Environment& env) {
  auto it = env.find(var);
  if (it == env.end()) throw Error("expression: unbound variable '" + var + "'");
  return it->second.size();
}

struct VarNode final : Node {
  std::string name;
  explicit VarNode(std::string n) : name(std::move(n)) {}
  GridFunction eval(const Environment& env) const override {
    auto it = env.find(name);
    if (it == env.end()) throw Error("expression: unbound variable '" + name + "'");
    return it->second;
  }
  Jac jac(const std::string& var, const Environment& env) const override {
    const Index n = eval(env).size();
    if (name == var) return Jac::ident(n);
    return Jac::zero(n, var_length(var, env));
  }
  void render(std::ostream& os) const override { os << "(var " << name << ")"; }
};

struct ConstNode final : Node {
  GridFunction value;
  explicit ConstNode(GridFunction v) : value(std::move(v)) {}
  GridFunction eval(const Environment&) const override { return value; }
  Jac jac(const std::string& var, const Environment& env) const override {
    return Jac::zero(value.size(), var_length(var, env));
  }
  void render(std::ostream& os) const override {
    os << "(const[" << value.size() << "])";
  }
};

struct MatVecNode final : Node {
  OperatorMatrix a;
  NodePtr child;
  std::string label;
  GridFunction eval(const Environment& env) const override {
    return a * child->eval(env);
  }
  Jac jac(const std::string& var, const Environment& env) const override {
    return lmul_matrix(a, child->jac(var, env));
  }
  void render(std::ostream& os) const override {
    os << "(matvec ";
    if (label.empty()) {
      os << "[" << a.rows() << "x" << a.cols() << "]";
    } else {
      os << label;
    }
    os << " ";
    child->render(os);
    os << ")";
  }
};

struct CwiseNode final : Node {
  CwiseFn fn;
  NodePtr child;
  GridFunction eval(const Environment& env) const override {
    GridFunction v = child->eval(env);
    for (Index i = 0; i < v.size(); ++i) v(i) = fn.f(v(i));
    return v;
  }
  Jac jac(const std::string& var, const Environment& env) const override {
    GridFunction v = child->eval(env);
    for (Index i = 0; i < v.size(); ++i) v(i) = fn.df(v(i));
    return lmul_diag(v, child->jac(var, env));
  }
  void render(std::ostream& os) const override {
    os << "(cwise " << fn.name << " ";
    child->render(os);
    os << ")";
  }
};

struct HadamardNode final : Node {
  NodePtr left, right;
  GridFunction eval(const Environment& env) const override {
    GridFunction l = left->eval(env);
    GridFunction r = right->eval(env);
    if (l.size() != r.size()) throw DimensionError("hadamard: length mismatch");
    return l.cwiseProduct(r);
  }
  Jac jac(const std::string& var, const Environment& env) const override {
    GridFunction l = left->eval(env);
    GridFunction r = right->eval(env);
    if (l.size() != r.size()) throw DimensionError("hadamard: length mismatch");
    return add(lmul_diag(r, left->jac(var, env)), lmul_diag(l, right->jac(var, env)));
  }
  void render(std::ostream& os) const override {
    os << "(hadamard ";
    left->render(os);
    os << " ";
    right->render(os);
    os << ")";
  }
};

struct LinCombNode final : Node {
  std::vector<std::pair<double, NodePtr>> terms;
  GridFunction eval(const Environment& env) const override {
    if (terms.empty()) throw Error("lincomb: empty term list");
    GridFunction acc = terms[0].first * terms[0].second->eval(env);
    for (size_t k = 1; k < terms.size(); ++k) {
      GridFunction t = terms[k].second->eval(env);
      if (t.size() != acc.size()) throw DimensionError("lincomb: length mismatch");
      acc += terms[k].first * t;
    }
    return acc;
  }
  Jac jac(const std::string& var, const Environment& env) const override {
    Jac acc = scale(terms[0].first, terms[0].second->jac(var, env));
    for (size_t k = 1; k < terms.size(); ++k) {
      acc = add(std::move(acc), scale(terms[k].first, terms[k].second->jac(var, env)));
    }
    return acc;
  }
  void render(std::ostream& os) const override {
    os << "(lincomb";
    for (const auto& [c, n] : terms) {
      os << " (" << c << " ";
      n->render(os);
      os << ")";
    }
    os << ")";
  }
};

struct AffineShiftNode final : Node {
  NodePtr child;
  GridFunction shift;
  GridFunction eval(const Environment& env) const override {
    GridFunction v = child->eval(env);
    if (v.size() != shift.size()) throw DimensionError("affine_shift: length mismatch");
    return v + shift;
  }
  Jac jac(const std::string& var, const Environment& env) const override {
    return child->jac(var, env);
  }
  void render(std::ostream& os) const override {
    os << "(affine-shift ";
    child->render(os);
    os << " (const[" << shift.size() << "]))";
  }
};

}  // namespace detail

Expr Expr::var(std::string name) {
  return Expr(std::make_shared<detail::VarNode>(std::move(name)));
}

Expr Expr::constant(GridFunction v) {
  return Expr(std::make_shared<detail::ConstNode>(std::move(v)));
}

Expr Expr::matvec(OperatorMatrix a, Expr child, std::string label) {
  auto n = std::make_shared<detail::MatVecNode>();
  n->a = std::move(a);
  n->child = child.node_;
  n->label = std::move(label);
  return Expr(std::move(n));
}

Expr Expr::cwise(CwiseFn fn, Expr child) {
  auto n = std::make_shared<detail::CwiseNode>();
  n->fn = std::move(fn);
  n->child = child.node_;
  return Expr(std::move(n));
}

Expr Expr::hadamard(Expr a, Expr b) {
  auto n = std::make_shared<detail::HadamardNode>();
  n->left = a.node_;
  n->right = b.node_;
  return Expr(std::move(n));
}

Expr Expr::lincomb(std::vector<std::pair<double, Expr>> terms) {
  if (terms.empty()) throw Error("lincomb: empty term list");
  auto n = std::make_shared<detail::LinCombNode>();
  n->terms.reserve(terms.size());
  for (auto& [c, e] : terms) n->terms.emplace_back(c, e.node_);
  return Expr(std::move(n));
}

Expr Expr::affine_shift(Expr child, GridFunction shift) {
  auto n = std::make_shared<detail::AffineShiftNode>();
  n->child = child.node_;
  n->shift = std::move(shift);
  return Expr(std::move(n));
}

GridFunction Expr::evaluate(const Environment& env) const {
  if (!node_) throw Error("evaluate: empty expression");
  return node_->eval(env);
}

OperatorMatrix Expr::jacobian(const std::string& var, const Environment& env) const {
  if (!node_) throw Error("jacobian: empty expression");
  return detail::materialize(node_->jac(var, env));
}

std::string Expr::to_string() const {
  if (!node_) return "(empty)";
  std::ostringstream os;
  node_->render(os);
  return os.str();
}

Expr operator+(Expr a, Expr b) { return Expr::lincomb({{1.0, a}, {1.0, b}}); }
Expr operator-(Expr a, Expr b) { return Expr::lincomb({{1.0, a}, {-1.0, b}}); }
Expr operator*(double s, Expr e) { return Expr::lincomb({{s, e}}); }

std::vector<std::vector<OperatorMatrix>> jacobian_blocks(
    const std::vector<Expr>& exprs, const std::vector<std::string>& vars,
    const Environment& env) {
  std::vector<std::vector<OperatorMatrix>> out;
  out.reserve(exprs.size());
  for (const Expr& e : exprs) {
    std::vector<OperatorMatrix> row;
    row.reserve(vars.size());
    for (const std::string& v : vars) row.push_back(e.jacobian(v, env));
    out.push_back(std::move(row));
  }
  return out;
}

}  // namespace opjac
