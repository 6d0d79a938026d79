#pragma once

// Immutable real-valued expression trees over variables x1..xn.
//
// Nodes are shared (shared_ptr to const), so substitution and
// differentiation build DAGs. `Program` flattens a DAG once and evaluates
// each shared node a single time per point.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <memory>
#include <numbers>
#include <numeric>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "sobolev/errors.hpp"

namespace sobolev {

enum class Op : std::uint8_t {
  Const,
  Pi,
  Var,
  Neg,
  Add,
  Sub,
  Mul,
  Div,
  Pow,  // rational literal exponent num/den
  Sin,
  Cos,
  Exp,
  Log,
  Sqrt,
  Abs,
  Sign,    // derivative of abs; undefined at 0
  ExpInv,  // E_k(u) = exp(-1/u) u^{-k} for u > 0, else 0; k stored in num
};

struct Node {
  Op op = Op::Const;
  double value = 0.0;    // Const
  int var = 0;           // Var, 1-based
  std::int64_t num = 0;  // Pow numerator, ExpInv order
  std::int64_t den = 1;  // Pow denominator (> 0, reduced)
  std::shared_ptr<const Node> a;
  std::shared_ptr<const Node> b;
};

class Expr {
 public:
  Expr() : Expr(constant(0.0)) {}
  explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

  static Expr constant(double v) {
    auto n = std::make_shared<Node>();
    n->op = Op::Const;
    n->value = v;
    return Expr(std::move(n));
  }
  static Expr pi() {
    auto n = std::make_shared<Node>();
    n->op = Op::Pi;
    return Expr(std::move(n));
  }
  static Expr var(int index) {
    if (index < 1) throw InvalidArgument("variable index must be >= 1");
    auto n = std::make_shared<Node>();
    n->op = Op::Var;
    n->var = index;
    return Expr(std::move(n));
  }
  /// Raw node construction; no folding. Used by the parser so that the AST
  /// mirrors the source text.
  static Expr make(Op op, const Expr& a, const Expr& b = Expr(nullptr)) {
    auto n = std::make_shared<Node>();
    n->op = op;
    n->a = a.node_;
    n->b = b.node_;
    return Expr(std::move(n));
  }
  static Expr make_pow(const Expr& base, std::int64_t num, std::int64_t den) {
    if (den == 0) throw InvalidArgument("zero denominator in power");
    if (den < 0) {
      num = -num;
      den = -den;
    }
    std::int64_t g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
    auto n = std::make_shared<Node>();
    n->op = Op::Pow;
    n->a = base.node_;
    n->num = num;
    n->den = den;
    return Expr(std::move(n));
  }
  static Expr make_expinv(int k, const Expr& arg) {
    auto n = std::make_shared<Node>();
    n->op = Op::ExpInv;
    n->a = arg.node_;
    n->num = k;
    return Expr(std::move(n));
  }

  const Node& node() const { return *node_; }
  const Node* get() const { return node_.get(); }
  const std::shared_ptr<const Node>& ptr() const { return node_; }
  Op op() const { return node_->op; }
  Expr a() const { return Expr(node_->a); }
  Expr b() const { return Expr(node_->b); }

  bool is_const() const { return node_->op == Op::Const; }
  bool is_const(double v) const { return is_const() && node_->value == v; }

 private:
  std::shared_ptr<const Node> node_;
};

// ---------------------------------------------------------------------------
// Folding builders. Constant folding only; no algebraic simplification.

inline Expr operator-(const Expr& a) {
  if (a.is_const()) return Expr::constant(-a.node().value);
  if (a.op() == Op::Neg) return a.a();
  return Expr::make(Op::Neg, a);
}

inline Expr operator+(const Expr& a, const Expr& b) {
  if (a.is_const() && b.is_const()) return Expr::constant(a.node().value + b.node().value);
  if (a.is_const(0.0)) return b;
  if (b.is_const(0.0)) return a;
  return Expr::make(Op::Add, a, b);
}

inline Expr operator-(const Expr& a, const Expr& b) {
  if (a.is_const() && b.is_const()) return Expr::constant(a.node().value - b.node().value);
  if (b.is_const(0.0)) return a;
  if (a.is_const(0.0)) return -b;
  return Expr::make(Op::Sub, a, b);
}

inline Expr operator*(const Expr& a, const Expr& b) {
  if (a.is_const() && b.is_const()) return Expr::constant(a.node().value * b.node().value);
  if (a.is_const(0.0) || b.is_const(0.0)) return Expr::constant(0.0);
  if (a.is_const(1.0)) return b;
  if (b.is_const(1.0)) return a;
  if (a.is_const(-1.0)) return -b;
  if (b.is_const(-1.0)) return -a;
  return Expr::make(Op::Mul, a, b);
}

inline Expr operator/(const Expr& a, const Expr& b) {
  if (a.is_const() && b.is_const() && b.node().value != 0.0)
    return Expr::constant(a.node().value / b.node().value);
  if (a.is_const(0.0) && !b.is_const(0.0)) return Expr::constant(0.0);
  if (b.is_const(1.0)) return a;
  return Expr::make(Op::Div, a, b);
}

inline Expr operator+(const Expr& a, double b) { return a + Expr::constant(b); }
inline Expr operator+(double a, const Expr& b) { return Expr::constant(a) + b; }
inline Expr operator-(const Expr& a, double b) { return a - Expr::constant(b); }
inline Expr operator-(double a, const Expr& b) { return Expr::constant(a) - b; }
inline Expr operator*(double a, const Expr& b) { return Expr::constant(a) * b; }
inline Expr operator*(const Expr& a, double b) { return a * Expr::constant(b); }
inline Expr operator/(const Expr& a, double b) { return a / Expr::constant(b); }
inline Expr operator/(double a, const Expr& b) { return Expr::constant(a) / b; }

inline Expr pow(const Expr& base, std::int64_t num, std::int64_t den = 1) {
  if (num == 0) return Expr::constant(1.0);
  if (num == den) return base;
  if (base.is_const() && den == 1) {
    double v = base.node().value;
    if (v != 0.0 || num > 0) return Expr::constant(std::pow(v, static_cast<double>(num)));
  }
  return Expr::make_pow(base, num, den);
}

namespace detail {
inline Expr fold_unary(Op op, const Expr& a, double (*f)(double), bool ok) {
  if (a.is_const() && ok) return Expr::constant(f(a.node().value));
  return Expr::make(op, a);
}
}  // namespace detail

inline Expr sin(const Expr& a) { return detail::fold_unary(Op::Sin, a, [](double v) { return std::sin(v); }, true); }
inline Expr cos(const Expr& a) { return detail::fold_unary(Op::Cos, a, [](double v) { return std::cos(v); }, true); }
inline Expr exp(const Expr& a) { return detail::fold_unary(Op::Exp, a, [](double v) { return std::exp(v); }, true); }
inline Expr log(const Expr& a) {
  return detail::fold_unary(Op::Log, a, [](double v) { return std::log(v); }, a.is_const() && a.node().value > 0);
}
inline Expr sqrt(const Expr& a) {
  return detail::fold_unary(Op::Sqrt, a, [](double v) { return std::sqrt(v); }, a.is_const() && a.node().value >= 0);
}
inline Expr abs(const Expr& a) { return detail::fold_unary(Op::Abs, a, [](double v) { return std::fabs(v); }, true); }
inline Expr sign(const Expr& a) {
  return detail::fold_unary(Op::Sign, a, [](double v) { return v > 0 ? 1.0 : -1.0; },
                            a.is_const() && a.node().value != 0);
}
inline Expr expinv(int k, const Expr& a) { return Expr::make_expinv(k, a); }

/// Smooth cutoff of the normalized coordinate w: exactly 1 for w <= 0,
/// exactly 0 for w >= 1, C^inf in between. Built from the mollifier factor
/// exp(-1/t) so that every derivative is again an expression.
inline Expr smooth_cutoff(const Expr& w) {
  Expr on = expinv(0, 1.0 - w);
  Expr off = expinv(0, w);
  return on / (on + off);
}

// ---------------------------------------------------------------------------
// Evaluation.

namespace detail {

inline double expinv_value(std::int64_t k, double u) {
  if (!(u > 0.0)) return 0.0;
  return std::exp(-1.0 / u - static_cast<double>(k) * std::log(u));
}

inline double pow_value(double base, std::int64_t num, std::int64_t den) {
  if (base == 0.0) {
    if (num < 0) throw DomainError("zero raised to a negative power");
    return 0.0;
  }
  if (den == 1) return std::pow(base, static_cast<double>(num));
  double e = static_cast<double>(num) / static_cast<double>(den);
  if (base > 0.0) return std::pow(base, e);
  if (den % 2 == 0) throw DomainError("even root of a negative value");
  double mag = std::pow(-base, e);
  return (num % 2 == 0) ? mag : -mag;
}

inline double apply(const Node& n, double x, double y) {
  switch (n.op) {
    case Op::Neg: return -x;
    case Op::Add: return x + y;
    case Op::Sub: return x - y;
    case Op::Mul: return x * y;
    case Op::Div:
      if (y == 0.0) throw DomainError("division by zero");
      return x / y;
    case Op::Pow: return pow_value(x, n.num, n.den);
    case Op::Sin: return std::sin(x);
    case Op::Cos: return std::cos(x);
    case Op::Exp: return std::exp(x);
    case Op::Log:
      if (!(x > 0.0)) throw DomainError("log of a non-positive value");
      return std::log(x);
    case Op::Sqrt:
      if (x < 0.0) throw DomainError("sqrt of a negative value");
      return std::sqrt(x);
    case Op::Abs: return std::fabs(x);
    case Op::Sign:
      if (x == 0.0) throw DomainError("derivative of abs at 0");
      return x > 0.0 ? 1.0 : -1.0;
    case Op::ExpInv: return expinv_value(n.num, x);
    default: break;
  }
  throw InvalidArgument("unexpected node in evaluation");
}

inline double eval_node(const Node& n, std::span<const double> x) {
  switch (n.op) {
    case Op::Const: return n.value;
    case Op::Pi: return std::numbers::pi;
    case Op::Var:
      if (static_cast<std::size_t>(n.var) > x.size())
        throw InvalidArgument("point has " + std::to_string(x.size()) + " coordinates, expression uses x" +
                              std::to_string(n.var));
      return x[n.var - 1];
    default: break;
  }
  double av = eval_node(*n.a, x);
  double bv = n.b ? eval_node(*n.b, x) : 0.0;
  return apply(n, av, bv);
}

}  // namespace detail

/// IEEE double evaluation. Domain violations throw DomainError instead of
/// producing NaN or infinity.
inline double eval(const Expr& e, std::span<const double> x) {
  double v = detail::eval_node(e.node(), x);
  if (!std::isfinite(v)) throw DomainError("non-finite value");
  return v;
}

inline double eval(const Expr& e, std::initializer_list<double> x) {
  return eval(e, std::span<const double>(x.begin(), x.size()));
}

/// Flattened DAG of one or more expressions for repeated evaluation.
/// Holds scratch space, so a Program must not be shared between threads.
class Program {
 public:
  explicit Program(const Expr& e) : Program(std::vector<Expr>{e}) {}

  explicit Program(const std::vector<Expr>& outputs) {
    std::unordered_map<const Node*, int> slot;
    for (const auto& e : outputs) outputs_.push_back(emit(e.ptr(), slot));
    scratch_.resize(code_.size());
  }

  std::size_t size() const { return code_.size(); }
  std::size_t outputs() const { return outputs_.size(); }

  void eval(std::span<const double> x, std::span<double> out) const {
    for (std::size_t i = 0; i < code_.size(); ++i) {
      const Instr& in = code_[i];
      double v;
      switch (in.node->op) {
        case Op::Const: v = in.node->value; break;
        case Op::Pi: v = std::numbers::pi; break;
        case Op::Var:
          if (static_cast<std::size_t>(in.node->var) > x.size())
            throw InvalidArgument("point dimension too small for x" + std::to_string(in.node->var));
          v = x[in.node->var - 1];
          break;
        default:
          v = detail::apply(*in.node, scratch_[in.a], in.b >= 0 ? scratch_[in.b] : 0.0);
      }
      scratch_[i] = v;
    }
    for (std::size_t k = 0; k < outputs_.size(); ++k) {
      double v = scratch_[outputs_[k]];
      if (!std::isfinite(v)) throw DomainError("non-finite value");
      out[k] = v;
    }
  }

  double operator()(std::span<const double> x) const {
    double out = 0.0;
    eval(x, std::span<double>(&out, 1));
    return out;
  }

 private:
  struct Instr {
    const Node* node;
    int a = -1;
    int b = -1;
  };

  int emit(const std::shared_ptr<const Node>& n, std::unordered_map<const Node*, int>& slot) {
    if (auto it = slot.find(n.get()); it != slot.end()) return it->second;
    Instr in{n.get()};
    if (n->a) in.a = emit(n->a, slot);
    if (n->b) in.b = emit(n->b, slot);
    keep_.push_back(n);
    code_.push_back(in);
    int id = static_cast<int>(code_.size()) - 1;
    slot.emplace(n.get(), id);
    return id;
  }

  std::vector<Instr> code_;
  std::vector<std::shared_ptr<const Node>> keep_;
  std::vector<int> outputs_;
  mutable std::vector<double> scratch_;
};

// ---------------------------------------------------------------------------
// Structure.

inline bool equal(const Expr& x, const Expr& y) {
  const Node& a = x.node();
  const Node& b = y.node();
  if (&a == &b) return true;
  if (a.op != b.op) return false;
  switch (a.op) {
    case Op::Const: return a.value == b.value;
    case Op::Pi: return true;
    case Op::Var: return a.var == b.var;
    default: break;
  }
  if (a.num != b.num || a.den != b.den) return false;
  if (!equal(x.a(), y.a())) return false;
  if (static_cast<bool>(a.b) != static_cast<bool>(b.b)) return false;
  return !a.b || equal(x.b(), y.b());
}

/// Largest variable index used, 0 for a constant expression.
inline int max_variable(const Expr& e) {
  const Node& n = e.node();
  if (n.op == Op::Var) return n.var;
  int m = 0;
  if (n.a) m = std::max(m, max_variable(e.a()));
  if (n.b) m = std::max(m, max_variable(e.b()));
  return m;
}

inline std::size_t node_count(const Expr& e) {
  const Node& n = e.node();
  return 1 + (n.a ? node_count(e.a()) : 0) + (n.b ? node_count(e.b()) : 0);
}

inline const char* function_name(Op op) {
  switch (op) {
    case Op::Sin: return "sin";
    case Op::Cos: return "cos";
    case Op::Exp: return "exp";
    case Op::Log: return "log";
    case Op::Sqrt: return "sqrt";
    case Op::Abs: return "abs";
    case Op::Sign: return "sign";
    default: return nullptr;
  }
}

inline std::string format_number(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

/// Fully parenthesized text in the parser's grammar. ExpInv nodes (used only
/// by built-in bump functions) print as expinv<k>(...), which the parser
/// does not accept.
inline std::string to_string(const Expr& e) {
  const Node& n = e.node();
  switch (n.op) {
    case Op::Const: return n.value < 0 ? "(" + format_number(n.value) + ")" : format_number(n.value);
    case Op::Pi: return "pi";
    case Op::Var: return "x" + std::to_string(n.var);
    case Op::Neg: return "(-" + to_string(e.a()) + ")";
    case Op::Add: return "(" + to_string(e.a()) + " + " + to_string(e.b()) + ")";
    case Op::Sub: return "(" + to_string(e.a()) + " - " + to_string(e.b()) + ")";
    case Op::Mul: return "(" + to_string(e.a()) + " * " + to_string(e.b()) + ")";
    case Op::Div: return "(" + to_string(e.a()) + " / " + to_string(e.b()) + ")";
    case Op::Pow: {
      std::string ex = (n.den == 1 && n.num >= 0)
                           ? std::to_string(n.num)
                           : "(" + std::to_string(n.num) + (n.den == 1 ? "" : "/" + std::to_string(n.den)) + ")";
      return "(" + to_string(e.a()) + ")^" + ex;
    }
    case Op::ExpInv: return "expinv" + std::to_string(n.num) + "(" + to_string(e.a()) + ")";
    default: return std::string(function_name(n.op)) + "(" + to_string(e.a()) + ")";
  }
}

/// Replaces x_i by replacements[i-1].
inline Expr substitute(const Expr& e, const std::vector<Expr>& replacements) {
  std::unordered_map<const Node*, Expr> memo;
  auto rec = [&](auto&& self, const Expr& x) -> Expr {
    if (auto it = memo.find(x.get()); it != memo.end()) return it->second;
    const Node& n = x.node();
    Expr out = x;
    switch (n.op) {
      case Op::Const:
      case Op::Pi: break;
      case Op::Var:
        if (static_cast<std::size_t>(n.var) > replacements.size())
          throw InvalidArgument("substitution is missing x" + std::to_string(n.var));
        out = replacements[n.var - 1];
        break;
      default: {
        Expr a = self(self, x.a());
        if (n.op == Op::Pow) {
          out = Expr::make_pow(a, n.num, n.den);
        } else if (n.op == Op::ExpInv) {
          out = Expr::make_expinv(static_cast<int>(n.num), a);
        } else if (n.b) {
          out = Expr::make(n.op, a, self(self, x.b()));
        } else {
          out = Expr::make(n.op, a);
        }
      }
    }
    memo.emplace(x.get(), out);
    return out;
  };
  return rec(rec, e);
}

/// Symbolic partial derivative with respect to x_axis (1-based).
inline Expr diff(const Expr& e, int axis) {
  if (axis < 1) throw InvalidArgument("axis must be >= 1");
  std::unordered_map<const Node*, Expr> memo;
  auto rec = [&](auto&& self, const Expr& x) -> Expr {
    if (auto it = memo.find(x.get()); it != memo.end()) return it->second;
    const Node& n = x.node();
    Expr d;
    switch (n.op) {
      case Op::Const:
      case Op::Pi: d = Expr::constant(0.0); break;
      case Op::Var: d = Expr::constant(n.var == axis ? 1.0 : 0.0); break;
      case Op::Neg: d = -self(self, x.a()); break;
      case Op::Add: d = self(self, x.a()) + self(self, x.b()); break;
      case Op::Sub: d = self(self, x.a()) - self(self, x.b()); break;
      case Op::Mul: d = self(self, x.a()) * x.b() + x.a() * self(self, x.b()); break;
      case Op::Div: {
        Expr da = self(self, x.a());
        Expr db = self(self, x.b());
        d = da / x.b() - (x.a() * db) / pow(x.b(), 2);
        break;
      }
      case Op::Pow: {
        Expr da = self(self, x.a());
        double r = static_cast<double>(n.num) / static_cast<double>(n.den);
        d = (Expr::constant(r) * pow(x.a(), n.num - n.den, n.den)) * da;
        break;
      }
      case Op::Sin: d = cos(x.a()) * self(self, x.a()); break;
      case Op::Cos: d = -(sin(x.a()) * self(self, x.a())); break;
      case Op::Exp: d = x * self(self, x.a()); break;
      case Op::Log: d = self(self, x.a()) / x.a(); break;
      case Op::Sqrt: d = self(self, x.a()) / (2.0 * x); break;
      case Op::Abs: d = sign(x.a()) * self(self, x.a()); break;
      case Op::Sign: d = Expr::constant(0.0); break;
      case Op::ExpInv: {
        int k = static_cast<int>(n.num);
        Expr inner = expinv(k + 2, x.a());
        if (k != 0) inner = inner - Expr::constant(static_cast<double>(k)) * expinv(k + 1, x.a());
        d = inner * self(self, x.a());
        break;
      }
    }
    memo.emplace(x.get(), d);
    return d;
  };
  return rec(rec, e);
}

/// Mixed partial derivative d^nu, nu a multi-index of length n.
inline Expr diff_multi(const Expr& e, std::span<const int> nu) {
  Expr out = e;
  for (std::size_t axis = 0; axis < nu.size(); ++axis)
    for (int r = 0; r < nu[axis]; ++r) out = diff(out, static_cast<int>(axis) + 1);
  return out;
}

}  // namespace sobolev
