#pragma once

#include <functional>
#include <map>
#include <memory>
#include <ostream>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gls/errors.hpp"

namespace gls {

enum class Op {
  Const,
  Var,
  Neg,
  Sqrt,
  Cbrt,
  Tanh,
  Sin,
  Cos,
  Exp,
  Log,
  Add,
  Sub,
  Mul,
  Div,
  Pow,
};

/// Immutable expression tree over named real variables.
///
/// Nodes are shared, so copies are cheap and an Expr may be used from any
/// number of threads. Every construction goes through the factory functions
/// below, which fold constants and drop 0/1 identities; no other
/// simplification is attempted. The exponent of a Pow node is always a
/// constant.
class Expr {
 public:
  /// The constant 0.
  Expr();

  Op op() const { return node_->op; }
  /// Value of a Const node.
  double value() const { return node_->value; }
  /// Name of a Var node.
  const std::string& name() const { return node_->name; }
  const std::vector<Expr>& args() const { return node_->args; }
  const Expr& arg(std::size_t i) const { return node_->args.at(i); }

  bool is_constant() const { return op() == Op::Const; }
  bool is_constant(double v) const { return op() == Op::Const && value() == v; }

  /// Raw node construction without folding. Used by the factories.
  static Expr make(Op op, double value, std::string name, std::vector<Expr> args);

 private:
  struct Node {
    Op op;
    double value;
    std::string name;
    std::vector<Expr> args;
  };
  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  std::shared_ptr<const Node> node_;
};

// Factories.
Expr constant(double v);
Expr variable(std::string name);

Expr operator-(const Expr& a);
Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);
Expr operator+(const Expr& a, double b);
Expr operator+(double a, const Expr& b);
Expr operator-(const Expr& a, double b);
Expr operator-(double a, const Expr& b);
Expr operator*(const Expr& a, double b);
Expr operator*(double a, const Expr& b);
Expr operator/(const Expr& a, double b);
Expr operator/(double a, const Expr& b);

/// `base ^ exponent`; throws std::invalid_argument when the exponent is not constant.
Expr pow(const Expr& base, const Expr& exponent);
Expr pow(const Expr& base, double exponent);
Expr sqrt(const Expr& a);
Expr cbrt(const Expr& a);
Expr tanh(const Expr& a);
Expr sin(const Expr& a);
Expr cos(const Expr& a);
Expr exp(const Expr& a);
Expr log(const Expr& a);

/// Applies a unary function by its grammar name. Throws std::invalid_argument for
/// names outside {sqrt, cbrt, tanh, sin, cos, exp, log}.
Expr apply_function(std::string_view name, const Expr& a);
bool is_function_name(std::string_view name);

/// Parses the infix grammar:
///   expr   := term (('+'|'-') term)*
///   term   := unary (('*'|'/') unary)*
///   unary  := '-' unary | power
///   power  := atom ('^' unary)?
///   atom   := number | ident | ident '(' expr (',' expr)* ')' | '(' expr ')'
/// so `^` binds tighter than unary minus and is right-associative.
Expr parse_expr(std::string_view text);

/// Infix rendering that parse_expr maps back to a structurally equal tree.
std::string to_string(const Expr& e);
std::ostream& operator<<(std::ostream& os, const Expr& e);

bool structurally_equal(const Expr& a, const Expr& b);
std::set<std::string> free_variables(const Expr& e);
std::size_t node_count(const Expr& e);

using Bindings = std::map<std::string, double, std::less<>>;

/// IEEE double evaluation. Throws UnboundVariable and DomainError.
double eval(const Expr& e, const Bindings& bindings);
/// Evaluation against parallel name/value spans (no allocation).
double eval(const Expr& e, std::span<const std::string> names, std::span<const double> values);

/// Exact partial derivative with respect to `var`.
Expr diff(const Expr& e, std::string_view var);
/// Higher-order partial derivative, one variable per order.
Expr diff(const Expr& e, std::span<const std::string> vars);

/// Replaces every occurrence of `var` by `replacement`.
Expr substitute(const Expr& e, std::string_view var, const Expr& replacement);
/// Simultaneous substitution; replacements never see each other's output.
Expr substitute(const Expr& e, const std::map<std::string, Expr, std::less<>>& replacements);

}  // namespace gls
