#include "gls/expr.hpp"

#include <algorithm>
#include <charconv>
#include <cctype>
#include <cmath>
#include <optional>
#include <sstream>
#include <stdexcept>

namespace gls {

namespace {

constexpr double kTanhSaturation = 350.0;

const char* function_name(Op op) {
  switch (op) {
    case Op::Sqrt: return "sqrt";
    case Op::Cbrt: return "cbrt";
    case Op::Tanh: return "tanh";
    case Op::Sin: return "sin";
    case Op::Cos: return "cos";
    case Op::Exp: return "exp";
    case Op::Log: return "log";
    default: return "?";
  }
}

double apply_unary(Op op, double x) {
  switch (op) {
    case Op::Neg:
      return -x;
    case Op::Sqrt:
      if (x < 0.0) throw DomainError("sqrt of negative argument " + std::to_string(x));
      return std::sqrt(x);
    case Op::Cbrt:
      return std::cbrt(x);
    case Op::Tanh:
      if (x > kTanhSaturation) return 1.0;
      if (x < -kTanhSaturation) return -1.0;
      return std::tanh(x);
    case Op::Sin:
      return std::sin(x);
    case Op::Cos:
      return std::cos(x);
    case Op::Exp:
      return std::exp(x);
    case Op::Log:
      if (x <= 0.0) throw DomainError("log of non-positive argument " + std::to_string(x));
      return std::log(x);
    default:
      throw std::logic_error("apply_unary: not a unary op");
  }
}

double apply_pow(double base, double exponent) {
  if (base < 0.0 && std::floor(exponent) != exponent) {
    throw DomainError("negative base " + std::to_string(base) + " with non-integer exponent");
  }
  if (base == 0.0 && exponent < 0.0) throw DomainError("division by zero in pow");
  return std::pow(base, exponent);
}

double apply_binary(Op op, double a, double b) {
  switch (op) {
    case Op::Add: return a + b;
    case Op::Sub: return a - b;
    case Op::Mul: return a * b;
    case Op::Div:
      if (b == 0.0) throw DomainError("division by zero");
      return a / b;
    case Op::Pow: return apply_pow(a, b);
    default: throw std::logic_error("apply_binary: not a binary op");
  }
}

// Folds f(c) only when the result is finite and in-domain; otherwise the node
// is kept so the error surfaces at evaluation time.
Expr fold_unary(Op op, const Expr& a) {
  if (a.is_constant()) {
    try {
      const double v = apply_unary(op, a.value());
      if (std::isfinite(v)) return constant(v);
    } catch (const DomainError&) {
    }
  }
  return Expr::make(op, 0.0, {}, {a});
}

std::optional<double> fold_binary(Op op, const Expr& a, const Expr& b) {
  if (!a.is_constant() || !b.is_constant()) return std::nullopt;
  try {
    const double v = apply_binary(op, a.value(), b.value());
    if (std::isfinite(v)) return v;
  } catch (const DomainError&) {
  }
  return std::nullopt;
}

Expr rebuild(const Expr& e, std::vector<Expr> args) {
  switch (e.op()) {
    case Op::Const:
    case Op::Var:
      return e;
    case Op::Neg: return -args[0];
    case Op::Add: return args[0] + args[1];
    case Op::Sub: return args[0] - args[1];
    case Op::Mul: return args[0] * args[1];
    case Op::Div: return args[0] / args[1];
    case Op::Pow: return pow(args[0], args[1]);
    default: return fold_unary(e.op(), args[0]);
  }
}

template <class Lookup>
double eval_impl(const Expr& e, const Lookup& lookup) {
  switch (e.op()) {
    case Op::Const:
      return e.value();
    case Op::Var:
      return lookup(e.name());
    case Op::Add:
    case Op::Sub:
    case Op::Mul:
    case Op::Div:
    case Op::Pow:
      return apply_binary(e.op(), eval_impl(e.arg(0), lookup), eval_impl(e.arg(1), lookup));
    default:
      return apply_unary(e.op(), eval_impl(e.arg(0), lookup));
  }
}

// ---------------------------------------------------------------------------
// Printing

int precedence(const Expr& e) {
  switch (e.op()) {
    case Op::Add:
    case Op::Sub: return 1;
    case Op::Mul:
    case Op::Div: return 2;
    case Op::Neg: return 3;
    case Op::Pow: return 4;
    default: return 5;
  }
}

std::string format_number(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc{}) throw std::runtime_error("number formatting failed");
  return std::string(buf, end);
}

void print(std::ostream& os, const Expr& e, int min_prec);

void print_operand(std::ostream& os, const Expr& e, int min_prec, bool parenthesize_neg) {
  if (parenthesize_neg && e.op() == Op::Neg) {
    os << '(';
    print(os, e, 0);
    os << ')';
    return;
  }
  print(os, e, min_prec);
}

void print(std::ostream& os, const Expr& e, int min_prec) {
  const bool wrap = precedence(e) < min_prec;
  if (wrap) os << '(';
  switch (e.op()) {
    case Op::Const:
      if (std::signbit(e.value())) {
        os << "(-" << format_number(-e.value()) << ')';
      } else {
        os << format_number(e.value());
      }
      break;
    case Op::Var:
      os << e.name();
      break;
    case Op::Neg:
      os << '-';
      print(os, e.arg(0), 3);
      break;
    case Op::Add:
    case Op::Sub:
      print(os, e.arg(0), 1);
      os << (e.op() == Op::Add ? '+' : '-');
      print_operand(os, e.arg(1), 2, true);
      break;
    case Op::Mul:
    case Op::Div:
      print(os, e.arg(0), 2);
      os << (e.op() == Op::Mul ? '*' : '/');
      print_operand(os, e.arg(1), 3, true);
      break;
    case Op::Pow:
      print(os, e.arg(0), 5);
      os << '^';
      print(os, e.arg(1), 5);
      break;
    default:
      os << function_name(e.op()) << '(';
      print(os, e.arg(0), 0);
      os << ')';
      break;
  }
  if (wrap) os << ')';
}

// ---------------------------------------------------------------------------
// Parsing

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Expr parse() {
    Expr e = expr();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected character '" + std::string(1, text_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, pos_); }
  [[noreturn]] void fail_at(const std::string& what, std::size_t at) const {
    throw ParseError(what, at);
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  Expr expr() {
    Expr lhs = term();
    for (;;) {
      if (accept('+')) {
        lhs = lhs + term();
      } else if (accept('-')) {
        lhs = lhs - term();
      } else {
        return lhs;
      }
    }
  }

  Expr term() {
    Expr lhs = unary();
    for (;;) {
      if (accept('*')) {
        lhs = lhs * unary();
      } else if (accept('/')) {
        lhs = lhs / unary();
      } else {
        return lhs;
      }
    }
  }

  Expr unary() {
    if (accept('-')) return -unary();
    return power();
  }

  Expr power() {
    Expr base = atom();
    if (accept('^')) {
      const std::size_t at = pos_;
      Expr exponent = unary();
      if (!exponent.is_constant()) fail_at("exponent must be a constant", at);
      return pow(base, exponent);
    }
    return base;
  }

  static bool is_ident_start(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
  }
  static bool is_ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  }
  static bool is_digit(char c) { return c >= '0' && c <= '9'; }

  Expr atom() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Expr inner = expr();
      expect(')');
      return inner;
    }
    if (is_digit(c) || c == '.') return number();
    if (is_ident_start(c)) {
      const std::size_t start = pos_;
      while (pos_ < text_.size() && is_ident_char(text_[pos_])) ++pos_;
      const std::string name(text_.substr(start, pos_ - start));
      if (accept('(')) {
        std::vector<Expr> args{expr()};
        while (accept(',')) args.push_back(expr());
        expect(')');
        if (!is_function_name(name)) fail_at("unknown function '" + name + "'", start);
        if (args.size() != 1) {
          fail_at("function '" + name + "' takes 1 argument, got " + std::to_string(args.size()),
                  start);
        }
        return apply_function(name, args[0]);
      }
      return variable(name);
    }
    fail("unexpected character '" + std::string(1, c) + "'");
  }

  Expr number() {
    const std::size_t start = pos_;
    std::size_t digits = 0;
    while (pos_ < text_.size() && is_digit(text_[pos_])) ++pos_, ++digits;
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      while (pos_ < text_.size() && is_digit(text_[pos_])) ++pos_, ++digits;
    }
    if (digits == 0) fail_at("malformed number", start);
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t look = pos_ + 1;
      if (look < text_.size() && (text_[look] == '+' || text_[look] == '-')) ++look;
      if (look < text_.size() && is_digit(text_[look])) {
        pos_ = look;
        while (pos_ < text_.size() && is_digit(text_[pos_])) ++pos_;
      }
    }
    double v = 0.0;
    const char* first = text_.data() + start;
    const char* last = text_.data() + pos_;
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last || !std::isfinite(v)) fail_at("malformed number", start);
    return constant(v);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

// ---------------------------------------------------------------------------
// Construction

Expr::Expr() : Expr(constant(0.0)) {}

Expr Expr::make(Op op, double value, std::string name, std::vector<Expr> args) {
  return Expr(std::make_shared<const Node>(Node{op, value, std::move(name), std::move(args)}));
}

Expr constant(double v) {
  if (!std::isfinite(v)) throw std::invalid_argument("constant must be finite");
  return Expr::make(Op::Const, v, {}, {});
}

Expr variable(std::string name) {
  if (name.empty()) throw std::invalid_argument("variable name must be nonempty");
  return Expr::make(Op::Var, 0.0, std::move(name), {});
}

Expr operator-(const Expr& a) {
  if (a.is_constant()) return constant(-a.value());
  if (a.op() == Op::Neg) return a.arg(0);
  return Expr::make(Op::Neg, 0.0, {}, {a});
}

Expr operator+(const Expr& a, const Expr& b) {
  if (auto v = fold_binary(Op::Add, a, b)) return constant(*v);
  if (a.is_constant(0.0)) return b;
  if (b.is_constant(0.0)) return a;
  return Expr::make(Op::Add, 0.0, {}, {a, b});
}

Expr operator-(const Expr& a, const Expr& b) {
  if (auto v = fold_binary(Op::Sub, a, b)) return constant(*v);
  if (b.is_constant(0.0)) return a;
  if (a.is_constant(0.0)) return -b;
  return Expr::make(Op::Sub, 0.0, {}, {a, b});
}

Expr operator*(const Expr& a, const Expr& b) {
  if (auto v = fold_binary(Op::Mul, a, b)) return constant(*v);
  if (a.is_constant(0.0) || b.is_constant(0.0)) return constant(0.0);
  if (a.is_constant(1.0)) return b;
  if (b.is_constant(1.0)) return a;
  return Expr::make(Op::Mul, 0.0, {}, {a, b});
}

Expr operator/(const Expr& a, const Expr& b) {
  if (auto v = fold_binary(Op::Div, a, b)) return constant(*v);
  if (b.is_constant(1.0)) return a;
  if (a.is_constant(0.0) && !b.is_constant(0.0)) return constant(0.0);
  return Expr::make(Op::Div, 0.0, {}, {a, b});
}

Expr operator+(const Expr& a, double b) { return a + constant(b); }
Expr operator+(double a, const Expr& b) { return constant(a) + b; }
Expr operator-(const Expr& a, double b) { return a - constant(b); }
Expr operator-(double a, const Expr& b) { return constant(a) - b; }
Expr operator*(const Expr& a, double b) { return a * constant(b); }
Expr operator*(double a, const Expr& b) { return constant(a) * b; }
Expr operator/(const Expr& a, double b) { return a / constant(b); }
Expr operator/(double a, const Expr& b) { return constant(a) / b; }

Expr pow(const Expr& base, const Expr& exponent) {
  if (!exponent.is_constant()) throw std::invalid_argument("pow exponent must be a constant");
  if (exponent.value() == 0.0) return constant(1.0);
  if (exponent.value() == 1.0) return base;
  if (auto v = fold_binary(Op::Pow, base, exponent)) return constant(*v);
  return Expr::make(Op::Pow, 0.0, {}, {base, exponent});
}

Expr pow(const Expr& base, double exponent) { return pow(base, constant(exponent)); }
Expr sqrt(const Expr& a) { return fold_unary(Op::Sqrt, a); }
Expr cbrt(const Expr& a) { return fold_unary(Op::Cbrt, a); }
Expr tanh(const Expr& a) { return fold_unary(Op::Tanh, a); }
Expr sin(const Expr& a) { return fold_unary(Op::Sin, a); }
Expr cos(const Expr& a) { return fold_unary(Op::Cos, a); }
Expr exp(const Expr& a) { return fold_unary(Op::Exp, a); }
Expr log(const Expr& a) { return fold_unary(Op::Log, a); }

bool is_function_name(std::string_view name) {
  return name == "sqrt" || name == "cbrt" || name == "tanh" || name == "sin" || name == "cos" ||
         name == "exp" || name == "log";
}

Expr apply_function(std::string_view name, const Expr& a) {
  if (name == "sqrt") return sqrt(a);
  if (name == "cbrt") return cbrt(a);
  if (name == "tanh") return tanh(a);
  if (name == "sin") return sin(a);
  if (name == "cos") return cos(a);
  if (name == "exp") return exp(a);
  if (name == "log") return log(a);
  throw std::invalid_argument("unknown function '" + std::string(name) + "'");
}

// ---------------------------------------------------------------------------

Expr parse_expr(std::string_view text) { return Parser(text).parse(); }

std::string to_string(const Expr& e) {
  std::ostringstream os;
  print(os, e, 0);
  return os.str();
}

std::ostream& operator<<(std::ostream& os, const Expr& e) {
  print(os, e, 0);
  return os;
}

bool structurally_equal(const Expr& a, const Expr& b) {
  if (a.op() != b.op()) return false;
  switch (a.op()) {
    case Op::Const: return a.value() == b.value();
    case Op::Var: return a.name() == b.name();
    default: break;
  }
  if (a.args().size() != b.args().size()) return false;
  for (std::size_t i = 0; i < a.args().size(); ++i) {
    if (!structurally_equal(a.arg(i), b.arg(i))) return false;
  }
  return true;
}

namespace {
void collect_vars(const Expr& e, std::set<std::string>& out) {
  if (e.op() == Op::Var) {
    out.insert(e.name());
    return;
  }
  for (const auto& a : e.args()) collect_vars(a, out);
}
}  // namespace

std::set<std::string> free_variables(const Expr& e) {
  std::set<std::string> out;
  collect_vars(e, out);
  return out;
}

std::size_t node_count(const Expr& e) {
  std::size_t n = 1;
  for (const auto& a : e.args()) n += node_count(a);
  return n;
}

double eval(const Expr& e, const Bindings& bindings) {
  return eval_impl(e, [&](const std::string& name) {
    auto it = bindings.find(name);
    if (it == bindings.end()) throw UnboundVariable(name);
    return it->second;
  });
}

double eval(const Expr& e, std::span<const std::string> names, std::span<const double> values) {
  return eval_impl(e, [&](const std::string& name) {
    for (std::size_t i = 0; i < names.size(); ++i) {
      if (names[i] == name) return values[i];
    }
    throw UnboundVariable(name);
  });
}

Expr diff(const Expr& e, std::string_view var) {
  switch (e.op()) {
    case Op::Const:
      return constant(0.0);
    case Op::Var:
      return constant(e.name() == var ? 1.0 : 0.0);
    case Op::Neg:
      return -diff(e.arg(0), var);
    case Op::Add:
      return diff(e.arg(0), var) + diff(e.arg(1), var);
    case Op::Sub:
      return diff(e.arg(0), var) - diff(e.arg(1), var);
    case Op::Mul: {
      const Expr& a = e.arg(0);
      const Expr& b = e.arg(1);
      return diff(a, var) * b + a * diff(b, var);
    }
    case Op::Div: {
      const Expr& a = e.arg(0);
      const Expr& b = e.arg(1);
      const Expr da = diff(a, var);
      const Expr db = diff(b, var);
      if (db.is_constant(0.0)) return da / b;
      if (da.is_constant(0.0)) return -(a * db) / pow(b, 2.0);
      return (da * b - a * db) / pow(b, 2.0);
    }
    case Op::Pow: {
      const Expr& u = e.arg(0);
      const double c = e.arg(1).value();
      return constant(c) * pow(u, c - 1.0) * diff(u, var);
    }
    default:
      break;
  }
  const Expr& u = e.arg(0);
  const Expr du = diff(u, var);
  if (du.is_constant(0.0)) return constant(0.0);
  switch (e.op()) {
    case Op::Sqrt: return du / (2.0 * sqrt(u));
    case Op::Cbrt: return du / (3.0 * pow(cbrt(u), 2.0));
    case Op::Tanh: return du * (1.0 - pow(tanh(u), 2.0));
    case Op::Sin: return du * cos(u);
    case Op::Cos: return -(du * sin(u));
    case Op::Exp: return du * exp(u);
    case Op::Log: return du / u;
    default: throw std::logic_error("diff: unhandled op");
  }
}

Expr diff(const Expr& e, std::span<const std::string> vars) {
  Expr out = e;
  for (const auto& v : vars) out = diff(out, v);
  return out;
}

Expr substitute(const Expr& e, std::string_view var, const Expr& replacement) {
  std::map<std::string, Expr, std::less<>> m;
  m.emplace(std::string(var), replacement);
  return substitute(e, m);
}

Expr substitute(const Expr& e, const std::map<std::string, Expr, std::less<>>& replacements) {
  if (e.op() == Op::Var) {
    auto it = replacements.find(e.name());
    return it == replacements.end() ? e : it->second;
  }
  if (e.op() == Op::Const) return e;
  std::vector<Expr> args;
  args.reserve(e.args().size());
  for (const auto& a : e.args()) args.push_back(substitute(a, replacements));
  return rebuild(e, std::move(args));
}

}  // namespace gls
