#include <cmath>

#include "doctest.h"
#include "expr_corpus.hpp"
#include "gls/expr.hpp"
#include "gls/smooth_map.hpp"

using namespace gls;

namespace {

Expr y() { return variable("y"); }
Expr t() { return variable("t"); }

double at(const Expr& e, Bindings b) { return eval(e, b); }

}  // namespace

TEST_CASE("parser builds the expected trees") {
  CHECK(structurally_equal(parse_expr("y + sqrt(t)*y^2"), Expr::make(Op::Add, 0, {}, {y(), sqrt(t()) * pow(y(), 2.0)})));
  CHECK(parse_expr("y").op() == Op::Var);
  CHECK(parse_expr("y").name() == "y");

  const Expr f = parse_expr("1/(y^2+1)");
  REQUIRE(f.op() == Op::Div);
  CHECK(f.arg(0).is_constant(1.0));
  CHECK(f.arg(1).op() == Op::Add);
  CHECK(structurally_equal(f.arg(1).arg(0), pow(y(), 2.0)));
  CHECK(f.arg(1).arg(1).is_constant(1.0));
}

TEST_CASE("precedence: power over unary minus over products over sums") {
  CHECK(at(parse_expr("-y^2"), {{"y", 3}}) == doctest::Approx(-9));
  CHECK(at(parse_expr("2^3^2"), {}) == doctest::Approx(512));
  CHECK(at(parse_expr("8/4/2"), {}) == doctest::Approx(1));
  CHECK(at(parse_expr("1-2-3"), {}) == doctest::Approx(-4));
  CHECK(at(parse_expr("2*-y"), {{"y", 3}}) == doctest::Approx(-6));
  CHECK(at(parse_expr("y^-1"), {{"y", 4}}) == doctest::Approx(0.25));
  CHECK(at(parse_expr("1.5e2 + .5"), {}) == doctest::Approx(150.5));
}

TEST_CASE("parse errors carry offsets") {
  try {
    parse_expr("y + foo(t)");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.offset() == 4);
    CHECK(std::string(e.what()).find("unknown function") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_expr("y +"), ParseError);
  CHECK_THROWS_AS(parse_expr("(y"), ParseError);
  CHECK_THROWS_AS(parse_expr("y^t"), ParseError);
  CHECK_THROWS_AS(parse_expr("sin(y, t)"), ParseError);
  CHECK_THROWS_AS(parse_expr("y $ t"), ParseError);
  try {
    parse_expr("y ) ");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.offset() == 2);
  }
}

TEST_CASE("eval") {
  CHECK(at(parse_expr("y + sqrt(t)*y^2"), {{"t", 4}, {"y", 3}}) == 21.0);
  CHECK(at(parse_expr("y"), {{"y", 7}}) == 7.0);
  CHECK_THROWS_AS(at(parse_expr("sqrt(t)"), {{"t", -1}}), DomainError);
  CHECK_THROWS_AS(at(parse_expr("log(t)"), {{"t", 0}}), DomainError);
  CHECK_THROWS_AS(at(parse_expr("1/t"), {{"t", 0}}), DomainError);
  CHECK_THROWS_AS(at(parse_expr("t^0.5"), {{"t", -2}}), DomainError);
  CHECK_THROWS_AS(at(parse_expr("y + t"), {{"y", 1}}), UnboundVariable);
  // cbrt is the odd extension.
  CHECK(at(parse_expr("cbrt(3*t + y^3)"), {{"t", -3}, {"y", 0}}) == doctest::Approx(-std::cbrt(9.0)));
  // tanh saturates instead of producing non-finite intermediates.
  CHECK(at(parse_expr("tanh(y)"), {{"y", 1e6}}) == 1.0);
  CHECK(at(parse_expr("tanh(y)"), {{"y", -400}}) == -1.0);
}

TEST_CASE("diff examples") {
  const Expr d = diff(parse_expr("y + t*y^2"), "y");
  for (double tv : {-1.0, 0.5, 2.0}) {
    for (double yv : {-2.0, 0.0, 3.0}) CHECK(at(d, {{"t", tv}, {"y", yv}}) == doctest::Approx(1 + 2 * tv * yv));
  }
  CHECK(diff(y(), "y").is_constant(1.0));
  CHECK(diff(t(), "y").is_constant(0.0));

  const Expr dt = diff(parse_expr("tanh(a*x)"), "x");
  const double a = 0.7, x = -1.3;
  const double th = std::tanh(a * x);
  CHECK(at(dt, {{"a", a}, {"x", x}}) == doctest::Approx(a * (1 - th * th)).epsilon(1e-14));
  CHECK(structurally_equal(dt, parse_expr("a*(1-tanh(a*x)^2)")));

  // sqrt'(u) is singular where u = 0.
  CHECK_THROWS_AS(at(diff(parse_expr("sqrt(t)"), "t"), {{"t", 0}}), DomainError);
}

TEST_CASE("substitute") {
  CHECK(to_string(substitute(parse_expr("y^2"), "y", parse_expr("sqrt(t)"))) == "sqrt(t)^2");
  CHECK(structurally_equal(substitute(y(), "y", y()), y()));

  // g(u) with u := h(t + x)
  const Expr g = parse_expr("u^3 - u");
  const Expr composed = substitute(g, "u", parse_expr("sin(t + x)"));
  CHECK(free_variables(composed) == std::set<std::string>{"t", "x"});
  const double s = std::sin(0.3 + 0.4);
  CHECK(at(composed, {{"t", 0.3}, {"x", 0.4}}) == doctest::Approx(s * s * s - s));

  // Simultaneous substitution swaps without capture.
  const Expr swapped = substitute(parse_expr("x - 2*u"), {{"x", variable("u")}, {"u", variable("x")}});
  CHECK(structurally_equal(swapped, parse_expr("u - 2*x")));
}

TEST_CASE("finite_diff examples") {
  const SmoothMap sq = SmoothMap::parse({"y"}, {"y^2"});
  Eigen::VectorXd p(1);
  p << 3;
  CHECK(std::abs(finite_diff(sq, p, "y", 1e-5) - 6.0) <= 1e-8);

  const SmoothMap c = SmoothMap::parse({"y"}, {"5"});
  CHECK(finite_diff(c, p, "y", 1e-5) == 0.0);

  const SmoothMap m = SmoothMap::parse({"t", "y"}, {"y + t*y^2"});
  Eigen::VectorXd q(2);
  q << 1, 2;
  CHECK(std::abs(finite_diff(m, q, "t", 1e-5) - 4.0) <= 1e-8);
  CHECK_THROWS_AS(finite_diff(m, q, "t", 0.0), std::invalid_argument);
}

TEST_CASE("property: symbolic derivative agrees with central differences") {
  testing::ExprGenerator gen({"x", "y", "z"}, 7);
  int checked = 0;
  for (int k = 0; k < 300; ++k) {
    const Expr e = gen.generate(4);
    const SmoothMap m(gen.vars(), {e});
    for (const auto& v : gen.vars()) {
      const Expr d = diff(e, v);
      const auto p = gen.point(-2, 2);
      const Eigen::VectorXd x = Eigen::Map<const Eigen::VectorXd>(p.data(), p.size());
      const double exact = eval(d, gen.vars(), p);
      const double fd = finite_diff(m, x, v, 1e-5);
      INFO("expr: " << e << "  d/d" << v << " at (" << p[0] << "," << p[1] << "," << p[2] << ")");
      CHECK(std::abs(exact - fd) <= 1e-6 * (1 + std::abs(exact)));
      ++checked;
    }
  }
  CHECK(checked == 900);
}

TEST_CASE("property: printing round-trips through the parser") {
  testing::ExprGenerator gen({"t", "y", "u"}, 11);
  for (int k = 0; k < 500; ++k) {
    const Expr e = gen.generate(5);
    const std::string text = to_string(e);
    INFO(text);
    CHECK(structurally_equal(parse_expr(text), e));
  }
  for (const char* s : {"-y^2", "(-y)^2", "y^(-1)", "-(a*b)", "(-2)*y", "a-(b-c)", "a/(b*c)", "(y^2)^3",
                        "sqrt(t)^2", "-sin(-x)", "2^0.5*x", "x*(-y)"}) {
    const Expr e = parse_expr(s);
    CHECK(structurally_equal(parse_expr(to_string(e)), e));
  }
}

TEST_CASE("property: substituting a variable by itself is the identity") {
  testing::ExprGenerator gen({"t", "y"}, 3);
  for (int k = 0; k < 200; ++k) {
    const Expr e = gen.generate(4);
    CHECK(structurally_equal(substitute(e, "y", variable("y")), e));
    CHECK(structurally_equal(substitute(e, "t", variable("t")), e));
  }
}

TEST_CASE("SmoothMap invariants") {
  CHECK_THROWS_AS(SmoothMap::parse({"y"}, {"y + t"}), std::invalid_argument);
  CHECK_THROWS_AS(SmoothMap({"y"}, {}), std::invalid_argument);
  CHECK_THROWS_AS(SmoothMap::parse({"y", "y"}, {"y"}), std::invalid_argument);

  const SmoothMap rot = SmoothMap::parse({"x", "u"}, {"-u", "x"});
  const SmoothMap twice = compose(rot, rot);
  Eigen::VectorXd p(2);
  p << 1.5, -0.5;
  CHECK(twice(p).isApprox(-p));
  const Eigen::MatrixXd j = rot.jacobian(p);
  CHECK(j(0, 0) == 0.0);
  CHECK(j(0, 1) == -1.0);
  CHECK(j(1, 0) == 1.0);
}
