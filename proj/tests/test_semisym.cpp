#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "gls/errors.hpp"
#include "gls/semisym.hpp"

using namespace gls;

namespace {

const std::vector<std::string> kHs{"sin(z)", "z", "exp(z)", "z^3"};
const std::vector<std::string> kGs{"u^3 - u", "u^2", "tanh(u)"};

SmoothMap wave(const std::string& h) {
  return SmoothMap({"t", "x"}, {substitute(parse_expr(h), "z", parse_expr("t + x"))});
}

Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd out(v.size());
  Eigen::Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

const PdeResidual kTransport({"t", "x"}, "U", "D(U,t) - D(U,x)");

}  // namespace

TEST_CASE("canonical parametric representation") {
  const auto v = canonical_parametric(SmoothMap::parse({"x"}, {"x^2"}));
  CHECK(v(vec({3}))== vec({3, 9}));
  CHECK(canonical_parametric(SmoothMap::parse({"x"}, {"0"}))(vec({2})) == vec({2, 0}));
  const auto w = canonical_parametric(wave("sin(z)"));
  CHECK(w(vec({0.1, 0.2})).isApprox(vec({0.1, 0.2, std::sin(0.3)})));
  CHECK(w.base_dim() == 2);
  CHECK_THROWS_AS(canonical_parametric(SmoothMap::parse({"x"}, {"x", "x"})), std::invalid_argument);
}

TEST_CASE("act is functorial") {
  const auto v = canonical_parametric(SmoothMap::parse({"x"}, {"x^2"}));
  const SmoothMap id = SmoothMap::identity({"x", "u"});
  const auto same = act(id, v);
  for (std::size_t i = 0; i < 2; ++i) CHECK(structurally_equal(same.map().output(i), v.map().output(i)));

  const SmoothMap f = SmoothMap::parse({"x", "u"}, {"x + u", "u*u - x"});
  const SmoothMap h = plane_rotation({"x", "u"}, 0.3);
  const auto two_step = act(f, act(h, v));
  const auto one_step = act(compose(f, h), v);
  for (const auto& p : SamplingGrid::line(-2, 2, 41).points()) {
    CHECK((two_step(p) - one_step(p)).norm() <= 1e-12 * (1.0 + one_step(p).norm()));
  }
  CHECK_THROWS_AS(act(SmoothMap::identity({"a", "b", "c"}), v), std::invalid_argument);
}

TEST_CASE("rotated parabola") {
  const auto v = canonical_parametric(SmoothMap::parse({"x"}, {"x^2"}));
  const auto grid = SamplingGrid::line(-2, 2, 401);
  const auto quarter = is_graph(act(plane_rotation({"x", "u"}, std::numbers::pi / 4), v), grid);
  CHECK_FALSE(quarter.graph);
  REQUIRE(quarter.witness);
  const auto& w = *quarter.witness;
  CHECK(std::abs(w.value[0] - w.value[2]) <= 1e-9);
  CHECK(std::abs(w.value[1] - w.value[3]) > 1e-6);
  // Oracle: x' = (x - x^2)/sqrt 2 is symmetric about x = 1/2.
  CHECK(w.point[0] + w.point[1] == doctest::Approx(1.0).epsilon(1e-6));

  CHECK(is_graph(act(plane_rotation({"x", "u"}, std::numbers::pi), v), grid).graph);
  CHECK(is_graph(v, grid).graph);
}

TEST_CASE("fold detection without sample collisions") {
  // x' = x - x^3/3 folds at x = 1, and the grid is chosen so that no two samples share x'.
  const ParametricFunction v(SmoothMap::parse({"s"}, {"s - s^3/3", "s"}));
  const auto g = is_graph(v, SamplingGrid::line(-0.3, 1.97, 37));
  CHECK_FALSE(g.graph);
  REQUIRE(g.witness);
  CHECK(g.witness->note == "base projection folds");
}

TEST_CASE("graphs stay graphs under vertical maps") {
  const auto grid = SamplingGrid({{-1, 1, 11}, {-1, 1, 11}});
  for (const auto& h : kHs) {
    const auto v = canonical_parametric(wave(h));
    CHECK(is_graph(v, grid).graph);
    for (const auto& g : kGs) {
      const SmoothMap f = vertical_map({"t", "x", "u"}, parse_expr(g), "u");
      CHECK(is_vertical(f));
      CHECK(is_graph(act(f, v), grid).graph);
    }
  }
  CHECK_FALSE(is_vertical(plane_rotation({"t", "x", "u"}, 0.1)));
  CHECK_FALSE(is_vertical(SmoothMap::parse({"x", "u"}, {"x", "u + x"})));
}

TEST_CASE("PDE residual parsing") {
  CHECK(kTransport.markers().size() == 2);
  const PdeResidual burgers({"t", "x"}, "U", "D(U,t) + U*D(U,x) - mu*D(U, x, x)", {{"mu", 0.5}});
  CHECK(burgers.markers().size() == 3);
  const PdeResidual mixed({"t", "x"}, "U", "D(U,x,t) - D(U,t,x)");
  CHECK(mixed.markers().size() == 1);
  CHECK_THROWS_AS(PdeResidual({"t", "x"}, "U", "D(U,y)"), std::invalid_argument);
  CHECK_THROWS_AS(PdeResidual({"t", "x"}, "U", "D(V,t)"), std::invalid_argument);
  CHECK_THROWS_AS(PdeResidual({"t", "x"}, "U", "D(U,t,t,t)"), std::invalid_argument);
  CHECK_THROWS_AS(PdeResidual({"t", "x"}, "U", "D(U,t) - nu"), std::invalid_argument);
}

TEST_CASE("residual_max") {
  const auto grid = SamplingGrid({{0, 1, 21}, {0, 1, 21}});
  CHECK(residual_max(kTransport, wave("sin(z)"), grid) <= 1e-14);
  CHECK(residual_max(kTransport, SmoothMap::parse({"t", "x"}, {"t"}), grid) == 1.0);
  CHECK(residual_max(kTransport, SmoothMap::parse({"x", "t"}, {"sin(t + x)"}), grid) <= 1e-14);
  CHECK_THROWS_AS(residual_max(kTransport, SmoothMap::parse({"t", "x"}, {"sqrt(t - 2)"}), grid), DomainError);
  CHECK_THROWS_AS(residual_max(kTransport, SmoothMap::parse({"t", "y"}, {"t"}), grid), std::invalid_argument);
}

TEST_CASE("semi-symmetry closure of the transport equation") {
  const auto grid = SamplingGrid({{0, 1, 21}, {0, 1, 21}});
  for (const auto& g : kGs) {
    for (const auto& h : kHs) {
      const Expr composed = substitute(parse_expr(g), "u", wave(h).output(0));
      CHECK(residual_max(kTransport, SmoothMap({"t", "x"}, {composed}), grid) <= 1e-12);
    }
  }
  std::vector<SmoothMap> family;
  for (const auto& h : {"sin(z)", "z", "exp(z)"}) family.push_back(wave(h));
  const auto r = semi_symmetry_check(kTransport, vertical_map({"t", "x", "u"}, parse_expr("u^3 - u"), "u"), family,
                                     grid, 1e-12);
  CHECK(r.pass);
  CHECK(r.evaluated == 3);
  CHECK(semi_symmetry_check(kTransport, SmoothMap::identity({"t", "x", "u"}), family, grid, 1e-12).pass);

  const std::vector<SmoothMap> bad{SmoothMap::parse({"t", "x"}, {"t"})};
  CHECK_THROWS_AS(semi_symmetry_check(kTransport, SmoothMap::identity({"t", "x", "u"}), bad, grid, 1e-12),
                  PreconditionError);
}

TEST_CASE("non-vertical maps") {
  const auto grid = SamplingGrid({{0, 1, 21}, {0, 1, 21}});
  const std::vector<SmoothMap> family{wave("z")};
  const auto r = semi_symmetry_check(kTransport, plane_rotation({"t", "x", "u"}, std::numbers::pi / 4), family, grid, 1e-12);
  CHECK(r.inconclusive);
  CHECK_FALSE(r.pass);
  REQUIRE(r.witnesses.size() == 1);

  // One-variable equations are re-graphed through the base coordinate.
  const auto line = SamplingGrid::line(-1, 1, 41);
  const PdeResidual growth({"x"}, "U", "D(U,x) - U");
  const std::vector<SmoothMap> exps{SmoothMap::parse({"x"}, {"exp(x)"}), SmoothMap::parse({"x"}, {"3*exp(x)"})};
  const SmoothMap shift = SmoothMap::parse({"x", "u"}, {"x + 0.7", "u*exp(0.7)"});
  const auto g = semi_symmetry_check(growth, shift, exps, line, 1e-12);
  CHECK(g.pass);
  CHECK(g.evaluated == 2);

  const PdeResidual oscillator({"x"}, "U", "D(U,x,x) + U");
  const std::vector<SmoothMap> waves{SmoothMap::parse({"x"}, {"sin(x)"})};
  CHECK(semi_symmetry_check(oscillator, SmoothMap::parse({"x", "u"}, {"2 - x", "u"}), waves, line, 1e-12).pass);
  CHECK_FALSE(semi_symmetry_check(oscillator, SmoothMap::parse({"x", "u"}, {"2*x", "u"}), waves, line, 1e-6).pass);
}

TEST_CASE("constrained symmetries") {
  const SmoothMap scaling = SmoothMap::parse({"g", "x", "y"}, {"g*x", "y"});
  const auto strip = [](const Eigen::VectorXd& p) { return std::abs(p(0)) < 1.0; };
  const std::vector<double> gs{0.25, 0.5, 1.0, 1.5};
  const auto scan = constrained_symmetry_scan(scaling, strip, gs, SamplingGrid({{-1, 1, 41}, {-2, 2, 5}}));
  CHECK(scan.invariant == std::vector<double>{0.25, 0.5, 1.0});
  CHECK(scan.violating == std::vector<double>{1.5});
  REQUIRE(scan.witnesses.size() == 1);
  CHECK(std::abs(scan.witnesses[0].value[0]) >= 1.0);

  const SmoothMap translate = SmoothMap::parse({"c", "x", "u"}, {"x", "u + c"});
  const auto positive = [](const Eigen::VectorXd& p) { return p(1) > 0.0; };
  const std::vector<double> cs{-2.0, -0.5, 0.0, 1.0, 3.0};
  // The solution U = 1 of dU/dx = 0: its graph points (x, 1).
  const auto t = constrained_symmetry_scan(translate, positive, cs, SamplingGrid({{0, 1, 11}, {0.5, 1, 2}}));
  CHECK(t.invariant == std::vector<double>{0.0, 1.0, 3.0});
  CHECK(t.violating == std::vector<double>{-2.0, -0.5});
}
