#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "gls/evolution_pde.hpp"
#include "gls/semigroup.hpp"
#include "gls/semisym.hpp"

using namespace gls;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd out(v.size());
  Eigen::Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

// Hand-derived jet of the traveling wave W(xi), xi = x - x0 - c t:
// W = c - k T, W' = -k q (1 - T^2), W'' = 2 k q^2 T (1 - T^2), q = k / (2 mu).
struct Jet {
  double u, ut, ux, uxx;
};
Jet soliton_jet(double x0, double c, double d, double mu, double t, double x) {
  const double k = std::sqrt(c * c + d), q = k / (2.0 * mu);
  const double th = std::tanh(q * (x - x0 - c * t));
  const double w1 = -k * q * (1.0 - th * th);
  const double w2 = 2.0 * k * q * q * th * (1.0 - th * th);
  return {c - k * th, -c * w1, w1, w2};
}

}  // namespace

TEST_CASE("soliton values and parameter domain") {
  CHECK(burgers_soliton(0, 1, 1, 0.5)(vec({0, 0}))(0) == 1.0);
  CHECK(burgers_soliton(0.3, 0, 1, 1)(vec({0, 0.3}))(0) == 0.0);
  CHECK_THROWS_AS(burgers_soliton(0, 1, -1, 1), std::invalid_argument);
  CHECK_THROWS_AS(burgers_soliton(0, 1, 1, 0), std::invalid_argument);
  // Far from the centre tanh saturates instead of overflowing.
  CHECK(burgers_soliton(0, 1, 3, 0.01)(vec({0, 1e4}))(0) == -1.0);
}

TEST_CASE("soliton derivatives match the hand-derived jet") {
  const double x0 = 0.4, c = -0.7, d = 1.3, mu = 0.35;
  const SmoothMap u = burgers_soliton(x0, c, d, mu);
  const SmoothMap ut = u.partial("t"), ux = u.partial("x"), uxx = ux.partial("x");
  for (const auto& p : SamplingGrid({{0, 1, 5}, {-5, 5, 11}}).points()) {
    const Jet j = soliton_jet(x0, c, d, mu, p(0), p(1));
    CHECK(u(p)(0) == doctest::Approx(j.u).epsilon(1e-13));
    CHECK(ut(p)(0) == doctest::Approx(j.ut).epsilon(1e-12).scale(1));
    CHECK(ux(p)(0) == doctest::Approx(j.ux).epsilon(1e-12).scale(1));
    CHECK(uxx(p)(0) == doctest::Approx(j.uxx).epsilon(1e-12).scale(1));
    CHECK(std::abs(j.ut + j.u * j.ux - mu * j.uxx) <= 1e-10);
  }
}

TEST_CASE("Burgers residual") {
  const auto grid = SamplingGrid({{0, 1, 5}, {-5, 5, 5}});
  CHECK(burgers_residual(burgers_soliton(0, 1, 1, 0.5), 0.5, grid) <= 1e-8);
  CHECK(burgers_residual(SmoothMap::parse({"t", "x"}, {"3"}), 0.5, grid) == 0.0);
  CHECK(burgers_residual(SmoothMap::parse({"t", "x"}, {"x"}), 0.5, grid) == 5.0);

  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> cd(-2, 2), visc(0.1, 1), shift(-1, 1);
  const auto fine = SamplingGrid({{0, 1, 11}, {-5, 5, 41}});
  int tested = 0;
  while (tested < 20) {
    const double c = cd(rng), d = cd(rng), mu = visc(rng), x0 = shift(rng);
    if (!(c * c + d > 0)) continue;
    CHECK(burgers_residual(burgers_soliton(x0, c, d, mu), mu, fine) <= 1e-8);
    ++tested;
  }
}

TEST_CASE("linear parameter flow") {
  const ParamFlow flow = linear_soliton_flow();
  CHECK(flow.alpha_at(2, vec({1}), vec({3, 0}))(0) == 7.0);
  CHECK(flow.beta_at(2, vec({1}), vec({3, 0.5})) == vec({3, 0.5}));
  const auto r = param_flow_check(flow, SamplingGrid({{0, 2, 5}, {0, 2, 5}, {-3, 3, 5}, {-2, 2, 5}, {-1, 2, 4}}), 1e-12);
  CHECK(r.pass);
  CHECK(r.max_deviation <= 1e-15);

  const ParamFlow drifting("t", {"a"}, {"b"}, {parse_expr("a + t")}, {parse_expr("b + t")});
  CHECK(param_flow_check(drifting, SamplingGrid({{0, 1, 3}, {0, 1, 3}, {0, 1, 3}, {0, 1, 3}}), 1e-12).pass);
  const ParamFlow broken("t", {"a"}, {"b"}, {parse_expr("a + t^2")}, {variable("b")});
  const auto bad = param_flow_check(broken, SamplingGrid({{0, 1, 3}, {0, 1, 3}, {0, 1, 3}, {0, 1, 3}}), 1e-12);
  CHECK_FALSE(bad.pass);
  CHECK_FALSE(bad.witnesses.empty());
  CHECK_THROWS_AS(ParamFlow("t", {"a"}, {}, {parse_expr("a + z")}, {}), std::invalid_argument);
}

TEST_CASE("fixed-b alpha action is a group action") {
  const TimeAction a = linear_soliton_flow().alpha_action(vec({1.5, 0.2}));
  const auto grid = SamplingGrid::line(-3, 3, 31);
  CHECK(identity_check(a, grid, 1e-12).pass);
  const std::vector<std::pair<double, double>> times{{0.5, 1.0}, {2.0, 0.25}};
  CHECK(composition_check(a, times, grid, 1e-12).pass);
  const std::vector<double> ts{0.0, 1.0, 2.0};
  CHECK(dichotomy_classify(a, ts, grid, 1e-9).classification == Dichotomy::GroupLike);
}

TEST_CASE("soliton translation") {
  const ParamFlow flow = linear_soliton_flow();
  const auto grid = SamplingGrid({{0, 2, 9}, {-5, 5, 41}});
  const auto r = soliton_translation_check(flow, burgers_family(0.5), vec({0}), vec({1, 1}), grid, 1e-12);
  CHECK(r.pass);
  const auto still = soliton_translation_check(flow, burgers_family(1.0), vec({0.3}), vec({0, 1}), grid, 1e-12);
  CHECK(still.max_deviation == 0.0);

  const ParamFlow wrong("t", {"x0"}, {"c", "d"}, {parse_expr("x0 - c*t")}, {variable("c"), variable("d")});
  CHECK_FALSE(soliton_translation_check(wrong, burgers_family(0.5), vec({0}), vec({1, 1}), grid, 1e-12).pass);
}

TEST_CASE("heat kernel flow") {
  const SmoothMap k = heat_kernel();
  const PdeResidual heat({"t", "x"}, "U", "D(U,t) - D(U,x,x)");
  CHECK(std::abs(eval(heat.apply(k), {{"t", 1.0}, {"x", 0.0}})) <= 1e-12);
  const auto r = heat_flow_demo(SamplingGrid({{0.5, 2, 16}, {-4, 4, 33}}), 1e-10);
  CHECK(r.pass);
  CHECK_FALSE(r.notes.empty());
  CHECK_THROWS_AS(heat_flow_demo(SamplingGrid({{0, 2, 3}, {-1, 1, 3}}), 1e-10), std::invalid_argument);
}
