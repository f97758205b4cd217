#include <cmath>
#include <vector>

#include "doctest.h"
#include "gls/enforcing.hpp"
#include "gls/errors.hpp"
#include "gls/semigroup.hpp"

using namespace gls;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd out(v.size());
  Eigen::Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

}  // namespace

TEST_CASE("identity and composition hold for the cube-root flow") {
  const TimeAction a = cuberoot_group_action();
  const auto grid = SamplingGrid::line(-3, 3, 61);
  const auto id = identity_check(a, grid, 1e-12);
  CHECK(id.pass);
  CHECK(id.max_deviation <= 1e-15);
  CHECK(id.evaluated == 61);

  const std::vector<std::pair<double, double>> times{{0.5, 0.25}, {1, 2}, {-1, 0.5}};
  const auto comp = composition_check(a, times, grid, 1e-12);
  CHECK(comp.pass);
  CHECK(comp.evaluated == 3 * 61);
}

TEST_CASE("composition fails for the square-root action") {
  const TimeAction a = sqrt_action();
  const std::vector<std::pair<double, double>> times{{1, 1}};
  const auto r = composition_check(a, times, SamplingGrid::line(-1, 1, 3), 1e-9);
  CHECK_FALSE(r.pass);
  CHECK_FALSE(r.inconclusive);
  REQUIRE(r.witnesses.size() == 1);
  // H(1, H(1, 1)) = 6 against H(2, 1) = 1 + sqrt(2)
  CHECK(std::abs(a(1.0, a(1.0, 1.0)) - 6.0) < 1e-15);
  CHECK(r.max_deviation > 0.1);
}

TEST_CASE("composition rejects times outside the domain") {
  const std::vector<std::pair<double, double>> times{{-1, 0.5}};
  CHECK_THROWS_AS(composition_check(sqrt_action(), times, SamplingGrid::line(0, 1, 3), 1e-9), PreconditionError);
}

TEST_CASE("composition is inconclusive when most points are invalid") {
  const TimeAction a("guarded", SmoothMap::parse({"t", "y"}, {"y"}), TimeDomain::NonNegative,
                     [](double, const Eigen::VectorXd& y) { return y(0) > 0.9; });
  const std::vector<std::pair<double, double>> times{{0.5, 0.5}};
  const auto r = composition_check(a, times, SamplingGrid::line(-1, 1, 11), 1e-9);
  CHECK(r.inconclusive);
  CHECK_FALSE(r.pass);
  CHECK(r.skipped == 10);
}

TEST_CASE("noninvertibility witness collides") {
  const TimeAction a = sqrt_action();
  for (double t : {1e-6, 0.25, 1.0, 7.0, 1e4}) {
    const auto [y1, y2] = noninvertibility_witness_sqrt(t);
    CHECK(y1 != y2);
    CHECK(std::abs(a(t, y1) - a(t, y2)) <= 1e-12 * (1.0 + std::abs(a(t, y1))));
  }
  CHECK_THROWS_AS(noninvertibility_witness_sqrt(0.0), DomainError);
  CHECK_THROWS_AS(noninvertibility_witness_sqrt(-1.0), DomainError);
}

TEST_CASE("injectivity probe finds the fold of the square-root slice") {
  const TimeAction a = sqrt_action();
  const auto r = injectivity_probe(a.slice(1.0), SamplingGrid::line(-3, 3, 101), 1e-9);
  CHECK_FALSE(r.pass);
  CHECK_FALSE(r.inconclusive);
  REQUIRE_FALSE(r.witnesses.empty());
  for (const auto& w : r.witnesses) {
    REQUIRE(w.point.size() == 2);
    CHECK(w.point[0] != w.point[1]);
    CHECK(std::abs(w.value[0] - w.value[1]) <= 1e-9 * (1.0 + std::abs(w.value[1])));
  }
}

TEST_CASE("injectivity probe passes monotone maps") {
  const TimeAction a = cuberoot_group_action();
  const auto r = injectivity_probe(a.slice(2.0), SamplingGrid::line(-3, 3, 101), 1e-9);
  CHECK(r.pass);
  CHECK(r.witnesses.empty());
  CHECK(r.tolerance == 0.0);
}

TEST_CASE("injectivity probe works along axis lines in two dimensions") {
  const SmoothMap m = SmoothMap::parse({"x", "y"}, {"x", "y^2 - y"});
  const auto r = injectivity_probe(m, SamplingGrid({{-1, 1, 5}, {-2, 2, 41}}), 1e-9);
  CHECK_FALSE(r.pass);
  REQUIRE_FALSE(r.witnesses.empty());
  const auto& w = r.witnesses.front();
  CHECK(w.point[0] == doctest::Approx(w.point[2]));
  CHECK(w.point[1] + w.point[3] == doctest::Approx(1.0));

  const SmoothMap shear = SmoothMap::parse({"x", "y"}, {"x + y^3", "y"});
  CHECK(injectivity_probe(shear, SamplingGrid({{-1, 1, 11}, {-1, 1, 11}}), 1e-9).pass);
}

TEST_CASE("injectivity probe is inconclusive off the domain") {
  const SmoothMap m = SmoothMap::parse({"y"}, {"sqrt(y)"});
  const auto r = injectivity_probe(m, SamplingGrid::line(-3, -1, 11), 1e-9);
  CHECK(r.inconclusive);
  CHECK_FALSE(r.pass);
}

TEST_CASE("dichotomy classifies groups and rejects non-semigroups") {
  const std::vector<double> ts{0.0, 0.5, 1.0};
  const auto grid = SamplingGrid::line(-3, 3, 61);
  const auto cube = dichotomy_classify(cuberoot_group_action(), ts, grid, 1e-9);
  CHECK(cube.classification == Dichotomy::GroupLike);
  CHECK(cube.probes.size() == 2);

  const TimeAction trivial("identity", SmoothMap::parse({"t", "y"}, {"y"}), TimeDomain::NonNegative);
  CHECK(dichotomy_classify(trivial, ts, grid, 1e-9).classification == Dichotomy::GroupLike);

  CHECK_THROWS_AS(dichotomy_classify(sqrt_action(), ts, grid, 1e-9), PreconditionError);
  CHECK(std::string(to_string(Dichotomy::GenuineSemigroup)) == "genuine_semigroup");
}
