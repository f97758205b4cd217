#include <cmath>
#include <vector>

#include "doctest.h"
#include "gls/enforcing.hpp"
#include "gls/errors.hpp"
#include "gls/semigroup.hpp"

using namespace gls;

namespace {

const SmoothMap kSquare = SmoothMap::parse({"y"}, {"y^2"});
const SmoothMap kBump = SmoothMap::parse({"y"}, {"1/(y^2+1)"});

Eigen::VectorXd vec1(double v) {
  Eigen::VectorXd out(1);
  out(0) = v;
  return out;
}

// Diffeomorphism thresholds of (1 - sqrt t) y + sqrt t / (y^2 + 1):
// max |f'| = 3 sqrt(3) / 8 at y = 1/sqrt(3); the slope 1 - s + s f' changes
// sign when (1 - s)/s = 3 sqrt(3)/8 or (s - 1)/s = 3 sqrt(3)/8, s = sqrt t.
double oracle_lower() { return 64.0 / std::pow(8.0 + 3.0 * std::sqrt(3.0), 2); }
double oracle_upper() { return 64.0 / std::pow(8.0 - 3.0 * std::sqrt(3.0), 2); }

}  // namespace

TEST_CASE("mediator function validation") {
  const auto g = MediatorFunction::square_root();
  CHECK(g.value(0.25) == doctest::Approx(0.5));
  CHECK(g.slope(0.25) == doctest::Approx(1.0));
  CHECK(g.slope_nonzero_on(10.0));
  CHECK_NOTHROW(MediatorFunction(parse_expr("t^2")));
  CHECK_THROWS_AS(MediatorFunction(parse_expr("t + 1")), std::invalid_argument);
  CHECK_THROWS_AS(MediatorFunction(parse_expr("2*t")), std::invalid_argument);
  CHECK_THROWS_AS(MediatorFunction(parse_expr("t*y")), std::invalid_argument);
  CHECK_FALSE(MediatorFunction(parse_expr("t - t^2/2 + t^2/2")).g().is_constant());
  CHECK_FALSE(MediatorFunction(parse_expr("(3*t - t^3)/2")).slope_nonzero_on(2.0, 200));
}

TEST_CASE("concrete actions evaluate as expected") {
  const TimeAction h = sqrt_action();
  CHECK(h(0.0, 5.0) == 5.0);
  CHECK(h(1.0, 2.0) == 6.0);
  CHECK(h(4.0, -0.5) == 0.0);
  CHECK_THROWS_AS(h(-1.0, 1.0), DomainError);

  const auto g = MediatorFunction::square_root();
  CHECK(homotopy_action(kSquare, g)(1.0, 3.0) == doctest::Approx(9.0));
  CHECK(homotopy_action(kBump, g)(1.0, 0.0) == doctest::Approx(1.0));
  CHECK(homotopy_action(kBump, g)(0.0, 0.7) == 0.7);
  CHECK_THROWS_AS(homotopy_action(SmoothMap::parse({"x", "y"}, {"x*y"}), g), std::invalid_argument);
  CHECK_THROWS_AS(homotopy_action(SmoothMap::parse({"t"}, {"t^2"}), g), std::invalid_argument);

  const TimeAction m = milder_action();
  CHECK(m(0.0, 4.0) == 4.0);
  CHECK(m(-1.0, 1.0) == 0.0);
  CHECK(m(2.0, 1.0) == 3.0);

  const TimeAction c = cuberoot_group_action();
  CHECK(c(0.0, 2.0) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(c(1.0 / 3.0, 0.0) == doctest::Approx(1.0).epsilon(1e-15));
  const std::vector<std::pair<double, double>> times{{1, 2}};
  CHECK(composition_check(c, times, SamplingGrid::line(-4, 4, 81), 1e-12).pass);
}

TEST_CASE("K relation") {
  const auto r = k_action_relation_check(SamplingGrid({{0, 9, 31}, {-3, 3, 31}}), 1e-12);
  CHECK(r.pass);
  CHECK(r.evaluated == 31 * 31);
}

TEST_CASE("explicit branch ODE") {
  CHECK(ode_residual_explicit(1.0, 1.0, Branch::Minus) <= 1e-12);
  CHECK(ode_residual_explicit(1.0, -2.0, Branch::Plus) <= 1e-12);
  CHECK_THROWS_AS(ode_residual_explicit(1.0, 1.0, Branch::Plus), BranchMismatch);
  CHECK_THROWS_AS(ode_residual_explicit(0.0, 1.0, Branch::Minus), DomainError);
  // Both branches apply on the fold line.
  CHECK(ode_residual_explicit(1.0, -0.5, Branch::Plus) <= 1e-12);
  CHECK(ode_residual_explicit(1.0, -0.5, Branch::Minus) <= 1e-12);
  // The wrong root gives a visible residual.
  CHECK(std::abs(eval(sqrt_ode_rhs(Branch::Plus), {{"t", 1.0}, {"H", 2.0}}) - 0.5) > 1.0);

  double worst = 0.0;
  for (const auto& p : SamplingGrid({{1e-3, 10, 50}, {-5, 5, 50}}).points()) {
    const double t = p(0), y = p(1);
    for (Branch b : {Branch::Plus, Branch::Minus}) {
      if (!branch_active(b, t, y)) continue;
      try {
        worst = std::max(worst, ode_residual_explicit(t, y, b));
      } catch (const DomainError&) {
      }
    }
  }
  CHECK(worst <= 1e-10);
}

TEST_CASE("homotopy ODE") {
  const auto g = MediatorFunction::square_root();
  CHECK(ode_residual_homotopy(kSquare, g, 0.25, vec1(2.0)) <= 1e-10);
  CHECK(ode_residual_homotopy(kBump, g, 1.0, vec1(1.0)) <= 1e-10);
  const SmoothMap id = SmoothMap::identity({"y"});
  CHECK(ode_residual_homotopy(id, g, 3.0, vec1(-7.0)) <= 1e-14);
  CHECK_THROWS_AS(ode_residual_homotopy(kSquare, g, 0.0, vec1(1.0)), DomainError);
  CHECK_THROWS_AS(ode_residual_homotopy(kSquare, MediatorFunction(parse_expr("(3*t - t^3)/2")), 1.0, vec1(1.0)),
                  DomainError);

  const SmoothMap planar = SmoothMap::parse({"x", "y"}, {"x*y", "sin(x) + y^2"});
  double worst = 0.0;
  for (const auto& p : SamplingGrid({{1e-3, 10, 20}, {-3, 3, 13}, {-3, 3, 13}}).points()) {
    worst = std::max(worst, ode_residual_homotopy(planar, g, p(0), p.tail(2)));
    worst = std::max(worst, ode_residual_homotopy(kBump, g, p(0), p.segment(1, 1)));
    worst = std::max(worst, ode_residual_homotopy(kSquare, g, p(0), p.segment(1, 1)));
  }
  CHECK(worst <= 1e-9);
}

TEST_CASE("limit of the initial condition") {
  const std::vector<double> eps{1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7, 1e-8, 1e-9, 1e-10};
  // (1 + 1e-5) - 1 is only accurate to about 1e-16 absolute.
  const auto r = limit_ic_check(sqrt_action(), vec1(1.0), eps, 1e-5 + 1e-15);
  CHECK(r.pass);
  CHECK(r.max_deviation == doctest::Approx(std::sqrt(1e-10)).epsilon(1e-10));

  const auto g = MediatorFunction::square_root();
  const auto hom = limit_ic_check(homotopy_action(kSquare, g), vec1(2.0), eps, 1e-4);
  CHECK(hom.max_deviation == doctest::Approx(2.0 * std::sqrt(1e-10)).epsilon(1e-9));

  const TimeAction still("still", SmoothMap::parse({"t", "y"}, {"y"}), TimeDomain::NonNegative);
  CHECK(limit_ic_check(still, vec1(3.0), eps, 0.0).max_deviation == 0.0);

  const std::vector<double> increasing{1e-3, 1e-2, 1e-9};
  CHECK_THROWS_AS(limit_ic_check(sqrt_action(), vec1(1.0), increasing, 1.0), PreconditionError);
  const std::vector<double> short_seq{1e-2, 1e-4};
  CHECK_THROWS_AS(limit_ic_check(sqrt_action(), vec1(1.0), short_seq, 1.0), PreconditionError);

  const TimeAction grows("grows", SmoothMap::parse({"t", "y"}, {"y + 1/(1 + 1e6*t)"}), TimeDomain::NonNegative);
  const auto bad = limit_ic_check(grows, vec1(0.0), eps, 1e-3);
  CHECK_FALSE(bad.pass);
  CHECK(bad.failures > 0);
}

TEST_CASE("square-root action is not C1 at t = 0") {
  const TimeAction h = sqrt_action();
  for (double y : {0.5, 1.0, 3.0}) {
    for (double eps = 1e-2; eps >= 1e-8; eps /= 10) {
      const double quotient = (h(eps, y) - h(0.0, y)) / eps;
      CHECK(quotient >= 0.4 * y * y / std::sqrt(eps));
    }
  }
}

TEST_CASE("milder action ODE branches") {
  CHECK(ode_residual_milder(1.0, 1.0, MilderBranch::Regular) <= 1e-12);
  CHECK(ode_residual_milder(0.0, 3.0, MilderBranch::Regular) == 0.0);
  CHECK(ode_residual_milder(-1.0, 1.0, MilderBranch::Singular) <= 1e-12);
  CHECK_THROWS_AS(ode_residual_milder(0.0, 3.0, MilderBranch::Singular), DomainError);
  CHECK_THROWS_AS(ode_residual_milder(1.0, 1.0, MilderBranch::Singular), BranchMismatch);

  double worst = 0.0;
  for (const auto& p : SamplingGrid({{-5, 5, 50}, {-5, 5, 50}}).points()) {
    for (MilderBranch b : {MilderBranch::Regular, MilderBranch::Singular}) {
      if (!branch_active(b, p(0), p(1))) continue;
      try {
        worst = std::max(worst, ode_residual_milder(p(0), p(1), b));
      } catch (const DomainError&) {
      }
    }
  }
  CHECK(worst <= 1e-10);
}

TEST_CASE("diffeomorphism time set of the bump homotopy") {
  const TimeAction a = homotopy_action(kBump, MediatorFunction::square_root());
  const auto set = diffeo_time_set(a, SamplingGrid::line(0, 12, 121), SamplingGrid::line(-5, 5, 201));
  auto at = [&](double t) {
    for (const auto& s : set.samples) {
      if (std::abs(s.t - t) < 1e-9) return s.diffeo;
    }
    FAIL("missing sample");
    return false;
  };
  CHECK(at(0.0));
  CHECK(at(0.1));
  CHECK_FALSE(at(1.0));
  CHECK(at(10.0));
  REQUIRE(set.thresholds.size() == 2);
  CHECK(std::abs(set.thresholds[0] - oracle_lower()) <= 1e-6);
  CHECK(std::abs(set.thresholds[1] - oracle_upper()) <= 1e-6);
  CHECK(oracle_lower() == doctest::Approx(0.36752).epsilon(1e-4));
  CHECK(oracle_upper() == doctest::Approx(8.1409).epsilon(1e-4));

  const TimeAction still("still", SmoothMap::parse({"t", "y"}, {"y"}), TimeDomain::NonNegative);
  const auto all = diffeo_time_set(still, SamplingGrid::line(0, 5, 11), SamplingGrid::line(-2, 2, 21));
  CHECK(all.thresholds.empty());
  for (const auto& s : all.samples) CHECK(s.diffeo);
}

TEST_CASE("range-condition thresholds") {
  const auto r = slope_range(kBump, SamplingGrid::line(-5, 5, 201));
  CHECK(r.max == doctest::Approx(3.0 * std::sqrt(3.0) / 8.0).epsilon(1e-14));
  CHECK(r.min == doctest::Approx(-3.0 * std::sqrt(3.0) / 8.0).epsilon(1e-14));
  const auto t = sqrt_homotopy_thresholds(kBump, SamplingGrid::line(-5, 5, 201));
  REQUIRE(t.size() == 2);
  CHECK(t[0] == doctest::Approx(oracle_lower()).epsilon(1e-13));
  CHECK(t[1] == doctest::Approx(oracle_upper()).epsilon(1e-13));
  CHECK(sqrt_homotopy_thresholds(SmoothMap::parse({"y"}, {"y"}), SamplingGrid::line(-1, 1, 5)).empty());
}
