#pragma once

#include <Eigen/Dense>
#include <array>
#include <functional>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "gls/action.hpp"
#include "gls/enforcing.hpp"
#include "gls/grid.hpp"
#include "gls/report.hpp"
#include "gls/smooth_map.hpp"

namespace gls {

enum class SystemKind { Autonomous, NonAutonomous };

/// dY/dt = F(Y) or dY/dt = F(t, Y).
class OdeSystem {
 public:
  using ValidFn = std::function<bool(double, const Eigen::VectorXd&)>;

  /// rhs inputs are the state names; one output per state.
  static OdeSystem autonomous(SmoothMap rhs, ValidFn valid = {});
  /// rhs inputs are (t, state names...); one output per state.
  static OdeSystem nonautonomous(SmoothMap rhs, ValidFn valid = {});

  SystemKind kind() const { return kind_; }
  std::size_t dim() const { return rhs_.out_dim(); }
  const SmoothMap& rhs() const { return rhs_; }
  std::vector<std::string> state_variables() const;
  bool valid(double t, const Eigen::VectorXd& y) const { return !valid_ || valid_(t, y); }
  const ValidFn& validity() const { return valid_; }
  /// F evaluated at (t, y); t is ignored for autonomous systems.
  Eigen::VectorXd operator()(double t, const Eigen::VectorXd& y) const;

 private:
  OdeSystem(SystemKind kind, SmoothMap rhs, ValidFn valid);

  SystemKind kind_;
  SmoothMap rhs_;
  ValidFn valid_;
};

/// The autonomous system in (tau, y) with F_A(tau, y) = (1, F(tau, y)).
OdeSystem augment_system(const OdeSystem& sys);

/// dY/dt = 2t.
OdeSystem quadratic_system();
/// dY/dt = 1 / Y^2.
OdeSystem cuberoot_system();
/// The explicit branch ODE satisfied by sqrt_action, valid for t > 0.
OdeSystem sqrt_branch_system(Branch b);

struct FlowSettings {
  std::size_t steps = 1000;
  /// Integration starts at t_start + eps_start when positive.
  double eps_start = 0.0;
  /// Mesh t_k = a + (b - a) (k / steps)^grading; 1 is uniform.
  double grading = 1.0;
  /// State at the shifted start time; y0 is used when empty.
  std::function<Eigen::VectorXd(double)> start_state;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<Eigen::VectorXd> states;
  std::size_t steps = 0;
  double eps_start = 0.0;
  double grading = 1.0;

  const Eigen::VectorXd& final_state() const { return states.back(); }
};

/// One classical RK4 step.
template <class Vector, class Rhs>
Vector rk4_step(const Rhs& f, double t, const Vector& y, double h) {
  const Vector k1 = f(t, y);
  const Vector k2 = f(t + 0.5 * h, Vector(y + (0.5 * h) * k1));
  const Vector k3 = f(t + 0.5 * h, Vector(y + (0.5 * h) * k2));
  const Vector k4 = f(t + h, Vector(y + h * k3));
  return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

/// Fixed-mesh RK4 from t_start (+ eps_start) to t_end. Returns steps + 1 samples.
/// Throws std::invalid_argument for steps == 0, grading < 1 or an empty
/// interval, DomainError when the start is invalid and eps_start == 0, and
/// IntegrationError when the right-hand side fails or the state turns nonfinite.
Trajectory integrate_flow(const OdeSystem& sys, double t_start, const Eigen::VectorXd& y0, double t_end,
                          const FlowSettings& settings);

/// Header `t,y1,...,yl`, one row per sample, 17 significant digits.
void write_csv(std::ostream& os, const Trajectory& traj);

/// s -> E(s), a one-parameter evolution on [0, inf).
class OneTimeEvolution {
 public:
  using ValidFn = std::function<bool(double, const Eigen::VectorXd&)>;

  /// formula inputs are (s, x1..xn).
  static OneTimeEvolution closed_form(std::string name, SmoothMap formula, ValidFn valid = {});
  /// E(s) is the RK4 flow of an autonomous system over [0, s].
  static OneTimeEvolution numeric(std::string name, OdeSystem sys, FlowSettings settings);

  const std::string& name() const { return name_; }
  std::size_t dim() const { return dim_; }
  const std::optional<SmoothMap>& formula() const { return formula_; }
  bool valid(double s, const Eigen::VectorXd& x) const;
  /// Throws DomainError when (s, x) is not valid.
  Eigen::VectorXd operator()(double s, const Eigen::VectorXd& x) const;
  /// The evolution seen as a TimeAction on [0, inf).
  TimeAction as_action() const;

 private:
  std::string name_;
  std::size_t dim_ = 0;
  std::optional<SmoothMap> formula_;
  std::function<Eigen::VectorXd(double, const Eigen::VectorXd&)> map_;
  ValidFn valid_;
};

/// (t0, t) -> E(t0, t).
class TwoTimeEvolution {
 public:
  using ValidFn = std::function<bool(double, double, const Eigen::VectorXd&)>;

  /// formula inputs are (t0, t, y1..yl).
  static TwoTimeEvolution closed_form(std::string name, SmoothMap formula, TimeDomain domain, ValidFn valid = {});
  /// E(t0, t) is the RK4 flow of a non-autonomous system from t0 to t (either direction).
  static TwoTimeEvolution numeric(std::string name, OdeSystem sys, TimeDomain domain, FlowSettings settings);

  const std::string& name() const { return name_; }
  std::size_t dim() const { return dim_; }
  TimeDomain domain() const { return domain_; }
  const std::optional<SmoothMap>& formula() const { return formula_; }
  bool valid(double t0, double t, const Eigen::VectorXd& y) const;
  /// Throws DomainError when (t0, t, y) is not valid.
  Eigen::VectorXd operator()(double t0, double t, const Eigen::VectorXd& y) const;
  double operator()(double t0, double t, double y) const;
  /// (t, y) -> E(t0, t)(y) for a scalar state.
  std::function<double(double, double)> slice(double t0) const;

 private:
  std::string name_;
  std::size_t dim_ = 0;
  TimeDomain domain_ = TimeDomain::Full;
  std::optional<SmoothMap> formula_;
  std::function<Eigen::VectorXd(double, double, const Eigen::VectorXd&)> map_;
  ValidFn valid_;
};

/// max |E_A(s)(t, y)_1 - (t + s)| / (1 + |t + s|) over a grid in (s, t, y...).
VerificationReport first_component_check(const OneTimeEvolution& ea, const SamplingGrid& grid, double tol);

/// max ||E(s,r) E(t,s) y - E(t,r) y|| and ||E(s,t) E(t,s) y - y|| over the
/// grid, both scaled. Invalid points are skipped and counted.
VerificationReport two_time_law_check(const TwoTimeEvolution& e,
                                      std::span<const std::array<double, 3>> triples,
                                      const SamplingGrid& grid, double tol);

/// max ||E(r) E(s) x - E(s + r) x|| (scaled) over the grid.
VerificationReport one_time_law_check(const OneTimeEvolution& ea, std::span<const std::pair<double, double>> pairs,
                                      const SamplingGrid& grid, double tol);

/// The bounded-branch solution of y* + sqrt(t) y*^2 = y:
/// 2y / (1 + sqrt(1 + 4 sqrt(t) y)). Throws DomainError for t < 0 or a negative radicand.
double ystar_branch(double t, double y);
/// E(t, s)(y) = y* + sqrt(s) y*^2 with y* = ystar_branch(t, y), t, s >= 0.
double gls_two_time(double t, double s, double y);
/// The same operator as an expression in (t, s, y).
Expr gls_two_time_expr();
/// Closed-form two-time operator with inputs (t, s, y) on [0, inf).
TwoTimeEvolution gls_two_time_operator();
/// E_A(s)(t, y) = (t + s, E(t, t + s)(y)) on states (t, y) with t >= 0.
OneTimeEvolution gls_autonomous_operator();

/// E(t, s)(y) = s^2 - t^2 + y.
TwoTimeEvolution quadratic_two_time();
/// E_A(s)(t, y) = (t + s, s^2 + 2st + y).
OneTimeEvolution quadratic_autonomous();

struct RecoverySettings {
  double lo = -50.0;
  double hi = 50.0;
  std::size_t scan_points = 4001;
  std::size_t continuation_steps = 64;
  /// d/dy of the slice, used for Newton polishing and the condition number.
  std::function<double(double, double)> slice_derivative;
};

struct RecoveryResult {
  double value = 0.0;
  double ystar = 0.0;
  /// 1 / |d/dy E(t0, t)(y*)|; grows without bound at a fold.
  double condition = 0.0;
  /// Brackets of every root of E(t0, t)(.) = y in the search range.
  std::vector<std::pair<double, double>> brackets;
};

/// E(t, s)(y) = E(t0, s)(y*) where E(t0, t)(y*) = y, using only the t0 slice.
/// With several roots the one continuous in t from y* = y at t = t0 is kept.
/// Throws RootNotFound when no root is bracketed in [lo, hi] or continuation loses the branch.
RecoveryResult recover_evolution(const std::function<double(double, double)>& slice, double t0, double t, double s,
                                 double y, const RecoverySettings& settings = {});

/// Compares an integrated flow from t = 0 with a closed-form action at every
/// sample. The start state is the action's value at eps_start unless the
/// settings provide one. For augmented systems (one extra leading coordinate)
/// the trailing coordinates are compared at time tau = first coordinate.
/// Deviation: |flow - action| / (1 + |action|).
VerificationReport flow_vs_closed_form(const TimeAction& action, const OdeSystem& sys, const Eigen::VectorXd& y0,
                                       double t_end, const FlowSettings& settings, double tol);

}  // namespace gls
