#pragma once

#include <Eigen/Dense>
#include <span>
#include <string>
#include <vector>

#include "gls/action.hpp"
#include "gls/grid.hpp"
#include "gls/report.hpp"

namespace gls {

/// Time reparametrization g with g(0) = 0, g(1) = 1, used to deform the
/// identity into a target map.
class MediatorFunction {
 public:
  /// `g` is an expression in `var`. Throws std::invalid_argument unless
  /// g(0) = 0 and g(1) = 1 to 1e-12.
  explicit MediatorFunction(Expr g, std::string var = "t");
  /// g(t) = sqrt(t).
  static MediatorFunction square_root();

  const Expr& g() const { return g_; }
  const Expr& derivative() const { return dg_; }
  const std::string& var() const { return var_; }
  double value(double t) const;
  double slope(double t) const;
  /// g'(t) != 0 at `samples` evenly spaced points of (0, horizon].
  bool slope_nonzero_on(double horizon, std::size_t samples = 1000) const;

 private:
  Expr g_;
  Expr dg_;
  std::string var_;
};

/// Which root of the quadratic the explicit singular ODE uses.
/// Plus applies where 1 + 2 sqrt(t) y <= 0, Minus where it is >= 0.
enum class Branch { Plus, Minus };
bool branch_active(Branch b, double t, double y);

/// H(t,y) = y + sqrt(t) y^2 on [0,inf) x R.
TimeAction sqrt_action();
/// H(t,y) = (1 - g(t)) y + g(t) f(y). f must be square; its inputs must not use g's time variable.
TimeAction homotopy_action(const SmoothMap& f, const MediatorFunction& g);
/// H(t,y) = y + t y^2 on R x R.
TimeAction milder_action();
/// Y(t) = cbrt(3t + y^3) on R x R, the flow of dY/dt = 1/Y^2.
TimeAction cuberoot_group_action();

/// max |H(t,y) - K(sqrt t, y)| with K(s,y) = y + s y^2.
VerificationReport k_action_relation_check(const SamplingGrid& grid, double tol);

/// Right-hand side of the explicit singular ODE satisfied by sqrt_action,
/// as an expression in (t, H):
///   (1 + 2 sqrt(t) H -/+ sqrt(1 + 4 sqrt(t) H)) / (4 t sqrt(t)).
Expr sqrt_ode_rhs(Branch b);

/// |dH/dt - RHS| for sqrt_action at (t, y). Throws DomainError for t <= 0 or a
/// negative radicand and BranchMismatch when `b` does not apply at (t, y).
double ode_residual_explicit(double t, double y, Branch b);

/// Residual of the implicit ODE
///   (1 - g) Y' + g' Y = g' f((g' Y - g Y') / g')
/// along Y(t) = homotopy_action(f,g)(t,y), maxed with the errors of the
/// recovered y and f(y). Throws DomainError for t <= 0 or g'(t) = 0.
double ode_residual_homotopy(const SmoothMap& f, const MediatorFunction& g, double t,
                             const Eigen::VectorXd& y);

/// Checks ||a(eps,y) - y|| is nonincreasing along the decreasing sequence and
/// ends at or below tol. The sequence must be strictly decreasing and reach below 1e-8.
VerificationReport limit_ic_check(const TimeAction& a, const Eigen::VectorXd& y,
                                  std::span<const double> eps_sequence, double tol);

/// Regular: 1 + 2ty >= 0, RHS 2Y^2 / (1 + 2tY + sqrt(1 + 4tY)).
/// Singular: 1 + 2ty <= 0 and t != 0, RHS (1 + 2tY + sqrt(1 + 4tY)) / (2t^2).
enum class MilderBranch { Regular, Singular };
bool branch_active(MilderBranch b, double t, double y);
Expr milder_ode_rhs(MilderBranch b);
double ode_residual_milder(double t, double y, MilderBranch b);

struct DiffeoSample {
  double t = 0.0;
  bool diffeo = false;
  double min_slope = 0.0;
  double max_slope = 0.0;
  bool unbounded = false;
};

struct DiffeoTimeSet {
  std::vector<DiffeoSample> samples;
  /// Times where the classification flips, refined by bisection to 1e-7.
  std::vector<double> thresholds;
};

/// Classifies each t of a 1-D time grid: a(t,.) counts as a diffeomorphism when
/// da/dy keeps a strict sign over the y grid (extrema refined through the
/// zeros of d2a/dy2) and |a| grows past both ends of the grid.
DiffeoTimeSet diffeo_time_set(const TimeAction& a, const SamplingGrid& t_grid, const SamplingGrid& y_grid);

struct SlopeRange {
  double min = 0.0;
  double max = 0.0;
};

/// Extremes of f' over a 1-D grid, refined at the zeros of f''.
SlopeRange slope_range(const SmoothMap& f, const SamplingGrid& y_grid);

/// Range condition for (1 - sqrt t) y + sqrt t f(y): the slope 1 - s + s f'
/// (s = sqrt t) vanishes somewhere iff 1 - 1/s lies in the range of f'. Returns
/// the endpoints t = 1/(1 - min f')^2 and, when max f' < 1, t = 1/(1 - max f')^2.
std::vector<double> sqrt_homotopy_thresholds(const SmoothMap& f, const SamplingGrid& y_grid);

}  // namespace gls
