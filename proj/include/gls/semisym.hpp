#pragma once

#include <Eigen/Dense>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gls/grid.hpp"
#include "gls/report.hpp"
#include "gls/smooth_map.hpp"

namespace gls {

/// A map V from a parameter box into M = base x value space. The last output
/// is the value coordinate; the others are base coordinates.
class ParametricFunction {
 public:
  /// `box` gives [lo, hi] per parameter; empty means unbounded.
  explicit ParametricFunction(SmoothMap v, std::vector<std::pair<double, double>> box = {});

  const SmoothMap& map() const { return v_; }
  const std::vector<std::pair<double, double>>& box() const { return box_; }
  std::size_t param_dim() const { return v_.in_dim(); }
  std::size_t base_dim() const { return v_.out_dim() - 1; }
  Eigen::VectorXd operator()(const Eigen::VectorXd& p) const { return v_(p); }
  /// The base coordinates as a map of the parameters.
  SmoothMap base_map() const;

 private:
  SmoothMap v_;
  std::vector<std::pair<double, double>> box_;
};

/// V_U(x) = (x, U(x)).
ParametricFunction canonical_parametric(const SmoothMap& u, std::vector<std::pair<double, double>> box = {});

/// f o V. Defined for every smooth f whose input arity matches V's output arity.
ParametricFunction act(const SmoothMap& f, const ParametricFunction& v);

/// The rotation (x, u) -> (x cos a - u sin a, x sin a + u cos a) of the last two
/// coordinates of `coords`, leaving the others fixed.
SmoothMap plane_rotation(const std::vector<std::string>& coords, double angle);
/// (x..., u) -> (x..., g(u)) where g is an expression in `value_var`.
SmoothMap vertical_map(const std::vector<std::string>& coords, const Expr& g, const std::string& value_var);
/// Whether f keeps every base coordinate and changes the value through the value coordinate only.
bool is_vertical(const SmoothMap& f);

struct GraphTolerance {
  /// Base points closer than this count as equal.
  double base = 1e-9;
  /// Values must differ by more than this to count as a collision.
  double value = 1e-6;
};

struct GraphCheck {
  bool graph = true;
  std::optional<Witness> witness;
};

/// Whether the image of V over the parameter grid is the graph of a function
/// of the base coordinates. Collisions between samples are searched on all
/// bases; folds of the base projection along parameter axis lines are searched
/// as well. The witness holds both parameter points and both images.
GraphCheck is_graph(const ParametricFunction& v, const SamplingGrid& grid, const GraphTolerance& tol = {});

/// A PDE T(x, D) U = 0 written with derivative markers D(U, x) and D(U, x, y)
/// (first and second order), e.g. "D(U,t) + U*D(U,x) - mu*D(U,x,x)".
class PdeResidual {
 public:
  /// `params` are named constants substituted into the residual.
  /// Throws std::invalid_argument for undeclared variables, markers of another
  /// unknown or markers above second order.
  PdeResidual(std::vector<std::string> vars, std::string unknown, std::string residual,
              std::map<std::string, double> params = {});

  const std::vector<std::string>& vars() const { return vars_; }
  const std::string& unknown() const { return unknown_; }
  const std::string& text() const { return text_; }
  /// The residual with markers replaced by placeholder variables.
  const Expr& templ() const { return templ_; }
  /// Variable orders of each marker in the residual.
  const std::vector<std::vector<std::string>>& markers() const { return markers_; }

  /// The residual with U and its derivatives replaced by those of `u`.
  Expr apply(const SmoothMap& u) const;
  /// Residual value from a jet: the independent variables, U and each marker's derivative.
  double evaluate(std::span<const double> x, double u, std::span<const double> derivatives) const;

 private:
  std::vector<std::string> vars_;
  std::string unknown_;
  std::string text_;
  Expr templ_;
  std::vector<std::vector<std::string>> markers_;
  std::vector<std::string> placeholders_;
};

/// max over the grid of |T(x, D) U|. U's inputs must be the PDE's variables.
/// A DomainError names the failing point.
double residual_max(const PdeResidual& pde, const SmoothMap& u, const SamplingGrid& grid);

/// Checks that f maps every family member to a solution.
///
/// Vertical maps are applied symbolically. A non-vertical map on a one-variable
/// PDE is re-graphed by inverting the monotone base coordinate. When f's image
/// is not a graph the report is inconclusive and carries the witness.
/// Throws PreconditionError when a family member is not itself a solution.
VerificationReport semi_symmetry_check(const PdeResidual& pde, const SmoothMap& f, const std::vector<SmoothMap>& family,
                                       const SamplingGrid& grid, double tol);

struct ConstrainedScan {
  std::vector<double> invariant;
  std::vector<double> violating;
  /// One violating point per violating parameter.
  std::vector<Witness> witnesses;
};

/// For each sampled parameter g, whether x -> family(g, x) keeps every sampled
/// point of S inside S. `family` has inputs (g, x1..xn) and n outputs.
ConstrainedScan constrained_symmetry_scan(const SmoothMap& family, const std::function<bool(const Eigen::VectorXd&)>& in_s,
                                          std::span<const double> params, const SamplingGrid& state_grid);

}  // namespace gls
