#pragma once

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "gls/smooth_map.hpp"

namespace gls {

enum class TimeDomain { NonNegative, Full };

/// A one-parameter family y -> a(t, y) of self-maps of a state domain.
///
/// Formula-backed actions carry a SmoothMap whose first input is the time
/// variable and whose remaining inputs are the state coordinates; the state
/// dimension equals the number of outputs. Callable-backed actions are opaque
/// and cannot be sliced symbolically.
class TimeAction {
 public:
  using MapFn = std::function<Eigen::VectorXd(double, const Eigen::VectorXd&)>;
  using ValidFn = std::function<bool(double, const Eigen::VectorXd&)>;

  TimeAction(std::string name, SmoothMap formula, TimeDomain domain, ValidFn valid = {});
  TimeAction(std::string name, std::size_t dim, MapFn map, TimeDomain domain, ValidFn valid = {});

  const std::string& name() const { return name_; }
  std::size_t dim() const { return dim_; }
  TimeDomain domain() const { return domain_; }
  const std::optional<SmoothMap>& formula() const { return formula_; }

  bool time_in_domain(double t) const { return domain_ == TimeDomain::Full || t >= 0.0; }
  /// Time in domain and the validity predicate (if any) holds.
  bool valid(double t, const Eigen::VectorXd& y) const;

  /// Throws DomainError if t lies outside the time domain.
  Eigen::VectorXd operator()(double t, const Eigen::VectorXd& y) const;
  double operator()(double t, double y) const;

  /// The map a(t, .) as a SmoothMap in the state variables. Requires a formula.
  SmoothMap slice(double t) const;
  /// The time variable name of a formula-backed action.
  const std::string& time_variable() const;
  std::vector<std::string> state_variables() const;

 private:
  std::string name_;
  std::size_t dim_;
  TimeDomain domain_;
  std::optional<SmoothMap> formula_;
  MapFn map_;
  ValidFn valid_;
};

}  // namespace gls
