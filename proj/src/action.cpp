#include "gls/action.hpp"

#include <stdexcept>

namespace gls {

TimeAction::TimeAction(std::string name, SmoothMap formula, TimeDomain domain, ValidFn valid)
    : name_(std::move(name)),
      dim_(formula.out_dim()),
      domain_(domain),
      formula_(std::move(formula)),
      valid_(std::move(valid)) {
  if (formula_->in_dim() != dim_ + 1) {
    throw std::invalid_argument("TimeAction formula needs inputs (t, y1..yl) for l outputs");
  }
  map_ = [f = *formula_](double t, const Eigen::VectorXd& y) {
    Eigen::VectorXd x(y.size() + 1);
    x(0) = t;
    x.tail(y.size()) = y;
    return f(x);
  };
}

TimeAction::TimeAction(std::string name, std::size_t dim, MapFn map, TimeDomain domain, ValidFn valid)
    : name_(std::move(name)), dim_(dim), domain_(domain), map_(std::move(map)), valid_(std::move(valid)) {
  if (dim_ == 0) throw std::invalid_argument("TimeAction needs a positive state dimension");
}

bool TimeAction::valid(double t, const Eigen::VectorXd& y) const {
  if (!time_in_domain(t)) return false;
  return !valid_ || valid_(t, y);
}

Eigen::VectorXd TimeAction::operator()(double t, const Eigen::VectorXd& y) const {
  if (!time_in_domain(t)) throw DomainError(name_ + ": time " + std::to_string(t) + " outside [0,inf)");
  if (static_cast<std::size_t>(y.size()) != dim_) throw std::invalid_argument(name_ + ": state has wrong dimension");
  return map_(t, y);
}

double TimeAction::operator()(double t, double y) const {
  Eigen::VectorXd v(1);
  v(0) = y;
  return (*this)(t, v)(0);
}

SmoothMap TimeAction::slice(double t) const {
  if (!formula_) throw std::logic_error(name_ + ": slice requires a formula-backed action");
  if (!time_in_domain(t)) throw DomainError(name_ + ": time outside domain");
  const auto& in = formula_->inputs();
  std::vector<Expr> outs;
  for (const auto& e : formula_->outputs()) outs.push_back(substitute(e, in.front(), constant(t)));
  return SmoothMap(std::vector<std::string>(in.begin() + 1, in.end()), std::move(outs));
}

const std::string& TimeAction::time_variable() const {
  if (!formula_) throw std::logic_error(name_ + ": no formula");
  return formula_->inputs().front();
}

std::vector<std::string> TimeAction::state_variables() const {
  if (formula_) return {formula_->inputs().begin() + 1, formula_->inputs().end()};
  std::vector<std::string> names;
  for (std::size_t i = 0; i < dim_; ++i) names.push_back("y" + std::to_string(i + 1));
  return names;
}

}  // namespace gls
