#pragma once

#include <Eigen/Dense>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gls/expr.hpp"

namespace gls {

/// A map R^m -> R^n given coordinate-wise by expressions in named inputs.
class SmoothMap {
 public:
  /// Throws std::invalid_argument if an output references a variable that is
  /// not an input, if input names repeat, or if there are no outputs.
  SmoothMap(std::vector<std::string> inputs, std::vector<Expr> outputs);

  /// Parses each output with parse_expr.
  static SmoothMap parse(std::vector<std::string> inputs, const std::vector<std::string>& outputs);
  /// The identity on the named coordinates.
  static SmoothMap identity(std::vector<std::string> vars);

  const std::vector<std::string>& inputs() const { return inputs_; }
  const std::vector<Expr>& outputs() const { return outputs_; }
  const Expr& output(std::size_t i) const { return outputs_.at(i); }
  std::size_t in_dim() const { return inputs_.size(); }
  std::size_t out_dim() const { return outputs_.size(); }
  /// Position of an input, or in_dim() when absent.
  std::size_t input_index(std::string_view name) const;

  Eigen::VectorXd operator()(const Eigen::VectorXd& x) const;
  double component(std::size_t i, std::span<const double> x) const;

  /// Coordinate-wise partial derivative with respect to an input.
  SmoothMap partial(std::string_view var) const;
  /// Symbolic Jacobian evaluated at x (out_dim x in_dim).
  Eigen::MatrixXd jacobian(const Eigen::VectorXd& x) const;

 private:
  std::vector<std::string> inputs_;
  std::vector<Expr> outputs_;
};

/// outer o inner. inner.out_dim() must equal outer.in_dim(); the result takes inner's inputs.
SmoothMap compose(const SmoothMap& outer, const SmoothMap& inner);

/// Central difference (m_i(x + h e_var) - m_i(x - h e_var)) / (2h).
double finite_diff(const SmoothMap& m, const Eigen::VectorXd& point, std::string_view var, double h,
                   std::size_t output = 0);

}  // namespace gls
