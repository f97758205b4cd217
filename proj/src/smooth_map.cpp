#include "gls/smooth_map.hpp"

#include <set>
#include <stdexcept>

namespace gls {

SmoothMap::SmoothMap(std::vector<std::string> inputs, std::vector<Expr> outputs)
    : inputs_(std::move(inputs)), outputs_(std::move(outputs)) {
  if (outputs_.empty()) throw std::invalid_argument("SmoothMap needs at least one output");
  std::set<std::string> names;
  for (const auto& n : inputs_) {
    if (n.empty()) throw std::invalid_argument("SmoothMap input names must be nonempty");
    if (!names.insert(n).second) throw std::invalid_argument("duplicate SmoothMap input '" + n + "'");
  }
  for (const auto& e : outputs_) {
    for (const auto& v : free_variables(e)) {
      if (!names.count(v)) {
        throw std::invalid_argument("SmoothMap output references '" + v + "' which is not an input");
      }
    }
  }
}

SmoothMap SmoothMap::parse(std::vector<std::string> inputs, const std::vector<std::string>& outputs) {
  std::vector<Expr> exprs;
  exprs.reserve(outputs.size());
  for (const auto& s : outputs) exprs.push_back(parse_expr(s));
  return SmoothMap(std::move(inputs), std::move(exprs));
}

SmoothMap SmoothMap::identity(std::vector<std::string> vars) {
  std::vector<Expr> outs;
  for (const auto& v : vars) outs.push_back(variable(v));
  return SmoothMap(std::move(vars), std::move(outs));
}

std::size_t SmoothMap::input_index(std::string_view name) const {
  for (std::size_t i = 0; i < inputs_.size(); ++i) {
    if (inputs_[i] == name) return i;
  }
  return inputs_.size();
}

Eigen::VectorXd SmoothMap::operator()(const Eigen::VectorXd& x) const {
  if (static_cast<std::size_t>(x.size()) != in_dim()) {
    throw std::invalid_argument("SmoothMap: point has wrong dimension");
  }
  Eigen::VectorXd out(out_dim());
  const std::span<const double> values(x.data(), in_dim());
  for (std::size_t i = 0; i < out_dim(); ++i) out(i) = eval(outputs_[i], inputs_, values);
  return out;
}

double SmoothMap::component(std::size_t i, std::span<const double> x) const {
  return eval(outputs_.at(i), inputs_, x);
}

SmoothMap SmoothMap::partial(std::string_view var) const {
  std::vector<Expr> d;
  d.reserve(out_dim());
  for (const auto& e : outputs_) d.push_back(diff(e, var));
  return SmoothMap(inputs_, std::move(d));
}

Eigen::MatrixXd SmoothMap::jacobian(const Eigen::VectorXd& x) const {
  Eigen::MatrixXd j(out_dim(), in_dim());
  for (std::size_t c = 0; c < in_dim(); ++c) j.col(c) = partial(inputs_[c])(x);
  return j;
}

SmoothMap compose(const SmoothMap& outer, const SmoothMap& inner) {
  if (inner.out_dim() != outer.in_dim()) throw std::invalid_argument("compose: arity mismatch");
  std::map<std::string, Expr, std::less<>> repl;
  for (std::size_t i = 0; i < outer.in_dim(); ++i) repl.emplace(outer.inputs()[i], inner.output(i));
  std::vector<Expr> outs;
  for (const auto& e : outer.outputs()) outs.push_back(substitute(e, repl));
  return SmoothMap(inner.inputs(), std::move(outs));
}

double finite_diff(const SmoothMap& m, const Eigen::VectorXd& point, std::string_view var, double h,
                   std::size_t output) {
  if (!(h > 0.0)) throw std::invalid_argument("finite_diff: step must be positive");
  const std::size_t k = m.input_index(var);
  Eigen::VectorXd plus = point;
  Eigen::VectorXd minus = point;
  if (k < m.in_dim()) {
    plus(k) += h;
    minus(k) -= h;
  }
  const double fp = m.component(output, std::span<const double>(plus.data(), plus.size()));
  const double fm = m.component(output, std::span<const double>(minus.data(), minus.size()));
  return (fp - fm) / (2.0 * h);
}

}  // namespace gls
