#include "gls/evolution_pde.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

#include "gls/semigroup.hpp"
#include "gls/semisym.hpp"

namespace gls {

namespace {

Eigen::VectorXd join(std::initializer_list<Eigen::VectorXd> parts) {
  Eigen::Index n = 0;
  for (const auto& p : parts) n += p.size();
  Eigen::VectorXd out(n);
  Eigen::Index at = 0;
  for (const auto& p : parts) {
    out.segment(at, p.size()) = p;
    at += p.size();
  }
  return out;
}

}  // namespace

SmoothMap burgers_soliton(double x0, double c, double d, double mu) {
  if (!(c * c + d > 0.0)) throw std::invalid_argument("burgers_soliton needs c^2 + d > 0");
  if (!(mu > 0.0)) throw std::invalid_argument("burgers_soliton needs mu > 0");
  const double k = std::sqrt(c * c + d);
  const Expr t = variable("t"), x = variable("x");
  return SmoothMap({"t", "x"}, {c - k * tanh(k / (2.0 * mu) * (x - x0 - c * t))});
}

double burgers_residual(const SmoothMap& u, double mu, const SamplingGrid& grid) {
  const PdeResidual pde({"t", "x"}, "U", "D(U,t) + U*D(U,x) - mu*D(U,x,x)", {{"mu", mu}});
  return residual_max(pde, u, grid);
}

ParamFlow::ParamFlow(std::string time, std::vector<std::string> a_vars, std::vector<std::string> b_vars,
                     std::vector<Expr> alpha, std::vector<Expr> beta)
    : time_(std::move(time)),
      a_vars_(std::move(a_vars)),
      b_vars_(std::move(b_vars)),
      alpha_(std::move(alpha)),
      beta_(std::move(beta)) {
  if (a_vars_.empty() || alpha_.size() != a_vars_.size() || beta_.size() != b_vars_.size()) {
    throw std::invalid_argument("ParamFlow: one alpha per a variable and one beta per b variable");
  }
  names_.push_back(time_);
  names_.insert(names_.end(), a_vars_.begin(), a_vars_.end());
  names_.insert(names_.end(), b_vars_.begin(), b_vars_.end());
  const std::set<std::string> known(names_.begin(), names_.end());
  if (known.size() != names_.size()) throw std::invalid_argument("ParamFlow: variable names must be distinct");
  for (const auto* list : {&alpha_, &beta_}) {
    for (const auto& e : *list) {
      for (const auto& v : free_variables(e)) {
        if (!known.count(v)) throw std::invalid_argument("ParamFlow: unknown variable '" + v + "'");
      }
    }
  }
}

Eigen::VectorXd ParamFlow::alpha_at(double t, const Eigen::VectorXd& a, const Eigen::VectorXd& b) const {
  const Eigen::VectorXd x = join({Eigen::VectorXd::Constant(1, t), a, b});
  Eigen::VectorXd out(alpha_.size());
  for (std::size_t i = 0; i < alpha_.size(); ++i) out(i) = eval(alpha_[i], names_, std::span<const double>(x.data(), x.size()));
  return out;
}

Eigen::VectorXd ParamFlow::beta_at(double t, const Eigen::VectorXd& a, const Eigen::VectorXd& b) const {
  const Eigen::VectorXd x = join({Eigen::VectorXd::Constant(1, t), a, b});
  Eigen::VectorXd out(beta_.size());
  for (std::size_t i = 0; i < beta_.size(); ++i) out(i) = eval(beta_[i], names_, std::span<const double>(x.data(), x.size()));
  return out;
}

TimeAction ParamFlow::alpha_action(const Eigen::VectorXd& b) const {
  if (static_cast<std::size_t>(b.size()) != b_vars_.size()) throw std::invalid_argument("alpha_action: b has wrong size");
  std::map<std::string, Expr, std::less<>> fixed;
  for (std::size_t i = 0; i < b_vars_.size(); ++i) fixed.emplace(b_vars_[i], constant(b(i)));
  std::vector<std::string> inputs{time_};
  inputs.insert(inputs.end(), a_vars_.begin(), a_vars_.end());
  std::vector<Expr> outs;
  for (const auto& e : alpha_) outs.push_back(substitute(e, fixed));
  return TimeAction("alpha", SmoothMap(std::move(inputs), std::move(outs)), TimeDomain::NonNegative);
}

ParamFlow linear_soliton_flow() {
  return ParamFlow("t", {"x0"}, {"c", "d"}, {parse_expr("x0 + c*t")}, {variable("c"), variable("d")});
}

VerificationReport param_flow_check(const ParamFlow& flow, const SamplingGrid& grid, double tol) {
  const std::size_t na = flow.a_vars().size(), nb = flow.b_vars().size();
  if (grid.dim() != 2 + na + nb) throw std::invalid_argument("param_flow_check: grid must span (t, s, a..., b...)");
  VerificationReport r;
  r.suite = "param-flow-cocycle";
  r.tolerance = tol;
  r.grid = grid.summary();
  DeviationTracker dev;
  for (const auto& p : grid.points()) {
    const double t = p(0), s = p(1);
    const Eigen::VectorXd a = p.segment(2, static_cast<Eigen::Index>(na));
    const Eigen::VectorXd b = p.tail(static_cast<Eigen::Index>(nb));
    if (t < 0.0 || s < 0.0) {
      ++r.skipped;
      continue;
    }
    const Eigen::VectorXd at = flow.alpha_at(t, a, b), bt = flow.beta_at(t, a, b);
    const Eigen::VectorXd lhs = join({flow.alpha_at(t + s, a, b), flow.beta_at(t + s, a, b)});
    const Eigen::VectorXd rhs = join({flow.alpha_at(s, at, bt), flow.beta_at(s, at, bt)});
    dev.observe(scaled_deviation(lhs, rhs), p, join({lhs, rhs}));
    const Eigen::VectorXd start = join({flow.alpha_at(0.0, a, b), flow.beta_at(0.0, a, b)});
    dev.observe(scaled_deviation(start, join({a, b})), p, start);
    ++r.evaluated;
  }
  dev.write_to(r);
  if (r.evaluated == 0) r.inconclusive = true;
  r.finalize();
  return r;
}

FamilyFn burgers_family(double mu) {
  return [mu](const Eigen::VectorXd& a, const Eigen::VectorXd& b) { return burgers_soliton(a(0), b(0), b(1), mu); };
}

VerificationReport soliton_translation_check(const ParamFlow& flow, const FamilyFn& family, const Eigen::VectorXd& a,
                                             const Eigen::VectorXd& b, const SamplingGrid& grid, double tol) {
  if (grid.dim() != 2) throw std::invalid_argument("soliton_translation_check needs a (t, x) grid");
  VerificationReport r;
  r.suite = "soliton-translation";
  r.tolerance = tol;
  r.grid = grid.summary();
  const SmoothMap u = family(a, b);
  DeviationTracker dev;
  for (const auto& p : grid.points()) {
    const double t = p(0);
    if (t < 0.0) {
      ++r.skipped;
      continue;
    }
    const SmoothMap moved = family(flow.alpha_at(t, a, b), flow.beta_at(t, a, b));
    Eigen::VectorXd at_zero = p;
    at_zero(0) = 0.0;
    const Eigen::VectorXd lhs = u(p), rhs = moved(at_zero);
    dev.observe(scaled_deviation(lhs, rhs), p, join({lhs, rhs}));
    ++r.evaluated;
  }
  dev.write_to(r);
  if (r.evaluated == 0) r.inconclusive = true;
  r.finalize();
  return r;
}

SmoothMap heat_kernel() { return SmoothMap::parse({"t", "x"}, {"exp(-x^2/(4*t))/sqrt(t)"}); }

VerificationReport heat_flow_demo(const SamplingGrid& grid, double tol) {
  if (grid.dim() != 2) throw std::invalid_argument("heat_flow_demo needs a (t, x) grid");
  VerificationReport r;
  r.suite = "heat-flow";
  r.tolerance = tol;
  r.grid = grid.summary();
  const SmoothMap k = heat_kernel();
  const PdeResidual heat({"t", "x"}, "U", "D(U,t) - D(U,x,x)");
  const Expr residual = heat.apply(k);
  DeviationTracker dev;
  const auto& ts = grid.axis_values(0);
  if (ts.front() <= 0.0) throw std::invalid_argument("heat_flow_demo needs t > 0");
  for (const auto& p : grid.points()) {
    const double res = std::abs(eval(residual, k.inputs(), std::span<const double>(p.data(), p.size())));
    dev.observe(res, p, Eigen::VectorXd::Constant(1, res));
    ++r.evaluated;
  }

  // Advancing the family parameter: K_t -> K_{t+s}.
  const std::vector<double> advances{0.0, 0.5, 1.0};
  const auto& xs = grid.axis_values(1);
  for (double t : ts) {
    for (double s1 : advances) {
      for (double s2 : advances) {
        for (double x : xs) {
          Eigen::VectorXd two(2), one(2);
          two << (t + s1) + s2, x;
          one << t + (s1 + s2), x;
          dev.observe(scaled_deviation(k(two), k(one)), Eigen::Vector3d(t, s1 + s2, x), k(one));
        }
      }
    }
  }
  dev.write_to(r);
  std::ostringstream note;
  note << "advance by s has no inverse inside the family once s >= t: e.g. t = " << ts.front() << ", s = " << ts.front()
       << " would need the parameter " << ts.front() - ts.front();
  r.notes.push_back(note.str());
  r.finalize();
  return r;
}

}  // namespace gls
