#include "gls/enforcing.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "gls/detail/roots.hpp"
#include "gls/errors.hpp"
#include "gls/semigroup.hpp"

namespace gls {

namespace {

const Expr kT = variable("t");
const Expr kY = variable("y");
const Expr kH = variable("H");

double eval_th(const Expr& e, double t, double h) {
  static const std::string names[] = {"t", "H"};
  const double values[] = {t, h};
  return eval(e, names, values);
}

double eval_ty(const Expr& e, double t, double y) {
  static const std::string names[] = {"t", "y"};
  const double values[] = {t, y};
  return eval(e, names, values);
}

}  // namespace

MediatorFunction::MediatorFunction(Expr g, std::string var) : g_(std::move(g)), var_(std::move(var)) {
  for (const auto& v : free_variables(g_)) {
    if (v != var_) throw std::invalid_argument("mediator function may only depend on " + var_);
  }
  dg_ = diff(g_, var_);
  if (std::abs(value(0.0)) > 1e-12 || std::abs(value(1.0) - 1.0) > 1e-12) {
    throw std::invalid_argument("mediator function needs g(0) = 0 and g(1) = 1");
  }
}

MediatorFunction MediatorFunction::square_root() { return MediatorFunction(sqrt(kT), "t"); }

double MediatorFunction::value(double t) const {
  const std::string names[] = {var_};
  return eval(g_, names, std::span<const double>(&t, 1));
}

double MediatorFunction::slope(double t) const {
  const std::string names[] = {var_};
  return eval(dg_, names, std::span<const double>(&t, 1));
}

bool MediatorFunction::slope_nonzero_on(double horizon, std::size_t samples) const {
  if (!(horizon > 0.0) || samples == 0) throw std::invalid_argument("slope_nonzero_on needs horizon > 0");
  for (std::size_t i = 1; i <= samples; ++i) {
    const double t = horizon * static_cast<double>(i) / static_cast<double>(samples);
    double d;
    try {
      d = slope(t);
    } catch (const DomainError&) {
      return false;
    }
    if (!(d != 0.0) || !std::isfinite(d)) return false;
  }
  return true;
}

bool branch_active(Branch b, double t, double y) {
  if (t < 0.0) return false;
  const double q = 1.0 + 2.0 * std::sqrt(t) * y;
  return b == Branch::Plus ? q <= 0.0 : q >= 0.0;
}

TimeAction sqrt_action() {
  return TimeAction("sqrt-action", SmoothMap({"t", "y"}, {kY + sqrt(kT) * pow(kY, 2.0)}), TimeDomain::NonNegative);
}

TimeAction homotopy_action(const SmoothMap& f, const MediatorFunction& g) {
  if (f.in_dim() != f.out_dim()) throw std::invalid_argument("homotopy_action: f must map R^l to R^l");
  if (f.input_index(g.var()) != f.in_dim()) {
    throw std::invalid_argument("homotopy_action: f's inputs clash with the time variable " + g.var());
  }
  const Expr gt = variable(g.var());
  std::vector<std::string> inputs{g.var()};
  inputs.insert(inputs.end(), f.inputs().begin(), f.inputs().end());
  std::vector<Expr> outs;
  for (std::size_t i = 0; i < f.out_dim(); ++i) {
    outs.push_back((1.0 - g.g()) * variable(f.inputs()[i]) + g.g() * f.output(i));
  }
  return TimeAction("homotopy", SmoothMap(std::move(inputs), std::move(outs)), TimeDomain::NonNegative);
}

TimeAction milder_action() {
  return TimeAction("milder-action", SmoothMap({"t", "y"}, {kY + kT * pow(kY, 2.0)}), TimeDomain::Full);
}

TimeAction cuberoot_group_action() {
  return TimeAction("cuberoot-flow", SmoothMap({"t", "y"}, {cbrt(3.0 * kT + pow(kY, 3.0))}), TimeDomain::Full);
}

VerificationReport k_action_relation_check(const SamplingGrid& grid, double tol) {
  if (grid.dim() != 2) throw std::invalid_argument("k_action_relation_check needs a (t, y) grid");
  VerificationReport r;
  r.suite = "k-action-relation";
  r.tolerance = tol;
  r.grid = grid.summary();
  const TimeAction h = sqrt_action();
  const Expr k = kY + variable("s") * pow(kY, 2.0);
  const std::string names[] = {"s", "y"};
  DeviationTracker dev;
  for (const auto& p : grid.points()) {
    const double t = p(0), y = p(1);
    if (t < 0.0) {
      ++r.skipped;
      continue;
    }
    const double values[] = {std::sqrt(t), y};
    Eigen::VectorXd lhs(1), rhs(1);
    lhs(0) = h(t, y);
    rhs(0) = eval(k, names, values);
    dev.observe(scaled_deviation(lhs, rhs), p, rhs);
    ++r.evaluated;
  }
  dev.write_to(r);
  if (r.evaluated == 0) r.inconclusive = true;
  r.finalize();
  return r;
}

Expr sqrt_ode_rhs(Branch b) {
  const Expr st = sqrt(kT);
  const Expr root = sqrt(1.0 + 4.0 * st * kH);
  const Expr num = b == Branch::Plus ? 1.0 + 2.0 * st * kH + root : 1.0 + 2.0 * st * kH - root;
  return num / (4.0 * kT * st);
}

double ode_residual_explicit(double t, double y, Branch b) {
  if (!(t > 0.0)) throw DomainError("explicit singular ODE needs t > 0");
  if (!branch_active(b, t, y)) throw BranchMismatch("branch predicate fails at this (t, y)");
  static const Expr h = kY + sqrt(kT) * pow(kY, 2.0);
  static const Expr dh = diff(h, "t");
  static const Expr rhs_plus = sqrt_ode_rhs(Branch::Plus);
  static const Expr rhs_minus = sqrt_ode_rhs(Branch::Minus);
  const double hv = eval_ty(h, t, y);
  const double lhs = eval_ty(dh, t, y);
  const double rhs = eval_th(b == Branch::Plus ? rhs_plus : rhs_minus, t, hv);
  return std::abs(lhs - rhs);
}

double ode_residual_homotopy(const SmoothMap& f, const MediatorFunction& g, double t, const Eigen::VectorXd& y) {
  if (!(t > 0.0)) throw DomainError("homotopy ODE needs t > 0");
  const TimeAction a = homotopy_action(f, g);
  const SmoothMap dt = a.formula()->partial(g.var());
  Eigen::VectorXd x(y.size() + 1);
  x(0) = t;
  x.tail(y.size()) = y;
  const Eigen::VectorXd Y = a(t, y);
  const Eigen::VectorXd Yp = dt(x);
  const double gv = g.value(t);
  const double gp = g.slope(t);
  if (!(gp != 0.0) || !std::isfinite(gp)) throw DomainError("homotopy ODE needs g'(t) != 0");

  const Eigen::VectorXd y_rec = (gp * Y - gv * Yp) / gp;
  const Eigen::VectorXd f_rec = ((1.0 - gv) * Yp + gp * Y) / gp;
  const Eigen::VectorXd f_y = f(y);
  const Eigen::VectorXd ode = (1.0 - gv) * Yp + gp * Y - gp * f(y_rec);
  return std::max({ode.norm(), (y_rec - y).norm(), (f_rec - f_y).norm()});
}

VerificationReport limit_ic_check(const TimeAction& a, const Eigen::VectorXd& y,
                                  std::span<const double> eps_sequence, double tol) {
  if (eps_sequence.empty()) throw PreconditionError("limit_ic_check: empty eps sequence");
  for (std::size_t i = 0; i < eps_sequence.size(); ++i) {
    if (!(eps_sequence[i] > 0.0)) throw PreconditionError("limit_ic_check: eps must be positive");
    if (i > 0 && !(eps_sequence[i] < eps_sequence[i - 1])) {
      throw PreconditionError("limit_ic_check: eps sequence must be strictly decreasing");
    }
  }
  if (!(eps_sequence.back() < 1e-8)) throw PreconditionError("limit_ic_check: eps sequence must reach below 1e-8");

  VerificationReport r;
  r.suite = "limit-ic:" + a.name();
  r.tolerance = tol;
  r.grid = "eps x" + std::to_string(eps_sequence.size());
  double previous = INFINITY;
  double last = 0.0;
  for (double eps : eps_sequence) {
    const Eigen::VectorXd v = a(eps, y);
    const double dev = (v - y).norm();
    ++r.evaluated;
    Eigen::VectorXd p(y.size() + 1);
    p << eps, y;
    if (dev > previous * (1.0 + 1e-12) + 1e-300) {
      ++r.failures;
      r.witnesses.push_back(Witness{to_std(p), {dev, previous}, "deviation increased as eps decreased"});
    }
    previous = dev;
    last = dev;
  }
  r.max_deviation = last;
  r.finalize();
  return r;
}

bool branch_active(MilderBranch b, double t, double y) {
  const double q = 1.0 + 2.0 * t * y;
  return b == MilderBranch::Regular ? q >= 0.0 : (q <= 0.0 && t != 0.0);
}

Expr milder_ode_rhs(MilderBranch b) {
  const Expr denom_like = 1.0 + 2.0 * kT * kH + sqrt(1.0 + 4.0 * kT * kH);
  if (b == MilderBranch::Regular) return 2.0 * pow(kH, 2.0) / denom_like;
  return denom_like / (2.0 * pow(kT, 2.0));
}

double ode_residual_milder(double t, double y, MilderBranch b) {
  if (b == MilderBranch::Singular && t == 0.0) throw DomainError("singular branch needs t != 0");
  if (!branch_active(b, t, y)) throw BranchMismatch("branch predicate fails at this (t, y)");
  static const Expr h = kY + kT * pow(kY, 2.0);
  static const Expr dh = diff(h, "t");
  static const Expr rhs_regular = milder_ode_rhs(MilderBranch::Regular);
  static const Expr rhs_singular = milder_ode_rhs(MilderBranch::Singular);
  const double hv = eval_ty(h, t, y);
  const double lhs = eval_ty(dh, t, y);
  const double rhs = eval_th(b == MilderBranch::Regular ? rhs_regular : rhs_singular, t, hv);
  return std::abs(lhs - rhs);
}

namespace {

struct SliceShape {
  bool diffeo = false;
  double min_slope = 0.0;
  double max_slope = 0.0;
  bool unbounded = false;
};

class DiffeoClassifier {
 public:
  DiffeoClassifier(const TimeAction& a, const SamplingGrid& y_grid) : ys_(y_grid.axis_values(0)) {
    const auto& in = a.formula()->inputs();
    h_ = a.formula()->output(0);
    dh_ = diff(h_, in[1]);
    d2h_ = diff(dh_, in[1]);
    names_[0] = in[0];
    names_[1] = in[1];
  }

  SliceShape operator()(double t) const {
    SliceShape s;
    const detail::ScalarFn slope = [&](double y) { return eval_at(dh_, t, y); };
    const detail::ScalarFn curv = [&](double y) { return eval_at(d2h_, t, y); };
    s.min_slope = INFINITY;
    s.max_slope = -INFINITY;
    auto take = [&](double y) {
      const double v = detail::safe_eval(slope, y);
      if (std::isnan(v)) return;
      s.min_slope = std::min(s.min_slope, v);
      s.max_slope = std::max(s.max_slope, v);
    };
    double prev = NAN;
    for (std::size_t i = 0; i < ys_.size(); ++i) {
      take(ys_[i]);
      const double c = detail::safe_eval(curv, ys_[i]);
      if (i > 0 && !std::isnan(prev) && !std::isnan(c) && std::signbit(prev) != std::signbit(c) && prev != 0.0 &&
          c != 0.0) {
        take(detail::bisect(curv, ys_[i - 1], ys_[i]));
      }
      prev = c;
    }
    s.unbounded = grows_at(t, ys_.front()) && grows_at(t, ys_.back());
    s.diffeo = (s.min_slope > 0.0 || s.max_slope < 0.0) && s.unbounded;
    return s;
  }

 private:
  double eval_at(const Expr& e, double t, double y) const {
    const double values[] = {t, y};
    return eval(e, names_, values);
  }

  // |a(t, .)| increasing along 10^k-scaled points past the grid end.
  bool grows_at(double t, double end) const {
    const double centre = 0.5 * (ys_.front() + ys_.back());
    double previous = -INFINITY;
    double first = 0.0, last = 0.0;
    for (int k = 0; k <= 3; ++k) {
      const double y = centre + (end - centre) * std::pow(10.0, k);
      double v;
      try {
        v = eval_at(h_, t, y);
      } catch (const DomainError&) {
        return false;
      }
      if (!std::isfinite(v) || !(std::abs(v) > previous)) return false;
      previous = std::abs(v);
      if (k == 0) first = v;
      last = v;
    }
    const double span = std::abs(end - centre) * 999.0;
    return std::abs(last - first) >= 1e-3 * span;
  }

  std::vector<double> ys_;
  Expr h_, dh_, d2h_;
  std::string names_[2];
};

}  // namespace

DiffeoTimeSet diffeo_time_set(const TimeAction& a, const SamplingGrid& t_grid, const SamplingGrid& y_grid) {
  if (!a.formula() || a.dim() != 1) throw std::invalid_argument("diffeo_time_set needs a formula-backed 1-D action");
  if (t_grid.dim() != 1 || y_grid.dim() != 1) throw std::invalid_argument("diffeo_time_set needs 1-D grids");
  const DiffeoClassifier classify(a, y_grid);
  DiffeoTimeSet out;
  for (double t : t_grid.axis_values(0)) {
    if (!a.time_in_domain(t)) continue;
    const SliceShape s = classify(t);
    out.samples.push_back(DiffeoSample{t, s.diffeo, s.min_slope, s.max_slope, s.unbounded});
  }
  for (std::size_t i = 1; i < out.samples.size(); ++i) {
    if (out.samples[i].diffeo == out.samples[i - 1].diffeo) continue;
    double lo = out.samples[i - 1].t, hi = out.samples[i].t;
    const bool lo_state = out.samples[i - 1].diffeo;
    while (hi - lo > 1e-7) {
      const double mid = 0.5 * (lo + hi);
      (classify(mid).diffeo == lo_state ? lo : hi) = mid;
    }
    out.thresholds.push_back(0.5 * (lo + hi));
  }
  return out;
}

SlopeRange slope_range(const SmoothMap& f, const SamplingGrid& y_grid) {
  if (f.in_dim() != 1 || f.out_dim() != 1 || y_grid.dim() != 1) throw std::invalid_argument("slope_range needs a scalar map");
  const Expr d1 = diff(f.output(0), f.inputs()[0]);
  const Expr d2 = diff(d1, f.inputs()[0]);
  const std::string names[] = {f.inputs()[0]};
  const detail::ScalarFn slope = [&](double y) { return eval(d1, names, std::span<const double>(&y, 1)); };
  const detail::ScalarFn curv = [&](double y) { return eval(d2, names, std::span<const double>(&y, 1)); };
  SlopeRange r{INFINITY, -INFINITY};
  auto take = [&](double y) {
    const double v = detail::safe_eval(slope, y);
    if (std::isnan(v)) return;
    r.min = std::min(r.min, v);
    r.max = std::max(r.max, v);
  };
  const auto& ys = y_grid.axis_values(0);
  double prev = NAN;
  for (std::size_t i = 0; i < ys.size(); ++i) {
    take(ys[i]);
    const double c = detail::safe_eval(curv, ys[i]);
    if (i > 0 && !std::isnan(prev) && !std::isnan(c) && prev != 0.0 && c != 0.0 && std::signbit(prev) != std::signbit(c)) {
      take(detail::bisect(curv, ys[i - 1], ys[i]));
    }
    prev = c;
  }
  return r;
}

std::vector<double> sqrt_homotopy_thresholds(const SmoothMap& f, const SamplingGrid& y_grid) {
  const SlopeRange r = slope_range(f, y_grid);
  std::vector<double> out;
  if (r.min < 0.0) out.push_back(1.0 / ((1.0 - r.min) * (1.0 - r.min)));
  if (r.max < 1.0) out.push_back(1.0 / ((1.0 - r.max) * (1.0 - r.max)));
  return out;
}

}  // namespace gls
