#include "gls/reduction.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <optional>
#include <stdexcept>

#include "gls/detail/roots.hpp"
#include "gls/errors.hpp"
#include "gls/semigroup.hpp"

namespace gls {

namespace {

Eigen::VectorXd prepend(double t, const Eigen::VectorXd& y) {
  Eigen::VectorXd out(y.size() + 1);
  out(0) = t;
  out.tail(y.size()) = y;
  return out;
}

Eigen::VectorXd scalar(double v) {
  Eigen::VectorXd out(1);
  out(0) = v;
  return out;
}

void mark_inconclusive_if_sparse(VerificationReport& r, std::size_t total) {
  if (total == 0 || r.skipped * 2 > total) {
    r.inconclusive = true;
    r.notes.push_back("more than half of the sample points were skipped");
  }
}

std::string fresh_name(const SmoothMap& m, std::string base) {
  while (m.input_index(base) != m.in_dim()) base += "_";
  return base;
}

}  // namespace

OdeSystem::OdeSystem(SystemKind kind, SmoothMap rhs, ValidFn valid)
    : kind_(kind), rhs_(std::move(rhs)), valid_(std::move(valid)) {
  const std::size_t expected = rhs_.out_dim() + (kind_ == SystemKind::NonAutonomous ? 1 : 0);
  if (rhs_.in_dim() != expected) throw std::invalid_argument("OdeSystem: right-hand side arity does not match the kind");
}

OdeSystem OdeSystem::autonomous(SmoothMap rhs, ValidFn valid) {
  return OdeSystem(SystemKind::Autonomous, std::move(rhs), std::move(valid));
}

OdeSystem OdeSystem::nonautonomous(SmoothMap rhs, ValidFn valid) {
  return OdeSystem(SystemKind::NonAutonomous, std::move(rhs), std::move(valid));
}

std::vector<std::string> OdeSystem::state_variables() const {
  const auto& in = rhs_.inputs();
  return {in.begin() + (kind_ == SystemKind::NonAutonomous ? 1 : 0), in.end()};
}

Eigen::VectorXd OdeSystem::operator()(double t, const Eigen::VectorXd& y) const {
  if (static_cast<std::size_t>(y.size()) != dim()) throw std::invalid_argument("OdeSystem: state has wrong dimension");
  return kind_ == SystemKind::Autonomous ? rhs_(y) : rhs_(prepend(t, y));
}

OdeSystem augment_system(const OdeSystem& sys) {
  if (sys.kind() != SystemKind::NonAutonomous) throw std::invalid_argument("augment_system needs a non-autonomous system");
  const SmoothMap& f = sys.rhs();
  const std::string tau = fresh_name(f, "tau");
  std::vector<std::string> inputs{tau};
  inputs.insert(inputs.end(), f.inputs().begin() + 1, f.inputs().end());
  std::vector<Expr> outs{constant(1.0)};
  for (const auto& e : f.outputs()) outs.push_back(substitute(e, f.inputs().front(), variable(tau)));
  OdeSystem::ValidFn valid;
  if (sys.validity()) {
    valid = [v = sys.validity()](double, const Eigen::VectorXd& x) { return v(x(0), x.tail(x.size() - 1)); };
  }
  return OdeSystem::autonomous(SmoothMap(std::move(inputs), std::move(outs)), std::move(valid));
}

OdeSystem quadratic_system() { return OdeSystem::nonautonomous(SmoothMap::parse({"t", "y"}, {"2*t"})); }

OdeSystem cuberoot_system() {
  return OdeSystem::autonomous(SmoothMap::parse({"y"}, {"1/y^2"}),
                               [](double, const Eigen::VectorXd& y) { return y(0) != 0.0; });
}

OdeSystem sqrt_branch_system(Branch b) {
  const Expr rhs = substitute(sqrt_ode_rhs(b), "H", variable("y"));
  return OdeSystem::nonautonomous(SmoothMap({"t", "y"}, {rhs}), [](double t, const Eigen::VectorXd& y) {
    return t > 0.0 && 1.0 + 4.0 * std::sqrt(t) * y(0) >= 0.0;
  });
}

Trajectory integrate_flow(const OdeSystem& sys, double t_start, const Eigen::VectorXd& y0, double t_end,
                          const FlowSettings& settings) {
  if (settings.steps == 0) throw std::invalid_argument("integrate_flow: steps must be positive");
  if (!(settings.grading >= 1.0)) throw std::invalid_argument("integrate_flow: grading must be >= 1");
  if (!(settings.eps_start >= 0.0)) throw std::invalid_argument("integrate_flow: eps_start must be >= 0");
  if (static_cast<std::size_t>(y0.size()) != sys.dim()) throw std::invalid_argument("integrate_flow: y0 has wrong dimension");

  const double a = t_start + settings.eps_start;
  Eigen::VectorXd y = y0;
  if (settings.eps_start > 0.0) {
    if (settings.start_state) y = settings.start_state(a);
  } else if (!sys.valid(a, y)) {
    throw DomainError("integrate_flow: right-hand side is singular at the start; set eps_start > 0");
  }
  if (!(t_end > a)) throw std::invalid_argument("integrate_flow: t_end must exceed the start time");

  Trajectory traj;
  traj.steps = settings.steps;
  traj.eps_start = settings.eps_start;
  traj.grading = settings.grading;
  traj.times.reserve(settings.steps + 1);
  traj.states.reserve(settings.steps + 1);
  traj.times.push_back(a);
  traj.states.push_back(y);

  const double n = static_cast<double>(settings.steps);
  double t = a;
  for (std::size_t k = 1; k <= settings.steps; ++k) {
    const double next = k == settings.steps ? t_end
                                            : a + (t_end - a) * std::pow(static_cast<double>(k) / n, settings.grading);
    try {
      y = rk4_step(sys, t, y, next - t);
    } catch (const DomainError& e) {
      throw IntegrationError(std::string("right-hand side failed: ") + e.what(), t);
    }
    if (!y.allFinite()) throw IntegrationError("nonfinite state", next);
    t = next;
    traj.times.push_back(t);
    traj.states.push_back(y);
  }
  return traj;
}

void write_csv(std::ostream& os, const Trajectory& traj) {
  const std::size_t l = traj.states.empty() ? 0 : static_cast<std::size_t>(traj.states.front().size());
  os << "t";
  for (std::size_t i = 1; i <= l; ++i) os << ",y" << i;
  os << "\n";
  const auto old = os.precision(17);
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    os << traj.times[k];
    for (Eigen::Index i = 0; i < traj.states[k].size(); ++i) os << "," << traj.states[k](i);
    os << "\n";
  }
  os.precision(old);
}

// One-time evolutions.

OneTimeEvolution OneTimeEvolution::closed_form(std::string name, SmoothMap formula, ValidFn valid) {
  if (formula.in_dim() != formula.out_dim() + 1) {
    throw std::invalid_argument("one-time evolution formula needs inputs (s, x1..xn) for n outputs");
  }
  OneTimeEvolution e;
  e.name_ = std::move(name);
  e.dim_ = formula.out_dim();
  e.map_ = [f = formula](double s, const Eigen::VectorXd& x) { return f(prepend(s, x)); };
  e.formula_ = std::move(formula);
  e.valid_ = std::move(valid);
  return e;
}

OneTimeEvolution OneTimeEvolution::numeric(std::string name, OdeSystem sys, FlowSettings settings) {
  if (sys.kind() != SystemKind::Autonomous) throw std::invalid_argument("one-time evolution needs an autonomous system");
  OneTimeEvolution e;
  e.name_ = std::move(name);
  e.dim_ = sys.dim();
  e.valid_ = [sys](double, const Eigen::VectorXd& x) { return sys.valid(0.0, x); };
  e.map_ = [sys = std::move(sys), settings = std::move(settings)](double s, const Eigen::VectorXd& x) {
    if (s == 0.0) return x;
    return integrate_flow(sys, 0.0, x, s, settings).final_state();
  };
  return e;
}

bool OneTimeEvolution::valid(double s, const Eigen::VectorXd& x) const {
  return s >= 0.0 && static_cast<std::size_t>(x.size()) == dim_ && (!valid_ || valid_(s, x));
}

Eigen::VectorXd OneTimeEvolution::operator()(double s, const Eigen::VectorXd& x) const {
  if (!valid(s, x)) throw DomainError(name_ + ": evaluation outside the domain");
  return map_(s, x);
}

TimeAction OneTimeEvolution::as_action() const {
  auto valid = [self = *this](double s, const Eigen::VectorXd& x) { return self.valid(s, x); };
  if (formula_) return TimeAction(name_, *formula_, TimeDomain::NonNegative, valid);
  return TimeAction(name_, dim_, [self = *this](double s, const Eigen::VectorXd& x) { return self(s, x); },
                    TimeDomain::NonNegative, valid);
}

// Two-time evolutions.

TwoTimeEvolution TwoTimeEvolution::closed_form(std::string name, SmoothMap formula, TimeDomain domain, ValidFn valid) {
  if (formula.in_dim() != formula.out_dim() + 2) {
    throw std::invalid_argument("two-time evolution formula needs inputs (t0, t, y1..yl) for l outputs");
  }
  TwoTimeEvolution e;
  e.name_ = std::move(name);
  e.dim_ = formula.out_dim();
  e.domain_ = domain;
  e.map_ = [f = formula](double t0, double t, const Eigen::VectorXd& y) { return f(prepend(t0, prepend(t, y))); };
  e.formula_ = std::move(formula);
  e.valid_ = std::move(valid);
  return e;
}

TwoTimeEvolution TwoTimeEvolution::numeric(std::string name, OdeSystem sys, TimeDomain domain, FlowSettings settings) {
  if (sys.kind() != SystemKind::NonAutonomous) throw std::invalid_argument("two-time evolution needs a non-autonomous system");
  // Backward flow: G(u, y) = -F(-u, y) integrated from -t0 to -t.
  const SmoothMap& f = sys.rhs();
  const Expr u = variable(f.inputs().front());
  std::vector<Expr> reversed;
  for (const auto& e : f.outputs()) reversed.push_back(-substitute(e, f.inputs().front(), -u));
  OdeSystem::ValidFn back_valid;
  if (sys.validity()) back_valid = [v = sys.validity()](double t, const Eigen::VectorXd& y) { return v(-t, y); };
  OdeSystem back = OdeSystem::nonautonomous(SmoothMap(f.inputs(), std::move(reversed)), std::move(back_valid));

  TwoTimeEvolution e;
  e.name_ = std::move(name);
  e.dim_ = sys.dim();
  e.domain_ = domain;
  e.map_ = [sys = std::move(sys), back = std::move(back), settings = std::move(settings)](
               double t0, double t, const Eigen::VectorXd& y) {
    if (t == t0) return y;
    if (t > t0) return integrate_flow(sys, t0, y, t, settings).final_state();
    return integrate_flow(back, -t0, y, -t, settings).final_state();
  };
  return e;
}

bool TwoTimeEvolution::valid(double t0, double t, const Eigen::VectorXd& y) const {
  if (domain_ == TimeDomain::NonNegative && (t0 < 0.0 || t < 0.0)) return false;
  return static_cast<std::size_t>(y.size()) == dim_ && (!valid_ || valid_(t0, t, y));
}

Eigen::VectorXd TwoTimeEvolution::operator()(double t0, double t, const Eigen::VectorXd& y) const {
  if (!valid(t0, t, y)) throw DomainError(name_ + ": evaluation outside the domain");
  return map_(t0, t, y);
}

double TwoTimeEvolution::operator()(double t0, double t, double y) const { return (*this)(t0, t, scalar(y))(0); }

std::function<double(double, double)> TwoTimeEvolution::slice(double t0) const {
  if (dim_ != 1) throw std::invalid_argument("slice needs a scalar state");
  return [self = *this, t0](double t, double y) { return self(t0, t, y); };
}

// Law checks.

VerificationReport first_component_check(const OneTimeEvolution& ea, const SamplingGrid& grid, double tol) {
  if (grid.dim() != ea.dim() + 1) throw std::invalid_argument("first_component_check: grid must span (s, t, y...)");
  VerificationReport r;
  r.suite = "first-component:" + ea.name();
  r.tolerance = tol;
  r.grid = grid.summary();
  DeviationTracker dev;
  for (const auto& p : grid.points()) {
    const double s = p(0);
    const Eigen::VectorXd x = p.tail(p.size() - 1);
    if (!ea.valid(s, x)) {
      ++r.skipped;
      continue;
    }
    const Eigen::VectorXd v = ea(s, x);
    const double expected = x(0) + s;
    dev.observe(std::abs(v(0) - expected) / (1.0 + std::abs(expected)), p, v);
    ++r.evaluated;
  }
  dev.write_to(r);
  mark_inconclusive_if_sparse(r, grid.size());
  r.finalize();
  return r;
}

VerificationReport two_time_law_check(const TwoTimeEvolution& e, std::span<const std::array<double, 3>> triples,
                                      const SamplingGrid& grid, double tol) {
  if (grid.dim() != e.dim()) throw std::invalid_argument("two_time_law_check: grid dimension mismatch");
  VerificationReport r;
  r.suite = "two-time-law:" + e.name();
  r.tolerance = tol;
  r.grid = grid.summary();
  const auto points = grid.points();
  DeviationTracker dev;
  std::size_t total = 0;
  for (const auto& [t, s, q] : triples) {
    if (e.domain() == TimeDomain::NonNegative && (t < 0.0 || s < 0.0 || q < 0.0)) {
      throw PreconditionError("two_time_law_check: times outside [0, inf)");
    }
    for (const auto& y : points) {
      ++total;
      Eigen::VectorXd where(y.size() + 3);
      where << t, s, q, y;
      try {
        if (!e.valid(t, s, y) || !e.valid(t, q, y)) {
          ++r.skipped;
          continue;
        }
        const Eigen::VectorXd z = e(t, s, y);
        if (!e.valid(s, q, z)) {
          ++r.skipped;
          continue;
        }
        const Eigen::VectorXd lhs = e(s, q, z);
        const Eigen::VectorXd rhs = e(t, q, y);
        dev.observe(scaled_deviation(lhs, rhs), where, rhs);
        if (e.valid(s, t, z)) {
          const Eigen::VectorXd back = e(s, t, z);
          dev.observe(scaled_deviation(back, y), where, back);
        }
        ++r.evaluated;
      } catch (const DomainError&) {
        ++r.skipped;
      }
    }
  }
  dev.write_to(r);
  mark_inconclusive_if_sparse(r, total);
  r.finalize();
  return r;
}

VerificationReport one_time_law_check(const OneTimeEvolution& ea, std::span<const std::pair<double, double>> pairs,
                                      const SamplingGrid& grid, double tol) {
  if (grid.dim() != ea.dim()) throw std::invalid_argument("one_time_law_check: grid dimension mismatch");
  VerificationReport r;
  r.suite = "one-time-law:" + ea.name();
  r.tolerance = tol;
  r.grid = grid.summary();
  const auto points = grid.points();
  DeviationTracker dev;
  std::size_t total = 0;
  for (const auto& [s, q] : pairs) {
    if (s < 0.0 || q < 0.0) throw PreconditionError("one_time_law_check: times outside [0, inf)");
    for (const auto& x : points) {
      ++total;
      try {
        if (!ea.valid(s, x) || !ea.valid(s + q, x)) {
          ++r.skipped;
          continue;
        }
        const Eigen::VectorXd z = ea(s, x);
        if (!ea.valid(q, z)) {
          ++r.skipped;
          continue;
        }
        const Eigen::VectorXd lhs = ea(q, z);
        const Eigen::VectorXd rhs = ea(s + q, x);
        Eigen::VectorXd where(x.size() + 2);
        where << s, q, x;
        dev.observe(scaled_deviation(lhs, rhs), where, rhs);
        ++r.evaluated;
      } catch (const DomainError&) {
        ++r.skipped;
      }
    }
  }
  dev.write_to(r);
  mark_inconclusive_if_sparse(r, total);
  r.finalize();
  return r;
}

// The square-root evolution.

double ystar_branch(double t, double y) {
  if (!(t >= 0.0)) throw DomainError("ystar_branch needs t >= 0");
  const double radicand = 1.0 + 4.0 * std::sqrt(t) * y;
  if (radicand < 0.0) throw DomainError("ystar_branch: 1 + 4 sqrt(t) y < 0");
  return 2.0 * y / (1.0 + std::sqrt(radicand));
}

double gls_two_time(double t, double s, double y) {
  if (!(s >= 0.0)) throw DomainError("gls_two_time needs s >= 0");
  const double ys = ystar_branch(t, y);
  return ys + std::sqrt(s) * ys * ys;
}

Expr gls_two_time_expr() {
  const Expr t = variable("t"), s = variable("s"), y = variable("y");
  const Expr ys = 2.0 * y / (1.0 + sqrt(1.0 + 4.0 * sqrt(t) * y));
  return ys + sqrt(s) * pow(ys, 2.0);
}

TwoTimeEvolution gls_two_time_operator() {
  return TwoTimeEvolution::closed_form(
      "gls-two-time", SmoothMap({"t", "s", "y"}, {gls_two_time_expr()}), TimeDomain::NonNegative,
      [](double t, double, const Eigen::VectorXd& y) { return 1.0 + 4.0 * std::sqrt(t) * y(0) >= 0.0; });
}

OneTimeEvolution gls_autonomous_operator() {
  const Expr t = variable("t"), s = variable("s");
  const Expr second = substitute(gls_two_time_expr(), {{"s", t + s}});
  return OneTimeEvolution::closed_form("gls-autonomous", SmoothMap({"s", "t", "y"}, {t + s, second}),
                                       [](double, const Eigen::VectorXd& x) {
                                         return x(0) >= 0.0 && 1.0 + 4.0 * std::sqrt(x(0)) * x(1) >= 0.0;
                                       });
}

TwoTimeEvolution quadratic_two_time() {
  return TwoTimeEvolution::closed_form("quadratic-two-time", SmoothMap::parse({"t", "s", "y"}, {"s^2 - t^2 + y"}),
                                       TimeDomain::Full);
}

OneTimeEvolution quadratic_autonomous() {
  return OneTimeEvolution::closed_form("quadratic-autonomous",
                                       SmoothMap::parse({"s", "t", "y"}, {"t + s", "s^2 + 2*s*t + y"}));
}

// Recovery from a single slice.

namespace {

struct RootScan {
  std::vector<std::pair<double, double>> brackets;
  std::vector<double> roots;
};

double polish(const detail::ScalarFn& g, const detail::ScalarFn& dg, double a, double b) {
  double root = detail::bisect(g, a, b);
  if (dg) {
    const double d = detail::safe_eval(dg, root);
    if (std::isfinite(d) && d != 0.0) {
      const double polished = root - g(root) / d;
      if (polished >= std::min(a, b) && polished <= std::max(a, b) && std::abs(g(polished)) <= std::abs(g(root))) {
        root = polished;
      }
    }
  }
  return root;
}

bool opposite(double a, double b) {
  return !std::isnan(a) && !std::isnan(b) && (a == 0.0 || b == 0.0 || std::signbit(a) != std::signbit(b));
}

RootScan scan_roots(const detail::ScalarFn& g, const detail::ScalarFn& dg, const RecoverySettings& cfg) {
  RootScan out;
  const std::size_t n = std::max<std::size_t>(cfg.scan_points, 2);
  double x0 = cfg.lo;
  double g0 = detail::safe_eval(g, x0);
  for (std::size_t i = 1; i < n; ++i) {
    const double x1 = cfg.lo + (cfg.hi - cfg.lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    const double g1 = detail::safe_eval(g, x1);
    if (opposite(g0, g1) && g1 != 0.0) {
      out.brackets.emplace_back(x0, x1);
      out.roots.push_back(polish(g, dg, x0, x1));
    }
    x0 = x1;
    g0 = g1;
  }
  return out;
}

// Root whose bracket lies nearest to `from`, searching outward at the scan spacing.
std::optional<double> nearest_root(const detail::ScalarFn& g, const detail::ScalarFn& dg, double from,
                                   const RecoverySettings& cfg) {
  const double step = (cfg.hi - cfg.lo) / static_cast<double>(std::max<std::size_t>(cfg.scan_points, 2) - 1);
  const double g_from = detail::safe_eval(g, from);
  if (g_from == 0.0) return from;
  double left = from, g_left = g_from, right = from, g_right = g_from;
  bool left_open = from > cfg.lo, right_open = from < cfg.hi;
  while (left_open || right_open) {
    if (right_open) {
      const double x = std::min(right + step, cfg.hi);
      const double gx = detail::safe_eval(g, x);
      if (opposite(g_right, gx)) return polish(g, dg, right, x);
      right = x;
      g_right = gx;
      right_open = x < cfg.hi;
    }
    if (left_open) {
      const double x = std::max(left - step, cfg.lo);
      const double gx = detail::safe_eval(g, x);
      if (opposite(gx, g_left)) return polish(g, dg, x, left);
      left = x;
      g_left = gx;
      left_open = x > cfg.lo;
    }
  }
  return std::nullopt;
}

double slice_slope(const std::function<double(double, double)>& slice, const RecoverySettings& cfg, double t, double y) {
  if (cfg.slice_derivative) return cfg.slice_derivative(t, y);
  const double h = 1e-6 * (1.0 + std::abs(y));
  return (slice(t, y + h) - slice(t, y - h)) / (2.0 * h);
}

}  // namespace

RecoveryResult recover_evolution(const std::function<double(double, double)>& slice, double t0, double t, double s,
                                 double y, const RecoverySettings& settings) {
  if (!(settings.lo < settings.hi)) throw std::invalid_argument("recover_evolution: empty search range");
  auto equation_at = [&](double tau) {
    std::pair<detail::ScalarFn, detail::ScalarFn> out;
    out.first = [&slice, tau, y](double x) { return slice(tau, x) - y; };
    if (settings.slice_derivative) out.second = [&settings, tau](double x) { return settings.slice_derivative(tau, x); };
    return out;
  };
  auto range_text = [&] {
    return "[" + std::to_string(settings.lo) + ", " + std::to_string(settings.hi) + "]";
  };

  RecoveryResult out;
  const auto [g_t, dg_t] = equation_at(t);
  const RootScan final_scan = scan_roots(g_t, dg_t, settings);
  out.brackets = final_scan.brackets;
  if (final_scan.roots.empty()) {
    throw RootNotFound("recover_evolution: no sign change of E(t0,t)(.) - y in " + range_text());
  }
  if (final_scan.roots.size() == 1) {
    out.ystar = final_scan.roots.front();
  } else {
    double current = y;
    const std::size_t k_max = std::max<std::size_t>(settings.continuation_steps, 1);
    for (std::size_t k = 1; k < k_max; ++k) {
      const double tau = t0 + (t - t0) * static_cast<double>(k) / static_cast<double>(k_max);
      const auto [g, dg] = equation_at(tau);
      const auto next = nearest_root(g, dg, current, settings);
      if (!next) throw RootNotFound("recover_evolution: continuation lost the branch at t=" + std::to_string(tau));
      current = *next;
    }
    out.ystar = *std::min_element(final_scan.roots.begin(), final_scan.roots.end(), [&](double a, double b) {
      return std::abs(a - current) < std::abs(b - current);
    });
  }
  const double slope = slice_slope(slice, settings, t, out.ystar);
  out.condition = slope == 0.0 ? std::numeric_limits<double>::infinity() : 1.0 / std::abs(slope);
  out.value = slice(s, out.ystar);
  return out;
}

VerificationReport flow_vs_closed_form(const TimeAction& action, const OdeSystem& sys, const Eigen::VectorXd& y0,
                                       double t_end, const FlowSettings& settings, double tol) {
  const bool augmented = sys.kind() == SystemKind::Autonomous && sys.dim() == action.dim() + 1;
  if (!augmented && sys.dim() != action.dim()) throw std::invalid_argument("flow_vs_closed_form: dimension mismatch");

  FlowSettings cfg = settings;
  if (cfg.eps_start > 0.0 && !cfg.start_state) {
    cfg.start_state = [&](double t) {
      const Eigen::VectorXd v = action(t, y0);
      return augmented ? prepend(t, v) : v;
    };
  }
  const Trajectory traj = integrate_flow(sys, 0.0, augmented ? prepend(0.0, y0) : y0, t_end, cfg);

  VerificationReport r;
  r.suite = "flow-vs-closed-form:" + action.name();
  r.tolerance = tol;
  r.grid = "steps=" + std::to_string(cfg.steps) + " grading=" + std::to_string(cfg.grading) +
           " eps_start=" + std::to_string(cfg.eps_start);
  DeviationTracker dev;
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    const Eigen::VectorXd& x = traj.states[k];
    const double tau = augmented ? x(0) : traj.times[k];
    const Eigen::VectorXd got = augmented ? Eigen::VectorXd(x.tail(x.size() - 1)) : x;
    const Eigen::VectorXd ref = action(tau, y0);
    dev.observe((got - ref).norm() / (1.0 + ref.norm()), prepend(traj.times[k], got), ref);
    ++r.evaluated;
  }
  dev.write_to(r);
  r.notes.push_back("final state " + std::to_string(traj.final_state()(traj.final_state().size() - 1)));
  r.finalize();
  return r;
}

}  // namespace gls
