#include "gls/semisym.hpp"

#include <algorithm>
#include <cmath>
#include <regex>
#include <set>
#include <sstream>
#include <stdexcept>

#include "gls/detail/folds.hpp"
#include "gls/errors.hpp"

namespace gls {

namespace {

Eigen::VectorXd concat(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  Eigen::VectorXd out(a.size() + b.size());
  out << a, b;
  return out;
}

std::string point_text(const Eigen::VectorXd& p) {
  std::ostringstream os;
  os << "(";
  for (Eigen::Index i = 0; i < p.size(); ++i) os << (i ? ", " : "") << p(i);
  os << ")";
  return os.str();
}

}  // namespace

ParametricFunction::ParametricFunction(SmoothMap v, std::vector<std::pair<double, double>> box)
    : v_(std::move(v)), box_(std::move(box)) {
  if (v_.out_dim() < 2) throw std::invalid_argument("ParametricFunction needs base and value outputs");
  if (!box_.empty() && box_.size() != v_.in_dim()) throw std::invalid_argument("ParametricFunction: box size mismatch");
}

SmoothMap ParametricFunction::base_map() const {
  return SmoothMap(v_.inputs(), std::vector<Expr>(v_.outputs().begin(), v_.outputs().end() - 1));
}

ParametricFunction canonical_parametric(const SmoothMap& u, std::vector<std::pair<double, double>> box) {
  if (u.out_dim() != 1) throw std::invalid_argument("canonical_parametric needs a single-output function");
  std::vector<Expr> outs;
  for (const auto& x : u.inputs()) outs.push_back(variable(x));
  outs.push_back(u.output(0));
  return ParametricFunction(SmoothMap(u.inputs(), std::move(outs)), std::move(box));
}

ParametricFunction act(const SmoothMap& f, const ParametricFunction& v) {
  if (f.in_dim() != v.map().out_dim()) throw std::invalid_argument("act: map arity does not match the parametric function");
  return ParametricFunction(compose(f, v.map()), v.box());
}

SmoothMap plane_rotation(const std::vector<std::string>& coords, double angle) {
  if (coords.size() < 2) throw std::invalid_argument("plane_rotation needs at least two coordinates");
  std::vector<Expr> outs;
  for (const auto& c : coords) outs.push_back(variable(c));
  const Expr x = variable(coords[coords.size() - 2]);
  const Expr u = variable(coords.back());
  const double c = std::cos(angle), s = std::sin(angle);
  outs[coords.size() - 2] = x * c - u * s;
  outs.back() = x * s + u * c;
  return SmoothMap(coords, std::move(outs));
}

SmoothMap vertical_map(const std::vector<std::string>& coords, const Expr& g, const std::string& value_var) {
  if (coords.empty()) throw std::invalid_argument("vertical_map needs coordinates");
  std::vector<Expr> outs;
  for (const auto& c : coords) outs.push_back(variable(c));
  outs.back() = substitute(g, value_var, variable(coords.back()));
  return SmoothMap(coords, std::move(outs));
}

bool is_vertical(const SmoothMap& f) {
  if (f.in_dim() != f.out_dim()) return false;
  const std::size_t n = f.in_dim();
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (!structurally_equal(f.output(i), variable(f.inputs()[i]))) return false;
  }
  for (const auto& v : free_variables(f.output(n - 1))) {
    if (v != f.inputs().back()) return false;
  }
  return true;
}

GraphCheck is_graph(const ParametricFunction& v, const SamplingGrid& grid, const GraphTolerance& tol) {
  if (grid.dim() != v.param_dim()) throw std::invalid_argument("is_graph: grid dimension mismatch");
  const auto points = grid.points();
  const std::size_t n = points.size();
  const std::size_t b = v.base_dim();
  std::vector<std::optional<Eigen::VectorXd>> images(n);
  for (std::size_t i = 0; i < n; ++i) {
    try {
      Eigen::VectorXd img = v(points[i]);
      if (img.allFinite()) images[i] = std::move(img);
    } catch (const DomainError&) {
    }
  }

  auto same_base = [&](const Eigen::VectorXd& a, const Eigen::VectorXd& c) {
    return (a.head(b) - c.head(b)).cwiseAbs().maxCoeff() <= tol.base;
  };
  auto collides = [&](const Eigen::VectorXd& a, const Eigen::VectorXd& c) {
    return same_base(a, c) && std::abs(a(b) - c(b)) > tol.value;
  };
  auto witness = [&](const Eigen::VectorXd& p1, const Eigen::VectorXd& p2, const char* note) {
    GraphCheck out;
    out.graph = false;
    out.witness = Witness{to_std(concat(p1, p2)), to_std(concat(v(p1), v(p2))), note};
    return out;
  };

  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < n; ++i) {
    if (images[i]) order.push_back(i);
  }
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t c) { return (*images[a])(0) < (*images[c])(0); });
  for (std::size_t a = 0; a < order.size(); ++a) {
    for (std::size_t c = a + 1; c < order.size(); ++c) {
      if ((*images[order[c]])(0) - (*images[order[a]])(0) > tol.base) break;
      if (collides(*images[order[a]], *images[order[c]])) {
        return witness(points[order[a]], points[order[c]], "two samples share a base point");
      }
    }
  }

  std::vector<bool> usable(n);
  for (std::size_t i = 0; i < n; ++i) usable[i] = images[i].has_value();
  const auto folds = detail::axis_line_folds(v.base_map(), grid, usable, tol.base, 1,
                                             [&](const Eigen::VectorXd& p1, const Eigen::VectorXd& p2) {
                                               return collides(v(p1), v(p2));
                                             });
  if (!folds.empty()) return witness(folds.front().first, folds.front().second, "base projection folds");
  return {};
}

// PDE residuals.

PdeResidual::PdeResidual(std::vector<std::string> vars, std::string unknown, std::string residual,
                         std::map<std::string, double> params)
    : vars_(std::move(vars)), unknown_(std::move(unknown)), text_(std::move(residual)) {
  if (vars_.empty()) throw std::invalid_argument("PdeResidual needs independent variables");
  const std::set<std::string> declared(vars_.begin(), vars_.end());
  if (declared.size() != vars_.size() || declared.count(unknown_)) {
    throw std::invalid_argument("PdeResidual: variable names must be distinct from each other and the unknown");
  }

  static const std::regex marker(R"(D\(\s*([A-Za-z_]\w*)\s*((?:,\s*[A-Za-z_]\w*\s*)+)\))");
  static const std::regex name(R"([A-Za-z_]\w*)");
  std::string rewritten;
  auto last = text_.cbegin();
  for (std::sregex_iterator it(text_.begin(), text_.end(), marker), end; it != end; ++it) {
    const auto& m = *it;
    if (m[1].str() != unknown_) throw std::invalid_argument("PdeResidual: derivative of unknown '" + m[1].str() + "'");
    std::vector<std::string> order;
    const std::string list = m[2].str();
    for (std::sregex_iterator v(list.begin(), list.end(), name); v != end; ++v) {
      if (!declared.count(v->str())) throw std::invalid_argument("PdeResidual: undeclared variable '" + v->str() + "'");
      order.push_back(v->str());
    }
    if (order.size() > 2) throw std::invalid_argument("PdeResidual: derivatives above second order");
    std::sort(order.begin(), order.end());
    std::string placeholder = "__D";
    for (const auto& v : order) placeholder += "_" + v;
    if (std::find(placeholders_.begin(), placeholders_.end(), placeholder) == placeholders_.end()) {
      placeholders_.push_back(placeholder);
      markers_.push_back(order);
    }
    rewritten.append(last, m[0].first);
    rewritten += placeholder;
    last = m[0].second;
  }
  rewritten.append(last, text_.cend());

  Expr e = parse_expr(rewritten);
  std::map<std::string, Expr, std::less<>> constants;
  for (const auto& [k, val] : params) constants.emplace(k, constant(val));
  e = substitute(e, constants);
  for (const auto& v : free_variables(e)) {
    const bool known = declared.count(v) || v == unknown_ ||
                       std::find(placeholders_.begin(), placeholders_.end(), v) != placeholders_.end();
    if (!known) throw std::invalid_argument("PdeResidual: undeclared symbol '" + v + "'");
  }
  templ_ = e;
}

Expr PdeResidual::apply(const SmoothMap& u) const {
  if (u.out_dim() != 1) throw std::invalid_argument("PdeResidual::apply needs a single-output function");
  const std::set<std::string> a(u.inputs().begin(), u.inputs().end()), c(vars_.begin(), vars_.end());
  if (a != c) throw std::invalid_argument("PdeResidual::apply: the function's inputs must be the PDE's variables");
  std::map<std::string, Expr, std::less<>> repl;
  repl.emplace(unknown_, u.output(0));
  for (std::size_t i = 0; i < markers_.size(); ++i) repl.emplace(placeholders_[i], diff(u.output(0), markers_[i]));
  return substitute(templ_, repl);
}

double PdeResidual::evaluate(std::span<const double> x, double u, std::span<const double> derivatives) const {
  if (x.size() != vars_.size() || derivatives.size() != markers_.size()) {
    throw std::invalid_argument("PdeResidual::evaluate: jet size mismatch");
  }
  std::vector<std::string> names(vars_);
  names.push_back(unknown_);
  names.insert(names.end(), placeholders_.begin(), placeholders_.end());
  std::vector<double> values(x.begin(), x.end());
  values.push_back(u);
  values.insert(values.end(), derivatives.begin(), derivatives.end());
  return eval(templ_, names, values);
}

double residual_max(const PdeResidual& pde, const SmoothMap& u, const SamplingGrid& grid) {
  if (grid.dim() != u.in_dim()) throw std::invalid_argument("residual_max: grid dimension mismatch");
  const Expr e = pde.apply(u);
  double worst = 0.0;
  for (const auto& p : grid.points()) {
    double r;
    try {
      r = eval(e, u.inputs(), std::span<const double>(p.data(), p.size()));
    } catch (const DomainError& err) {
      throw DomainError(std::string(err.what()) + " at " + point_text(p));
    }
    worst = std::max(worst, std::isnan(r) ? INFINITY : std::abs(r));
  }
  return worst;
}

namespace {

// Residual of the re-graphed curve lambda -> (b(lambda), v(lambda)) at the
// images of the grid parameters; U' = v'/b', U'' = (v'' b' - v' b'') / b'^3.
double regraphed_residual(const PdeResidual& pde, const ParametricFunction& w, const SamplingGrid& grid,
                          Eigen::VectorXd& worst_point) {
  const std::string& lam = w.map().inputs().front();
  const Expr b = w.map().output(0), v = w.map().output(1);
  const Expr b1 = diff(b, lam), v1 = diff(v, lam);
  const Expr b2 = diff(b1, lam), v2 = diff(v1, lam);
  const std::string names[] = {lam};
  double worst = 0.0;
  for (double l : grid.axis_values(0)) {
    const std::span<const double> at(&l, 1);
    const double bp = eval(b1, names, at);
    if (std::abs(bp) < 1e-8) continue;
    const double vp = eval(v1, names, at);
    const double d1 = vp / bp;
    const double d2 = (eval(v2, names, at) * bp - vp * eval(b2, names, at)) / (bp * bp * bp);
    std::vector<double> jet;
    for (const auto& m : pde.markers()) jet.push_back(m.size() == 1 ? d1 : d2);
    const double x = eval(b, names, at);
    const double r = std::abs(pde.evaluate(std::span<const double>(&x, 1), eval(v, names, at), jet));
    if (!(r <= worst)) {
      worst = std::isnan(r) ? INFINITY : r;
      worst_point = Eigen::VectorXd::Constant(1, x);
    }
  }
  return worst;
}

}  // namespace

VerificationReport semi_symmetry_check(const PdeResidual& pde, const SmoothMap& f, const std::vector<SmoothMap>& family,
                                       const SamplingGrid& grid, double tol) {
  VerificationReport r;
  r.suite = "semi-symmetry";
  r.tolerance = tol;
  r.grid = grid.summary();
  const bool vertical = is_vertical(f);
  DeviationTracker dev;
  for (const auto& u : family) {
    const std::string label = to_string(u.output(0));
    if (residual_max(pde, u, grid) > tol) throw PreconditionError("family member " + label + " is not a solution");
    const ParametricFunction w = act(f, canonical_parametric(u));
    const GraphCheck g = is_graph(w, grid);
    if (!g.graph) {
      r.inconclusive = true;
      r.witnesses.push_back(*g.witness);
      r.notes.push_back("image of " + label + " is not a graph; no semi-symmetry verdict");
      continue;
    }
    double res;
    Eigen::VectorXd where = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(u.in_dim()));
    if (vertical) {
      const Expr transformed = substitute(f.outputs().back(), f.inputs().back(), u.output(0));
      res = residual_max(pde, SmoothMap(u.inputs(), {transformed}), grid);
      r.notes.push_back(label + " -> " + to_string(transformed));
    } else if (pde.vars().size() == 1) {
      res = regraphed_residual(pde, w, grid, where);
      r.notes.push_back(label + " re-graphed through its base coordinate");
    } else {
      r.inconclusive = true;
      r.notes.push_back("non-vertical map on a several-variable PDE is not re-graphed");
      continue;
    }
    dev.observe(res, where, Eigen::VectorXd::Constant(1, res));
    ++r.evaluated;
  }
  dev.write_to(r);
  r.finalize();
  return r;
}

ConstrainedScan constrained_symmetry_scan(const SmoothMap& family, const std::function<bool(const Eigen::VectorXd&)>& in_s,
                                          std::span<const double> params, const SamplingGrid& state_grid) {
  if (family.in_dim() != family.out_dim() + 1 || state_grid.dim() != family.out_dim()) {
    throw std::invalid_argument("constrained_symmetry_scan: family needs inputs (g, x...) matching the state grid");
  }
  ConstrainedScan out;
  const auto points = state_grid.points();
  for (double g : params) {
    bool ok = true;
    for (const auto& x : points) {
      if (!in_s(x)) continue;
      Eigen::VectorXd arg(x.size() + 1);
      arg << g, x;
      const Eigen::VectorXd y = family(arg);
      if (!in_s(y)) {
        out.witnesses.push_back(Witness{to_std(arg), to_std(y), "mapped outside S"});
        ok = false;
        break;
      }
    }
    (ok ? out.invariant : out.violating).push_back(g);
  }
  return out;
}

}  // namespace gls
