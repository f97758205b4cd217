#include "gls/suites.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

#include "gls/enforcing.hpp"
#include "gls/errors.hpp"
#include "gls/evolution_pde.hpp"
#include "gls/semigroup.hpp"
#include "gls/semisym.hpp"

namespace gls {

namespace {

Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd out(v.size());
  Eigen::Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

std::string num(double v, int digits = 6) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

// A report that holds one scalar deviation measured outside the grid checkers.
VerificationReport scalar_report(std::string suite, double deviation, double tol, std::string grid,
                                 std::size_t evaluated) {
  VerificationReport r;
  r.suite = std::move(suite);
  r.max_deviation = std::isnan(deviation) ? INFINITY : deviation;
  r.tolerance = tol;
  r.grid = std::move(grid);
  r.evaluated = evaluated;
  r.finalize();
  return r;
}

const SmoothMap& bump() {
  static const SmoothMap f = SmoothMap::parse({"y"}, {"1/(y^2+1)"});
  return f;
}

std::vector<std::pair<double, double>> all_pairs(const std::vector<double>& ts) {
  std::vector<std::pair<double, double>> out;
  for (double t : ts)
    for (double s : ts) out.emplace_back(t, s);
  return out;
}

TimeAction custom_action(const std::string& text) {
  return TimeAction("custom", SmoothMap({"t", "y"}, {parse_expr(text)}), TimeDomain::NonNegative);
}

const PdeResidual& transport() {
  static const PdeResidual pde({"t", "x"}, "U", "D(U,t) - D(U,x)");
  return pde;
}

const std::vector<std::string> kWaveProfiles{"sin(z)", "z", "exp(z)", "z^3"};
const std::vector<std::string> kVerticalMaps{"u^3 - u", "u^2", "tanh(u)"};

SmoothMap wave(const std::string& h) {
  return SmoothMap({"t", "x"}, {substitute(parse_expr(h), "z", parse_expr("t + x"))});
}

// Suites.

SuiteRun symbolic_suite(const SuiteConfig& cfg) {
  SuiteRun run;
  const double tol = cfg.tolerance("derivative", 1e-6);
  const auto exprs = registered_expressions();

  VerificationReport round;
  round.suite = "symbolic:round-trip";
  round.grid = std::to_string(exprs.size()) + " registered expressions";
  for (const auto& [name, e] : exprs) {
    ++round.evaluated;
    const std::string text = to_string(e);
    if (!structurally_equal(parse_expr(text), e)) {
      ++round.failures;
      round.witnesses.push_back(Witness{{}, {}, name + ": " + text});
    }
  }
  round.finalize();
  run.reports.push_back(round);

  // Central differences at seeded points of [0.1, 2]^n.
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> coord(0.1, 2.0);
  VerificationReport fd;
  fd.suite = "symbolic:diff-vs-fd";
  fd.tolerance = tol;
  fd.grid = "4 seeded points per variable in [0.1,2]";
  DeviationTracker dev;
  for (const auto& [name, e] : exprs) {
    const auto vars = free_variables(e);
    for (const auto& v : vars) {
      const Expr d = diff(e, v);
      for (int k = 0; k < 4; ++k) {
        Bindings b;
        for (const auto& w : vars) b[w] = coord(rng);
        try {
          const double exact = eval(d, b);
          const double x = b[v];
          const double h = 1e-6 * (1.0 + std::abs(x));
          b[v] = x + h;
          const double up = eval(e, b);
          b[v] = x - h;
          const double down = eval(e, b);
          const double approx = (up - down) / (2.0 * h);
          if (!std::isfinite(exact) || !std::isfinite(approx)) {
            ++fd.skipped;
            continue;
          }
          Eigen::VectorXd point(1);
          point(0) = x;
          dev.observe(std::abs(exact - approx) / (1.0 + std::abs(exact)), point, vec({exact, approx}));
          ++fd.evaluated;
        } catch (const DomainError&) {
          ++fd.skipped;
        }
      }
    }
  }
  dev.write_to(fd);
  fd.finalize();
  run.reports.push_back(fd);
  return run;
}

SuiteRun identity_suite(const SuiteConfig& cfg) {
  SuiteRun run;
  const double tol = cfg.tolerance("identity", 1e-12);
  const SamplingGrid ys = SamplingGrid({cfg.axis("y", {-3, 3, 61})}, cfg.seed);
  if (auto text = cfg.expression("action")) {
    run.reports.push_back(identity_check(custom_action(*text), ys, tol));
    return run;
  }
  const auto g = MediatorFunction::square_root();
  for (const auto& a : {sqrt_action(), milder_action()}) run.reports.push_back(identity_check(a, ys, tol));
  for (const std::string f : {"y^2", "1/(y^2+1)", "sin(y)"}) {
    run.reports.push_back(identity_check(homotopy_action(SmoothMap::parse({"y"}, {f}), g), ys, tol));
    run.reports.back().suite += " f=" + f;
  }
  run.reports.push_back(identity_check(cuberoot_group_action(), ys, tol));
  const SamplingGrid ea_grid({cfg.axis("t", {0, 1, 5}), cfg.axis("ea-y", {-0.2, 4, 41})}, cfg.seed);
  run.reports.push_back(identity_check(gls_autonomous_operator().as_action(), ea_grid, tol));
  return run;
}

SuiteRun composition_suite(const SuiteConfig& cfg) {
  SuiteRun run;
  const double tol = cfg.tolerance("composition", 1e-9);
  const SamplingGrid ys = SamplingGrid({cfg.axis("y", {-3, 3, 61})}, cfg.seed);
  const auto pairs = all_pairs({0.0, 0.25, 0.5, 1.0});
  if (auto text = cfg.expression("action")) {
    run.reports.push_back(composition_check(custom_action(*text), pairs, ys, tol));
    return run;
  }
  run.reports.push_back(composition_check(cuberoot_group_action(), pairs, ys, tol));
  run.reports.push_back(composition_check(linear_soliton_flow().alpha_action(vec({1.5, 0.2})), pairs, ys, tol));
  const SamplingGrid ea_grid({cfg.axis("t", {0, 1, 5}), cfg.axis("ea-y", {-0.2, 4, 41})}, cfg.seed);
  run.reports.push_back(composition_check(gls_autonomous_operator().as_action(), pairs, ea_grid, tol));
  return run;
}

SuiteRun gls_semigroup_suite(const SuiteConfig& cfg) {
  SuiteRun run;
  const double tol = cfg.tolerance("law", 1e-9);
  const std::vector<double> ts{0, 0.25, 0.5, 0.75, 1};
  const auto pairs = all_pairs(ts);
  const OneTimeEvolution ea = gls_autonomous_operator();
  const SamplingGrid law({cfg.axis("t", {0, 1, 5}), cfg.axis("y", {-0.2, 4, 41})}, cfg.seed);
  run.reports.push_back(identity_check(ea.as_action(), law, tol));
  run.reports.push_back(one_time_law_check(ea, pairs, law, tol));

  std::vector<std::array<double, 3>> triples;
  for (double t : {0.25, 1.0, 2.25})
    for (double s : {0.25, 1.0, 2.25})
      for (double r : {0.25, 1.0, 2.25}) triples.push_back({t, s, r});
  run.reports.push_back(
      two_time_law_check(gls_two_time_operator(), triples, SamplingGrid({cfg.axis("two-time-y", {-0.1, 4, 42})}), tol));

  const SamplingGrid first({cfg.axis("s", {0, 2, 5}), cfg.axis("t", {0, 1, 5}), cfg.axis("y", {-0.2, 4, 41})},
                           cfg.seed);
  run.reports.push_back(first_component_check(ea, first, cfg.tolerance("first-component", 1e-12)));
  run.lines.push_back("laws restricted to 1 + 4 sqrt(t) y >= 0 along each composition");
  return run;
}

SuiteRun negative_control_suite(const SuiteConfig& cfg) {
  SuiteRun run;
  const double bound = cfg.tolerance("min-deviation", 0.1);
  const std::vector<std::pair<double, double>> times{{1.0, 1.0}};
  VerificationReport r = composition_check(sqrt_action(), times, SamplingGrid::line(0, 1, 2), bound);
  r.suite = "negative-control:" + r.suite;
  const bool violated = !r.inconclusive && r.max_deviation > bound;
  r.notes.push_back("expected to fail: the raw action is not a semigroup");
  r.failures = violated ? 0 : 1;
  r.pass = violated;
  run.reports.push_back(r);
  run.lines.push_back("H(1, H(1, 1)) = " + num(sqrt_action()(1.0, sqrt_action()(1.0, 1.0))) +
                      ", H(2, 1) = " + num(sqrt_action()(2.0, 1.0)));
  return run;
}

VerificationReport classification_report(const std::string& name, const DichotomyResult& d, Dichotomy expected) {
  VerificationReport r;
  r.suite = "dichotomy:" + name;
  r.tolerance = d.composition.tolerance;
  r.max_deviation = std::max(d.identity.max_deviation, d.composition.max_deviation);
  r.grid = d.probes.empty() ? d.composition.grid : d.probes.front().second.grid;
  r.evaluated = d.identity.evaluated + d.composition.evaluated;
  for (const auto& [t, probe] : d.probes) {
    r.evaluated += probe.evaluated;
    if (!probe.witnesses.empty()) {
      Witness w = probe.witnesses.front();
      w.note = "t = " + num(t) + ": " + w.note;
      r.witnesses.push_back(std::move(w));
    }
  }
  r.notes.push_back(std::string("classification ") + to_string(d.classification) + ", expected " + to_string(expected));
  if (d.classification != expected) ++r.failures;
  r.finalize();
  return r;
}

SuiteRun dichotomy_suite(const SuiteConfig& cfg) {
  SuiteRun run;
  const double tol = cfg.tolerance("law", 1e-9);

  double worst = 0.0;
  for (double t : {0.25, 1.0, 4.0}) {
    const auto [a, b] = noninvertibility_witness_sqrt(t);
    worst = std::max(worst, std::abs(sqrt_action()(t, a) - sqrt_action()(t, b)));
  }
  run.reports.push_back(scalar_report("witness:sqrt-action", worst, cfg.tolerance("witness", 1e-12),
                                      "t in {0.25,1,4}, pair (0, -1/sqrt t)", 3));

  const std::vector<double> ts{0.0, 0.5, 1.0};
  {
    const SamplingGrid probe({cfg.axis("t", {0, 1, 5}), cfg.axis("probe-y", {-2, 4, 61})}, cfg.seed);
    const SamplingGrid law({cfg.axis("t", {0, 1, 5}), cfg.axis("law-y", {-0.2, 4, 22})}, cfg.seed);
    const auto d = dichotomy_classify(gls_autonomous_operator().as_action(), ts, probe, tol, law);
    run.reports.push_back(classification_report("gls-evolution", d, Dichotomy::GenuineSemigroup));
  }
  const SamplingGrid ys({cfg.axis("y", {-3, 3, 61})}, cfg.seed);
  run.reports.push_back(classification_report(
      "cuberoot-flow", dichotomy_classify(cuberoot_group_action(), ts, ys, tol), Dichotomy::GroupLike));
  run.reports.push_back(classification_report(
      "soliton-alpha", dichotomy_classify(linear_soliton_flow().alpha_action(vec({1.5, 0.2})), ts, ys, tol),
      Dichotomy::GroupLike));
  return run;
}

SuiteRun ode_suite(const SuiteConfig& cfg) {
  SuiteRun run;
  const double tol = cfg.tolerance("ode", 1e-10);

  {
    const SamplingGrid grid({cfg.axis("t", {1e-3, 10, 50}), cfg.axis("y", {-5, 5, 50})}, cfg.seed);
    VerificationReport r;
    r.suite = "ode:sqrt-action";
    r.tolerance = tol;
    r.grid = grid.summary();
    DeviationTracker dev;
    for (const auto& p : grid.points()) {
      bool used = false;
      for (Branch b : {Branch::Plus, Branch::Minus}) {
        if (!branch_active(b, p(0), p(1))) continue;
        try {
          dev.observe(ode_residual_explicit(p(0), p(1), b), p, vec({b == Branch::Plus ? 1.0 : -1.0}));
          used = true;
        } catch (const DomainError&) {
        }
      }
      used ? ++r.evaluated : ++r.skipped;
    }
    dev.write_to(r);
    r.finalize();
    run.reports.push_back(r);
  }

  {
    const double htol = cfg.tolerance("homotopy", 1e-9);
    const SamplingGrid grid({cfg.axis("homotopy-t", {1e-3, 10, 20}), cfg.axis("homotopy-y", {-3, 3, 13})}, cfg.seed);
    const auto g = MediatorFunction::square_root();
    for (const auto& [label, f] : {std::pair{"y^2", SmoothMap::parse({"y"}, {"y^2"})}, std::pair{"1/(y^2+1)", bump()}}) {
      VerificationReport r;
      r.suite = std::string("ode:homotopy f=") + label;
      r.tolerance = htol;
      r.grid = grid.summary();
      DeviationTracker dev;
      for (const auto& p : grid.points()) {
        dev.observe(ode_residual_homotopy(f, g, p(0), p.tail(1)), p, p.tail(1));
        ++r.evaluated;
      }
      dev.write_to(r);
      r.finalize();
      run.reports.push_back(r);
    }
  }

  {
    const SamplingGrid grid({cfg.axis("milder-t", {-5, 5, 50}), cfg.axis("milder-y", {-5, 5, 50})}, cfg.seed);
    VerificationReport r;
    r.suite = "ode:milder-action";
    r.tolerance = tol;
    r.grid = grid.summary();
    DeviationTracker dev;
    for (const auto& p : grid.points()) {
      bool used = false;
      for (MilderBranch b : {MilderBranch::Regular, MilderBranch::Singular}) {
        if (!branch_active(b, p(0), p(1))) continue;
        try {
          dev.observe(ode_residual_milder(p(0), p(1), b), p, vec({0}));
          used = true;
        } catch (const DomainError&) {
        }
      }
      used ? ++r.evaluated : ++r.skipped;
    }
    dev.write_to(r);
    r.finalize();
    run.reports.push_back(r);
  }

  const std::vector<double> eps{1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7, 1e-8, 1e-9, 1e-10};
  run.reports.push_back(limit_ic_check(sqrt_action(), vec({1.0}), eps, cfg.tolerance("limit-ic", 1e-5 + 1e-15)));
  run.reports.push_back(k_action_relation_check(SamplingGrid({{0, 9, 31}, {-3, 3, 31}}), 1e-12));
  return run;
}

SuiteRun flow_suite(const SuiteConfig& cfg) {
  SuiteRun run;
  FlowSettings graded;
  graded.steps = 100000;
  graded.eps_start = 1e-8;
  graded.grading = 2.0;
  run.reports.push_back(flow_vs_closed_form(sqrt_action(), sqrt_branch_system(Branch::Minus), vec({1}), 1.0, graded,
                                            cfg.tolerance("sqrt-flow", 1e-5)));
  run.reports.back().notes.push_back("mesh t_k = eps + (1 - eps) (k/N)^2, N = 100000, eps = 1e-8");

  FlowSettings augmented = graded;
  augmented.start_state = [](double t) { return vec({t, 1.0 + std::sqrt(t)}); };
  run.reports.push_back(flow_vs_closed_form(sqrt_action(), augment_system(sqrt_branch_system(Branch::Minus)), vec({1}),
                                            1.0, augmented, cfg.tolerance("sqrt-flow", 1e-5)));
  run.reports.back().suite += " (augmented)";

  FlowSettings cube;
  cube.steps = 1000;
  run.reports.push_back(flow_vs_closed_form(cuberoot_group_action(), cuberoot_system(), vec({1}), 1.0, cube,
                                            cfg.tolerance("cuberoot-flow", 1e-6)));
  run.lines.push_back("H(1, 1) = 2 reproduced from eps = 1e-8");
  return run;
}

SuiteRun reduction_suite(const SuiteConfig& cfg) {
  SuiteRun run;
  const double exact = cfg.tolerance("exact", 1e-12);
  run.reports.push_back(first_component_check(quadratic_autonomous(), SamplingGrid({{0, 3, 7}, {0, 3, 7}, {-5, 5, 11}}),
                                              exact));

  std::vector<std::array<double, 3>> triples;
  for (double t : {0, 1, 2, 3})
    for (double s : {0, 1, 2, 3})
      for (double r : {0, 1, 2, 3}) triples.push_back({t, s, r});
  run.reports.push_back(two_time_law_check(quadratic_two_time(), triples, SamplingGrid::line(-5, 5, 21), exact));
  run.reports.push_back(one_time_law_check(quadratic_autonomous(), all_pairs({0, 0.5, 1, 2}),
                                           SamplingGrid({{0, 3, 7}, {-5, 5, 11}}), exact));

  // Recovery from the t0 = 0 slice only.
  const auto slice = quadratic_two_time().slice(0.0);
  const SamplingGrid grid({cfg.axis("t", {0, 3, 7}), cfg.axis("s", {0, 3, 4}), cfg.axis("y", {-5, 5, 11})}, cfg.seed);
  VerificationReport r;
  r.suite = "recovery:quadratic";
  r.tolerance = cfg.tolerance("recovery", 1e-9);
  r.grid = grid.summary();
  DeviationTracker dev;
  for (const auto& p : grid.points()) {
    const double t = p(0), s = p(1), y = p(2);
    const auto rec = recover_evolution(slice, 0.0, t, s, y);
    const double oracle = s * s - t * t + y;
    dev.observe(std::abs(rec.value - oracle), p, vec({rec.value, oracle}));
    ++r.evaluated;
  }
  dev.write_to(r);
  r.finalize();
  run.reports.push_back(r);
  return run;
}

SuiteRun recovery_crosscheck_suite(const SuiteConfig& cfg) {
  SuiteRun run;
  std::mt19937_64 rng(cfg.seed);
  const Axis times = cfg.axis("t", {0, 4, 2});
  std::uniform_real_distribution<double> time(times.lo, times.hi), unit(0.0, 1.0);
  const auto slice = gls_two_time_operator().slice(0.0);
  RecoverySettings settings;
  settings.slice_derivative = [](double t, double y) { return 1.0 + 2.0 * std::sqrt(t) * y; };

  VerificationReport r;
  r.suite = "recovery:gls-evolution";
  r.tolerance = cfg.tolerance("recovery", 1e-9);
  r.grid = "100 seeded (t,s,y), t,s in [" + num(times.lo) + "," + num(times.hi) +
           "], y at least 0.05 above the fold, seed=" + std::to_string(cfg.seed);
  DeviationTracker dev;
  double worst_condition = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double t = time(rng), s = time(rng);
    const double floor = t > 0 ? -0.25 / std::sqrt(t) : -3.0;
    const double y = floor + 0.05 + (5.0 - floor) * unit(rng);
    const Eigen::VectorXd p = vec({t, s, y});
    try {
      const auto rec = recover_evolution(slice, 0.0, t, s, y, settings);
      const double direct = gls_two_time(t, s, y);
      dev.observe(std::abs(rec.value - direct) / (1.0 + std::abs(direct)), p, vec({rec.value, direct}));
      worst_condition = std::max(worst_condition, rec.condition);
      ++r.evaluated;
    } catch (const RootNotFound& e) {
      ++r.failures;
      r.witnesses.push_back(Witness{to_std(p), {}, e.what()});
    }
  }
  dev.write_to(r);
  r.notes.push_back("largest condition number " + num(worst_condition));
  r.finalize();
  run.reports.push_back(r);
  return run;
}

SuiteRun semi_symmetry_suite(const SuiteConfig& cfg) {
  SuiteRun run;
  const double tol = cfg.tolerance("residual", 1e-12);
  const SamplingGrid grid({cfg.axis("t", {0, 1, 21}), cfg.axis("x", {0, 1, 21})}, cfg.seed);
  std::vector<SmoothMap> family;
  for (const auto& h : kWaveProfiles) family.push_back(wave(h));
  for (const auto& g : kVerticalMaps) {
    VerificationReport r =
        semi_symmetry_check(transport(), vertical_map({"t", "x", "u"}, parse_expr(g), "u"), family, grid, tol);
    r.suite = "semi-symmetry:transport g=" + g;
    run.reports.push_back(r);
  }

  const auto line = SamplingGrid::line(-1, 1, 41);
  const PdeResidual growth({"x"}, "U", "D(U,x) - U");
  const std::vector<SmoothMap> exps{SmoothMap::parse({"x"}, {"exp(x)"}), SmoothMap::parse({"x"}, {"3*exp(x)"})};
  VerificationReport shift = semi_symmetry_check(
      growth, SmoothMap::parse({"x", "u"}, {"x + 0.7", "u*exp(0.7)"}), exps, line, tol);
  shift.suite = "semi-symmetry:growth shift";
  run.reports.push_back(shift);
  return run;
}

SuiteRun parametric_suite(const SuiteConfig& cfg) {
  SuiteRun run;
  const auto v = canonical_parametric(SmoothMap::parse({"x"}, {"x^2"}));
  const SamplingGrid grid({cfg.axis("x", {-2, 2, 401})}, cfg.seed);
  for (const auto& [label, angle, expect_graph] :
       {std::tuple{"pi/4", std::numbers::pi / 4, false}, std::tuple{"pi", std::numbers::pi, true}}) {
    const GraphCheck g = is_graph(act(plane_rotation({"x", "u"}, angle), v), grid);
    VerificationReport r;
    r.suite = std::string("parametric:rotated-parabola theta=") + label;
    r.grid = grid.summary();
    r.evaluated = grid.size();
    if (g.witness) r.witnesses.push_back(*g.witness);
    r.notes.push_back(std::string(g.graph ? "graph" : "not a graph") + ", expected " +
                      (expect_graph ? "graph" : "not a graph"));
    if (g.graph != expect_graph || (!expect_graph && !g.witness)) ++r.failures;
    r.finalize();
    run.reports.push_back(r);
  }
  return run;
}

SuiteRun burgers_suite(const SuiteConfig& cfg) {
  SuiteRun run;
  const SamplingGrid grid({cfg.axis("t", {0, 1, 11}), cfg.axis("x", {-5, 5, 41})}, cfg.seed);
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> cd(-2, 2), visc(0.1, 1), shift(-1, 1);
  VerificationReport r;
  r.suite = "burgers:soliton-residual";
  r.tolerance = cfg.tolerance("residual", 1e-8);
  r.grid = "20 seeded tuples on " + grid.summary();
  DeviationTracker dev;
  while (r.evaluated < 20) {
    const double c = cd(rng), d = cd(rng), mu = visc(rng), x0 = shift(rng);
    if (!(c * c + d > 0)) continue;
    dev.observe(burgers_residual(burgers_soliton(x0, c, d, mu), mu, grid), vec({x0, c, d, mu}), vec({0}));
    ++r.evaluated;
  }
  dev.write_to(r);
  r.finalize();
  run.reports.push_back(r);

  const double exact = cfg.tolerance("exact", 1e-12);
  const ParamFlow flow = linear_soliton_flow();
  run.reports.push_back(soliton_translation_check(flow, burgers_family(0.5), vec({0}), vec({1, 1}),
                                                  SamplingGrid({{0, 2, 9}, {-5, 5, 41}}), exact));
  run.reports.push_back(
      param_flow_check(flow, SamplingGrid({{0, 2, 5}, {0, 2, 5}, {-3, 3, 5}, {-2, 2, 5}, {-1, 2, 4}}), exact));
  return run;
}

SuiteRun heat_suite(const SuiteConfig& cfg) {
  SuiteRun run;
  const SamplingGrid grid({cfg.axis("t", {0.5, 2, 16}), cfg.axis("x", {-4, 4, 33})}, cfg.seed);
  run.reports.push_back(heat_flow_demo(grid, cfg.tolerance("heat", 1e-10)));
  return run;
}

std::string join(const std::vector<double>& v) {
  std::string out;
  for (double x : v) out += (out.empty() ? "" : ", ") + num(x, 9);
  return out.empty() ? "none" : out;
}

SuiteRun diffeo_suite(const SuiteConfig& cfg) {
  SuiteRun run;
  const TimeAction a = homotopy_action(bump(), MediatorFunction::square_root());
  const SamplingGrid ts({cfg.axis("t", {0, 12, 121})}, cfg.seed);
  const SamplingGrid ys({cfg.axis("y", {-5, 5, 201})}, cfg.seed);
  const DiffeoTimeSet set = diffeo_time_set(a, ts, ys);
  const std::vector<double> range = sqrt_homotopy_thresholds(bump(), ys);

  VerificationReport r;
  r.suite = "diffeo-thresholds:bump-homotopy";
  r.tolerance = cfg.tolerance("threshold", 1e-4);
  r.grid = ts.summary() + " * " + ys.summary();
  r.evaluated = set.samples.size();
  if (set.thresholds.size() != range.size()) {
    ++r.failures;
    r.notes.push_back("sampled and range-condition threshold counts differ");
  } else {
    for (std::size_t i = 0; i < range.size(); ++i) {
      r.max_deviation = std::max(r.max_deviation, std::abs(set.thresholds[i] - range[i]));
    }
  }
  r.finalize();
  run.reports.push_back(r);
  run.lines.push_back("computed thresholds (sampled slope sign): " + join(set.thresholds));
  run.lines.push_back("computed thresholds (range of f'): " + join(range));
  run.lines.push_back("reference interval [0, 4/9) u (4, inf)");
  if (set.thresholds.size() == 2) {
    run.lines.push_back("diffeomorphic for t in [0, " + num(set.thresholds[0]) + ") u (" + num(set.thresholds[1]) +
                        ", inf)");
  }
  return run;
}

std::vector<SuiteInfo> build_registry() {
  return {
      {"symbolic", "parser round trip and derivatives against central differences", {}, {}, {"derivative"},
       symbolic_suite},
      {"identity", "a(0, y) = y for every registered action", {"action"}, {"y", "t", "ea-y"}, {"identity"},
       identity_suite},
      {"composition", "a(t, a(s, y)) = a(t + s, y) for the group-like and reduced actions", {"action"},
       {"y", "t", "ea-y"}, {"composition"}, composition_suite},
      {"gls-semigroup", "laws of the reduced square-root evolution", {}, {"t", "y", "s", "two-time-y"},
       {"law", "first-component"}, gls_semigroup_suite},
      {"negative-control", "the raw square-root action violates composition", {}, {}, {"min-deviation"},
       negative_control_suite},
      {"dichotomy", "non-invertibility witnesses and group/semigroup classification", {},
       {"t", "y", "probe-y", "law-y"}, {"law", "witness"}, dichotomy_suite},
      {"ode-residuals", "singular ODE residuals, limit initial condition, K relation", {},
       {"t", "y", "homotopy-t", "homotopy-y", "milder-t", "milder-y"}, {"ode", "homotopy", "limit-ic"}, ode_suite},
      {"flow", "RK4 flows against closed forms", {}, {}, {"sqrt-flow", "cuberoot-flow"}, flow_suite},
      {"reduction", "quadratic example: reduction laws and recovery", {}, {"t", "s", "y"}, {"exact", "recovery"},
       reduction_suite},
      {"recovery-crosscheck", "recovery from E(0, .) against the closed two-time form", {}, {"t"}, {"recovery"},
       recovery_crosscheck_suite},
      {"semi-symmetry", "vertical and non-vertical maps transform solutions into solutions", {}, {"t", "x"},
       {"residual"}, semi_symmetry_suite},
      {"parametric", "rotated parabola graph test", {}, {"x"}, {}, parametric_suite},
      {"burgers", "soliton residuals, translation and parameter cocycle", {}, {"t", "x"}, {"residual", "exact"},
       burgers_suite},
      {"heat", "heat kernel residual and forward advance", {}, {"t", "x"}, {"heat"}, heat_suite},
      {"diffeo-thresholds", "times at which the bump homotopy stops being a diffeomorphism", {}, {"t", "y"},
       {"threshold"}, diffeo_suite},
  };
}

// Demos.

void demo_sqrt_action(std::ostream& os) {
  const TimeAction h = sqrt_action();
  for (double t : {0.0, 0.25, 1.0, 4.0}) os << "H(" << t << ", 1) = " << num(h(t, 1.0), 12) << "\n";
  os << "H(1, H(1, 1)) = " << num(h(1.0, h(1.0, 1.0)), 12) << " but H(2, 1) = " << num(h(2.0, 1.0), 12) << "\n";
  const auto [a, b] = noninvertibility_witness_sqrt(1.0);
  os << "H(1, " << a << ") = H(1, " << b << ") = " << num(h(1.0, a)) << "\n";
}

void demo_milder(std::ostream& os) {
  const TimeAction h = milder_action();
  for (double t : {-1.0, 0.0, 1.0}) os << "H(" << t << ", 1) = " << num(h(t, 1.0), 12) << "\n";
  os << "residual (regular branch, t=1, y=1) = " << num(ode_residual_milder(1.0, 1.0, MilderBranch::Regular)) << "\n";
}

void demo_cuberoot(std::ostream& os) {
  FlowSettings cfg;
  cfg.steps = 1000;
  const Trajectory tr = integrate_flow(cuberoot_system(), 0.0, vec({1}), 1.0, cfg);
  os << "RK4 Y(1) = " << num(tr.final_state()(0), 12) << ", closed form cbrt(4) = " << num(std::cbrt(4.0), 12) << "\n";
}

void demo_bump(std::ostream& os) {
  const auto t = sqrt_homotopy_thresholds(bump(), SamplingGrid::line(-5, 5, 201));
  os << "thresholds: " << join(t) << "\n";
  os << "reference interval [0, 4/9) u (4, inf)\n";
}

void demo_gls(std::ostream& os) {
  os << "E(t, s)(y) = " << to_string(gls_two_time_expr()) << "\n";
  os << "E(0, 1)(2) = " << num(gls_two_time(0, 1, 2), 12) << "\n";
  os << "E(1, 4)(6) = " << num(gls_two_time(1, 4, 6), 12) << "\n";
}

void demo_quadratic_recovery(std::ostream& os) {
  const double t = 1.0, s = 2.0, y = 3.0;
  const auto slice = quadratic_two_time().slice(0.0);
  const auto r = recover_evolution(slice, 0.0, t, s, y);
  os << "slice E(0, t)(y) = t^2 + y\n";
  os << "solve E(0, " << t << ")(y*) = " << y << ": brackets";
  for (const auto& [a, b] : r.brackets) os << " [" << num(a) << ", " << num(b) << "]";
  os << "\n";
  os << "y* = " << num(r.ystar, 12) << ", condition = " << num(r.condition) << "\n";
  os << "E(1,2)(3) = E(0, 2)(y*) = " << num(r.value, 12) << "\n";
}

void demo_burgers(std::ostream& os) {
  const SmoothMap u = burgers_soliton(0, 1, 1, 0.5);
  os << "U(t, x) = " << to_string(u.output(0)) << "\n";
  os << "residual = " << num(burgers_residual(u, 0.5, SamplingGrid({{0, 1, 11}, {-5, 5, 41}}))) << "\n";
  os << "alpha(t, x0, c, d) = x0 + c t\n";
}

void demo_rotated_parabola(std::ostream& os) {
  const auto v = canonical_parametric(SmoothMap::parse({"x"}, {"x^2"}));
  const auto grid = SamplingGrid::line(-2, 2, 401);
  for (const auto& [label, angle] : {std::pair{"pi/4", std::numbers::pi / 4}, std::pair{"pi", std::numbers::pi}}) {
    const GraphCheck g = is_graph(act(plane_rotation({"x", "u"}, angle), v), grid);
    os << "theta = " << label << ": " << (g.graph ? "graph" : "not a graph");
    if (g.witness) {
      const auto& w = *g.witness;
      os << " (x = " << num(w.point[0]) << " and " << num(w.point[1]) << " share base " << num(w.value[0]) << ")";
    }
    os << "\n";
  }
}

void demo_strip_scaling(std::ostream& os) {
  const SmoothMap scaling = SmoothMap::parse({"g", "x", "y"}, {"g*x", "y"});
  const std::vector<double> gs{0.25, 0.5, 1.0, 1.5};
  const auto scan = constrained_symmetry_scan(
      scaling, [](const Eigen::VectorXd& p) { return std::abs(p(0)) < 1.0; }, gs,
      SamplingGrid({{-1, 1, 41}, {-2, 2, 5}}));
  os << "strip |x| < 1 kept for g = " << join(scan.invariant) << "\n";
  os << "left for g = " << join(scan.violating) << "\n";
}

void demo_heat(std::ostream& os) {
  const auto r = heat_flow_demo(SamplingGrid({{0.5, 2, 16}, {-4, 4, 33}}), 1e-10);
  os << "K(t, x) = " << to_string(heat_kernel().output(0)) << "\n";
  os << "max deviation " << num(r.max_deviation) << "\n";
  for (const auto& n : r.notes) os << n << "\n";
}

}  // namespace

Axis SuiteConfig::axis(const std::string& name, Axis fallback) const {
  const auto it = grids.find(name);
  return it == grids.end() ? fallback : it->second;
}

double SuiteConfig::tolerance(const std::string& name, double fallback) const {
  const auto it = tolerances.find(name);
  return it == tolerances.end() ? fallback : it->second;
}

std::optional<std::string> SuiteConfig::expression(const std::string& name) const {
  const auto it = expressions.find(name);
  if (it == expressions.end()) return std::nullopt;
  return it->second;
}

bool SuiteRun::pass() const {
  return std::all_of(reports.begin(), reports.end(), [](const VerificationReport& r) { return r.pass; });
}

const std::vector<SuiteInfo>& suite_registry() {
  static const std::vector<SuiteInfo> registry = build_registry();
  return registry;
}

const SuiteInfo* find_suite(std::string_view name) {
  for (const auto& s : suite_registry()) {
    if (s.name == name) return &s;
  }
  return nullptr;
}

void validate_config(const SuiteInfo& suite, const SuiteConfig& cfg) {
  auto known = [](const std::vector<std::string>& names, const std::string& n) {
    return std::find(names.begin(), names.end(), n) != names.end();
  };
  for (const auto& [name, text] : cfg.expressions) {
    if (!known(suite.expressions, name)) throw ConfigError("suite " + suite.name + " has no expression '" + name + "'");
  }
  for (const auto& [name, axis] : cfg.grids) {
    if (!known(suite.grids, name)) throw ConfigError("suite " + suite.name + " has no grid '" + name + "'");
    if (!(axis.lo < axis.hi) || axis.count < 2) {
      throw ConfigError("grid '" + name + "' needs lo < hi and count >= 2");
    }
  }
  for (const auto& [name, tol] : cfg.tolerances) {
    if (!known(suite.tolerances, name)) throw ConfigError("suite " + suite.name + " has no tolerance '" + name + "'");
    if (!(tol > 0.0)) throw ConfigError("tolerance '" + name + "' must be positive");
  }
}

SuiteRun run_suite(const SuiteInfo& suite, const SuiteConfig& cfg) {
  validate_config(suite, cfg);
  SuiteRun run = suite.run(cfg);
  run.suite = suite.name;
  return run;
}

const std::vector<DemoInfo>& demo_registry() {
  static const std::vector<DemoInfo> demos{
      {"sqrt-action", "H(t, y) = y + sqrt(t)*y^2", demo_sqrt_action},
      {"milder-action", "H(t, y) = y + t*y^2", demo_milder},
      {"cuberoot-flow", "Y(t) = cbrt(3*t + y^3)", demo_cuberoot},
      {"bump-homotopy", "H(t, y) = (1 - sqrt(t))*y + sqrt(t)/(y^2 + 1)", demo_bump},
      {"gls-evolution", "E(t, s)(y) = y* + sqrt(s)*y*^2, y* + sqrt(t)*y*^2 = y", demo_gls},
      {"quadratic-recovery", "E(t, s)(y) = s^2 - t^2 + y", demo_quadratic_recovery},
      {"burgers-soliton", "U = c - sqrt(c^2 + d)*tanh(sqrt(c^2 + d)/(2*mu)*(x - x0 - c*t))", demo_burgers},
      {"rotated-parabola", "u = x^2 rotated in the (x, u) plane", demo_rotated_parabola},
      {"strip-scaling", "(x, y) -> (g*x, y) on the strip |x| < 1", demo_strip_scaling},
      {"heat-kernel", "K(t, x) = exp(-x^2/(4*t))/sqrt(t)", demo_heat},
  };
  return demos;
}

const DemoInfo* find_demo(std::string_view name) {
  for (const auto& d : demo_registry()) {
    if (d.name == name) return &d;
  }
  return nullptr;
}

const std::vector<FlowSystem>& flow_registry() {
  static const std::vector<FlowSystem> systems{
      {"quadratic", "dY/dt = 2*t", quadratic_system(), std::nullopt},
      {"cuberoot", "dY/dt = 1/Y^2", cuberoot_system(), cuberoot_group_action()},
      {"sqrt-minus", "dH/dt, bounded branch of y + sqrt(t)*y^2", sqrt_branch_system(Branch::Minus), sqrt_action()},
      {"sqrt-plus", "dH/dt, unbounded branch of y + sqrt(t)*y^2", sqrt_branch_system(Branch::Plus), sqrt_action()},
      {"sqrt-minus-augmented", "(1, F(tau, H)) one dimension up", augment_system(sqrt_branch_system(Branch::Minus)),
       sqrt_action()},
  };
  return systems;
}

const FlowSystem* find_flow_system(std::string_view name) {
  for (const auto& s : flow_registry()) {
    if (s.name == name) return &s;
  }
  return nullptr;
}

std::vector<NamedExpr> registered_expressions() {
  std::vector<NamedExpr> out;
  out.push_back({"sqrt-action", sqrt_action().formula()->output(0)});
  out.push_back({"milder-action", milder_action().formula()->output(0)});
  out.push_back({"cuberoot-flow", cuberoot_group_action().formula()->output(0)});
  out.push_back(
      {"bump-homotopy", homotopy_action(bump(), MediatorFunction::square_root()).formula()->output(0)});
  out.push_back({"sqrt-ode-plus", sqrt_ode_rhs(Branch::Plus)});
  out.push_back({"sqrt-ode-minus", sqrt_ode_rhs(Branch::Minus)});
  out.push_back({"milder-ode-regular", milder_ode_rhs(MilderBranch::Regular)});
  out.push_back({"milder-ode-singular", milder_ode_rhs(MilderBranch::Singular)});
  out.push_back({"gls-evolution", gls_two_time_expr()});
  out.push_back({"quadratic-two-time", quadratic_two_time().formula()->output(0)});
  const auto qa = quadratic_autonomous().formula();
  for (std::size_t i = 0; i < qa->out_dim(); ++i) out.push_back({"quadratic-autonomous", qa->output(i)});
  out.push_back({"burgers-soliton", burgers_soliton(0.3, 1.0, 1.0, 0.5).output(0)});
  out.push_back({"soliton-alpha", linear_soliton_flow().alpha()[0]});
  out.push_back({"heat-kernel", heat_kernel().output(0)});
  for (const auto& h : kWaveProfiles) out.push_back({"wave " + h, wave(h).output(0)});
  for (const auto& g : kVerticalMaps) out.push_back({"vertical " + g, parse_expr(g)});
  const SmoothMap rot = plane_rotation({"x", "u"}, std::numbers::pi / 4);
  for (std::size_t i = 0; i < rot.out_dim(); ++i) out.push_back({"rotation", rot.output(i)});
  return out;
}

}  // namespace gls
