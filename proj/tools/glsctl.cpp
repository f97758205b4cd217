// glsctl: run verification suites, demos and flows from the command line.
//
//   glsctl list
//   glsctl verify --suite gls-semigroup [--scenario file.json] [--seed N] [--out report.json]
//   glsctl demo --name quadratic-recovery
//   glsctl flow --system sqrt-minus --t0 0 --t1 1 --steps 100000 --eps 1e-8 --grading 2 --out flow.csv
//
// Exit codes: 0 all pass, 1 some check failed, 2 input or configuration error.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "gls/errors.hpp"
#include "gls/suites.hpp"
#include "json.hpp"

using json = nlohmann::ordered_json;

namespace {

constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kConfig = 2;

struct Scenario {
  std::string suite;
  gls::SuiteConfig config;
  std::optional<std::string> out;
  std::optional<std::string> csv;
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

void load_scenario(const std::string& path, Scenario& sc) {
  std::ifstream in(path);
  if (!in) throw gls::ConfigError("cannot open scenario " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw gls::ConfigError(std::string("scenario is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw gls::ConfigError("scenario must be a JSON object");
  try {
    for (const auto& [key, value] : doc.items()) {
      if (key == "suite") {
        sc.suite = value.get<std::string>();
      } else if (key == "expressions") {
        for (const auto& [name, text] : value.items()) sc.config.expressions[name] = text.get<std::string>();
      } else if (key == "grids") {
        for (const auto& [name, g] : value.items()) {
          sc.config.grids[name] = gls::Axis{g.at("lo").get<double>(), g.at("hi").get<double>(),
                                            g.at("count").get<std::size_t>()};
        }
      } else if (key == "tolerances") {
        for (const auto& [name, tol] : value.items()) sc.config.tolerances[name] = tol.get<double>();
      } else if (key == "seed") {
        sc.config.seed = value.get<std::uint64_t>();
      } else if (key == "out") {
        sc.out = value.get<std::string>();
      } else {
        throw gls::ConfigError("unknown scenario key '" + key + "'");
      }
    }
  } catch (const json::exception& e) {
    throw gls::ConfigError(std::string("malformed scenario: ") + e.what());
  }
}

json witness_json(const gls::Witness& w) {
  return json{{"point", w.point}, {"value", w.value}, {"note", w.note}};
}

json report_json(const gls::VerificationReport& r) {
  json j;
  j["suite"] = r.suite;
  j["pass"] = r.pass;
  j["inconclusive"] = r.inconclusive;
  j["max_deviation"] = r.max_deviation;
  j["tolerance"] = r.tolerance;
  j["grid"] = r.grid;
  j["evaluated"] = r.evaluated;
  j["skipped"] = r.skipped;
  j["failures"] = r.failures;
  j["witnesses"] = json::array();
  for (const auto& w : r.witnesses) j["witnesses"].push_back(witness_json(w));
  j["notes"] = r.notes;
  return j;
}

void print_run(const gls::SuiteRun& run) {
  std::cout << "== " << run.suite << "\n";
  for (const auto& r : run.reports) {
    std::cout << (r.pass ? "PASS " : r.inconclusive ? "INCONCLUSIVE " : "FAIL ") << r.suite
              << "  max_dev=" << fmt(r.max_deviation) << "  tol=" << fmt(r.tolerance) << "  n=" << r.evaluated;
    if (r.skipped) std::cout << "  skipped=" << r.skipped;
    if (r.failures) std::cout << "  failures=" << r.failures;
    std::cout << "\n";
    for (const auto& n : r.notes) std::cout << "    " << n << "\n";
  }
  for (const auto& l : run.lines) std::cout << "  " << l << "\n";
}

void write_csv(const std::string& path, const std::vector<gls::SuiteRun>& runs) {
  std::ofstream out(path);
  if (!out) throw gls::ConfigError("cannot write " + path);
  out << "suite,check,pass,inconclusive,max_deviation,tolerance,evaluated,skipped,failures\n";
  out.precision(17);
  for (const auto& run : runs) {
    for (const auto& r : run.reports) {
      out << run.suite << ",\"" << r.suite << "\"," << r.pass << "," << r.inconclusive << "," << r.max_deviation << ","
          << r.tolerance << "," << r.evaluated << "," << r.skipped << "," << r.failures << "\n";
    }
  }
}

int verify(Scenario sc) {
  std::vector<const gls::SuiteInfo*> suites;
  if (sc.suite.empty()) throw gls::ConfigError("no suite given");
  if (sc.suite == "all") {
    if (!sc.config.expressions.empty() || !sc.config.grids.empty() || !sc.config.tolerances.empty()) {
      throw gls::ConfigError("suite 'all' takes no overrides");
    }
    for (const auto& s : gls::suite_registry()) suites.push_back(&s);
  } else {
    const auto* s = gls::find_suite(sc.suite);
    if (!s) throw gls::ConfigError("unknown suite '" + sc.suite + "' (see glsctl list)");
    suites.push_back(s);
  }
  for (const auto* s : suites) gls::validate_config(*s, sc.config);

  std::vector<gls::SuiteRun> runs;
  bool pass = true;
  for (const auto* s : suites) {
    runs.push_back(gls::run_suite(*s, sc.config));
    print_run(runs.back());
    pass = pass && runs.back().pass();
  }
  std::cout << (pass ? "all checks passed" : "some checks failed") << "\n";

  if (sc.out) {
    json doc;
    doc["suite"] = sc.suite;
    doc["seed"] = sc.config.seed;
    doc["pass"] = pass;
    doc["suites"] = json::array();
    for (const auto& run : runs) {
      json j;
      j["name"] = run.suite;
      j["pass"] = run.pass();
      j["lines"] = run.lines;
      j["reports"] = json::array();
      for (const auto& r : run.reports) j["reports"].push_back(report_json(r));
      doc["suites"].push_back(std::move(j));
    }
    std::ofstream out(*sc.out);
    if (!out) throw gls::ConfigError("cannot write " + *sc.out);
    out << doc.dump(2) << "\n";
  }
  if (sc.csv) write_csv(*sc.csv, runs);
  return pass ? kPass : kFail;
}

void list() {
  std::cout << "suites:\n";
  for (const auto& s : gls::suite_registry()) std::cout << "  " << s.name << "  " << s.summary << "\n";
  std::cout << "demos:\n";
  for (const auto& d : gls::demo_registry()) std::cout << "  " << d.name << "  " << d.formula << "\n";
  std::cout << "flow systems:\n";
  for (const auto& f : gls::flow_registry()) std::cout << "  " << f.name << "  " << f.formula << "\n";
}

struct FlowArgs {
  std::string system;
  double t0 = 0.0;
  double t1 = 1.0;
  std::size_t steps = 1000;
  double y0 = 1.0;
  double eps = 0.0;
  double grading = 1.0;
  std::string out;
};

int flow(const FlowArgs& a) {
  const auto* fs = gls::find_flow_system(a.system);
  if (!fs) throw gls::ConfigError("unknown system '" + a.system + "' (see glsctl list)");
  const bool augmented = fs->system.kind() == gls::SystemKind::Autonomous && fs->system.dim() == 2;
  Eigen::VectorXd y0(fs->system.dim());
  if (augmented) {
    y0 << a.t0, a.y0;
  } else {
    y0.setConstant(a.y0);
  }

  gls::FlowSettings cfg;
  cfg.steps = a.steps;
  cfg.eps_start = a.eps;
  cfg.grading = a.grading;
  if (a.eps > 0.0 && a.t0 == 0.0 && fs->closed_form) {
    const gls::TimeAction action = *fs->closed_form;
    const double y = a.y0;
    cfg.start_state = [action, y, augmented](double t) {
      const double v = action(t, y);
      Eigen::VectorXd s(augmented ? 2 : 1);
      if (augmented) {
        s << t, v;
      } else {
        s << v;
      }
      return s;
    };
  }

  gls::Trajectory tr;
  try {
    tr = gls::integrate_flow(fs->system, a.t0, y0, a.t1, cfg);
  } catch (const gls::DomainError& e) {
    throw gls::ConfigError(std::string(e.what()) + " (start past the singularity with --eps)");
  } catch (const std::invalid_argument& e) {
    throw gls::ConfigError(e.what());
  }
  std::ofstream out(a.out);
  if (!out) throw gls::ConfigError("cannot write " + a.out);
  gls::write_csv(out, tr);
  std::cout << "wrote " << tr.times.size() << " rows to " << a.out << "\n";
  std::cout << "final state at t=" << tr.times.back() << ":";
  for (Eigen::Index i = 0; i < tr.final_state().size(); ++i) std::printf(" %.12g", tr.final_state()(i));
  std::cout << std::endl;
  return kPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Genuine Lie semigroup verification toolkit"};
  app.require_subcommand(1);

  Scenario sc;
  std::string scenario_path, action;
  std::optional<std::uint64_t> seed;
  std::string out_path, csv_path;
  auto* verify_cmd = app.add_subcommand("verify", "run a verification suite");
  verify_cmd->add_option("--suite", sc.suite, "suite name, or 'all'");
  verify_cmd->add_option("--scenario", scenario_path, "scenario JSON file")->check(CLI::ExistingFile);
  verify_cmd->add_option("--seed", seed, "seed for randomized samples (default 42)");
  verify_cmd->add_option("--action", action, "action expression in t and y for identity/composition");
  verify_cmd->add_option("--out", out_path, "JSON report path");
  verify_cmd->add_option("--csv", csv_path, "CSV summary path");

  std::string demo_name;
  auto* demo_cmd = app.add_subcommand("demo", "run a registered demo");
  demo_cmd->add_option("--name", demo_name, "demo name")->required();

  FlowArgs fa;
  auto* flow_cmd = app.add_subcommand("flow", "integrate a registered ODE system to CSV");
  flow_cmd->add_option("--system", fa.system, "system name")->required();
  flow_cmd->add_option("--t0", fa.t0, "start time");
  flow_cmd->add_option("--t1", fa.t1, "end time")->required();
  flow_cmd->add_option("--steps", fa.steps, "RK4 steps");
  flow_cmd->add_option("--y0", fa.y0, "initial (or limit) value");
  flow_cmd->add_option("--eps", fa.eps, "start offset past t0");
  flow_cmd->add_option("--grading", fa.grading, "mesh grading exponent, 1 = uniform");
  flow_cmd->add_option("--out", fa.out, "CSV path")->required();

  app.add_subcommand("list", "list suites, demos and flow systems");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kConfig;
  }

  try {
    if (*verify_cmd) {
      const std::string cli_suite = sc.suite;
      if (!scenario_path.empty()) load_scenario(scenario_path, sc);
      if (!cli_suite.empty()) sc.suite = cli_suite;
      if (seed) sc.config.seed = *seed;
      if (!action.empty()) sc.config.expressions["action"] = action;
      if (!out_path.empty()) sc.out = out_path;
      if (!csv_path.empty()) sc.csv = csv_path;
      return verify(sc);
    }
    if (*demo_cmd) {
      const auto* d = gls::find_demo(demo_name);
      if (!d) throw gls::ConfigError("unknown demo '" + demo_name + "' (see glsctl list)");
      std::cout << d->name << ": " << d->formula << "\n";
      d->run(std::cout);
      return kPass;
    }
    if (*flow_cmd) return flow(fa);
    list();
    return kPass;
  } catch (const gls::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfig;
  } catch (const gls::ParseError& e) {
    std::cerr << "error: malformed expression: " << e.what() << "\n";
    return kConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfig;
  } catch (const std::exception& e) {
    std::cerr << "failed: " << e.what() << "\n";
    return kFail;
  }
}
