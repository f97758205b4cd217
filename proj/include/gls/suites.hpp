#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "gls/grid.hpp"
#include "gls/reduction.hpp"
#include "gls/report.hpp"

namespace gls {

/// Rejected scenario input: unknown names, bad grids, nonpositive tolerances.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Overrides for one suite run. Empty maps mean suite defaults.
struct SuiteConfig {
  std::map<std::string, std::string> expressions;
  std::map<std::string, Axis> grids;
  std::map<std::string, double> tolerances;
  std::uint64_t seed = 42;

  Axis axis(const std::string& name, Axis fallback) const;
  double tolerance(const std::string& name, double fallback) const;
  std::optional<std::string> expression(const std::string& name) const;
};

struct SuiteRun {
  std::string suite;
  std::vector<VerificationReport> reports;
  /// Extra human-readable lines (classifications, thresholds, reference values).
  std::vector<std::string> lines;

  bool pass() const;
};

struct SuiteInfo {
  std::string name;
  std::string summary;
  std::vector<std::string> expressions;
  std::vector<std::string> grids;
  std::vector<std::string> tolerances;
  std::function<SuiteRun(const SuiteConfig&)> run;
};

/// Suites in their fixed report order.
const std::vector<SuiteInfo>& suite_registry();
const SuiteInfo* find_suite(std::string_view name);

/// Throws ConfigError when the config names an expression, grid or tolerance
/// the suite does not declare, a tolerance is not positive or an axis is empty.
void validate_config(const SuiteInfo& suite, const SuiteConfig& cfg);

/// Validates, then runs. Parse errors in expressions propagate as ParseError.
SuiteRun run_suite(const SuiteInfo& suite, const SuiteConfig& cfg);

struct DemoInfo {
  std::string name;
  std::string formula;
  std::function<void(std::ostream&)> run;
};

const std::vector<DemoInfo>& demo_registry();
const DemoInfo* find_demo(std::string_view name);

struct FlowSystem {
  std::string name;
  std::string formula;
  OdeSystem system;
  /// Closed form used for the start state when integration begins at eps > 0 from t = 0.
  std::optional<TimeAction> closed_form;
};

const std::vector<FlowSystem>& flow_registry();
const FlowSystem* find_flow_system(std::string_view name);

struct NamedExpr {
  std::string name;
  Expr expr;
};

/// Every expression the library registers: actions, ODE right-hand sides,
/// evolution operators, PDE solutions and the transport corpus.
std::vector<NamedExpr> registered_expressions();

}  // namespace gls
