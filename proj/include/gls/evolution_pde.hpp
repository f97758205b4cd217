#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>

#include "gls/action.hpp"
#include "gls/grid.hpp"
#include "gls/report.hpp"
#include "gls/smooth_map.hpp"

namespace gls {

/// U(t,x) = c - k tanh(k / (2 mu) (x - x0 - c t)), k = sqrt(c^2 + d).
/// Throws std::invalid_argument unless c^2 + d > 0 and mu > 0.
SmoothMap burgers_soliton(double x0, double c, double d, double mu);

/// max |U_t + U U_x - mu U_xx| over a (t, x) grid.
double burgers_residual(const SmoothMap& u, double mu, const SamplingGrid& grid);

/// Parameter flow (alpha, beta) of a function family V_{a,b} under a time evolution:
/// E(t) V_{a,b} = V_{alpha(t,a,b), beta(t,a,b)}.
class ParamFlow {
 public:
  /// alpha has one expression per `a` variable and beta one per `b` variable,
  /// all in (time, a..., b...).
  ParamFlow(std::string time, std::vector<std::string> a_vars, std::vector<std::string> b_vars, std::vector<Expr> alpha,
            std::vector<Expr> beta);

  const std::string& time() const { return time_; }
  const std::vector<std::string>& a_vars() const { return a_vars_; }
  const std::vector<std::string>& b_vars() const { return b_vars_; }
  const std::vector<Expr>& alpha() const { return alpha_; }
  const std::vector<Expr>& beta() const { return beta_; }

  Eigen::VectorXd alpha_at(double t, const Eigen::VectorXd& a, const Eigen::VectorXd& b) const;
  Eigen::VectorXd beta_at(double t, const Eigen::VectorXd& a, const Eigen::VectorXd& b) const;
  /// (t, a) -> alpha(t, a, b) for fixed b.
  TimeAction alpha_action(const Eigen::VectorXd& b) const;

 private:
  std::string time_;
  std::vector<std::string> a_vars_, b_vars_;
  std::vector<Expr> alpha_, beta_;
  std::vector<std::string> names_;
};

/// alpha(t, x0, c, d) = x0 + c t, beta = (c, d).
ParamFlow linear_soliton_flow();

/// Both cocycle identities
///   alpha(t+s, a, b) = alpha(s, alpha(t,a,b), beta(t,a,b))
///   beta(t+s, a, b)  = beta(s, alpha(t,a,b), beta(t,a,b))
/// and alpha(0,a,b) = a, beta(0,a,b) = b over a grid in (t, s, a..., b...).
/// Deviations are scaled as elsewhere.
VerificationReport param_flow_check(const ParamFlow& flow, const SamplingGrid& grid, double tol);

using FamilyFn = std::function<SmoothMap(const Eigen::VectorXd& a, const Eigen::VectorXd& b)>;

/// The Burgers soliton family a = (x0), b = (c, d) at viscosity mu.
FamilyFn burgers_family(double mu);

/// max over a (t, x) grid of |V_{a,b}(t, x) - V_{alpha(t,a,b), beta(t,a,b)}(0, x)| / (1 + |rhs|).
VerificationReport soliton_translation_check(const ParamFlow& flow, const FamilyFn& family, const Eigen::VectorXd& a,
                                             const Eigen::VectorXd& b, const SamplingGrid& grid, double tol);

/// Heat kernel K(t,x) = exp(-x^2/(4t)) / sqrt(t).
SmoothMap heat_kernel();

/// Checks U_t = U_xx for the heat kernel over a (t, x) grid with t > 0 and
/// that advancing the kernel by s, K_t -> K_{t+s}, composes additively over
/// the sampled advances. Notes record that backward advance leaves the family.
VerificationReport heat_flow_demo(const SamplingGrid& grid, double tol);

}  // namespace gls
