#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gls/action.hpp"
#include "gls/grid.hpp"
#include "gls/report.hpp"

namespace gls {

/// Deviations are measured as ||lhs - rhs|| / (1 + ||rhs||) throughout.
double scaled_deviation(const Eigen::VectorXd& lhs, const Eigen::VectorXd& rhs);

/// max ||a(0,y) - y|| over the grid. Points failing the validity predicate are skipped.
VerificationReport identity_check(const TimeAction& a, const SamplingGrid& grid, double tol);

/// max ||a(t, a(s,y)) - a(t+s, y)|| over the grid for each (t, s).
/// Points whose intermediate values leave the validity region are skipped and
/// counted; more than half skipped makes the report inconclusive.
VerificationReport composition_check(const TimeAction& a, std::span<const std::pair<double, double>> times,
                                     const SamplingGrid& grid, double tol);

/// Grid evidence of non-injectivity for a square map.
///
/// Two sources of witnesses: image collisions between grid samples, and folds
/// along axis lines on which a single output coordinate varies (a sign change
/// of its partial derivative is bracketed and turned into a colliding pair).
/// `failures` counts the witness pairs found; `pass` means injective on the grid.
VerificationReport injectivity_probe(const SmoothMap& m, const SamplingGrid& grid, double tol);

/// The colliding pair (0, -1/sqrt(t)) of y -> y + sqrt(t) y^2. Throws DomainError for t <= 0.
std::pair<double, double> noninvertibility_witness_sqrt(double t);

enum class Dichotomy { GroupLike, GenuineSemigroup, Inconsistent, Inconclusive };
const char* to_string(Dichotomy d);

struct DichotomyResult {
  Dichotomy classification = Dichotomy::Inconclusive;
  VerificationReport identity;
  VerificationReport composition;
  /// One injectivity probe per positive time sample, in input order.
  std::vector<std::pair<double, VerificationReport>> probes;
};

/// Classifies a verified one-parameter semigroup by probing a(t, .) for
/// invertibility at each positive sample time.
///
/// The semigroup laws are checked on `law_grid` when given (otherwise on
/// `grid`) using all pairs of sample times; a failing check throws
/// PreconditionError. The injectivity probes use `grid`.
DichotomyResult dichotomy_classify(const TimeAction& a, std::span<const double> t_samples,
                                   const SamplingGrid& grid, double tol,
                                   const std::optional<SamplingGrid>& law_grid = std::nullopt);

}  // namespace gls
