#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <utility>

namespace gls::detail {

using ScalarFn = std::function<double(double)>;

/// Bisection on [a, b] where f(a), f(b) have opposite signs (or one is zero).
/// Runs until the bracket stops shrinking in floating point.
double bisect(const ScalarFn& f, double a, double b);

/// f evaluated with domain failures mapped to NaN.
double safe_eval(const ScalarFn& f, double x);

/// Given a local extremum `c` of phi inside [lo, hi], finds y1 != y2 on
/// opposite sides of c with |phi(y1) - phi(y2)| <= tol.
std::optional<std::pair<double, double>> fold_witness(const ScalarFn& phi, double c, double lo,
                                                      double hi, double tol);

}  // namespace gls::detail
