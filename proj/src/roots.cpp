#include "gls/detail/roots.hpp"

#include <stdexcept>

#include "gls/errors.hpp"

namespace gls::detail {

double safe_eval(const ScalarFn& f, double x) {
  try {
    return f(x);
  } catch (const DomainError&) {
    return NAN;
  }
}

double bisect(const ScalarFn& f, double a, double b) {
  double fa = f(a);
  if (fa == 0.0) return a;
  const double fb = f(b);
  if (fb == 0.0) return b;
  if (std::signbit(fa) == std::signbit(fb)) throw std::invalid_argument("bisect: no sign change");
  for (int i = 0; i < 200; ++i) {
    const double m = 0.5 * (a + b);
    if (m == a || m == b) break;
    const double fm = f(m);
    if (fm == 0.0) return m;
    if (std::signbit(fm) == std::signbit(fa)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

namespace {

// First sign change of g on [from, to] (either direction), scanning in `n` steps.
std::optional<std::pair<double, double>> first_bracket(const ScalarFn& g, double from, double to, int n) {
  double x0 = from;
  double g0 = safe_eval(g, x0);
  for (int i = 1; i <= n; ++i) {
    const double x1 = from + (to - from) * static_cast<double>(i) / n;
    const double g1 = safe_eval(g, x1);
    if (std::isnan(g1)) return std::nullopt;
    if (!std::isnan(g0) && (g1 == 0.0 || std::signbit(g0) != std::signbit(g1))) {
      return std::make_pair(x0, x1);
    }
    x0 = x1;
    g0 = g1;
  }
  return std::nullopt;
}

}  // namespace

std::optional<std::pair<double, double>> fold_witness(const ScalarFn& phi, double c, double lo,
                                                      double hi, double tol) {
  const double width = hi - lo;
  for (double delta = 0.25 * width; delta > 1e-9 * width; delta *= 0.5) {
    for (int side = 0; side < 2; ++side) {
      const double y1 = side == 0 ? c - delta : c + delta;
      if (y1 < lo || y1 > hi) continue;
      const double target = safe_eval(phi, y1);
      if (std::isnan(target)) continue;
      const ScalarFn g = [&](double y) { return phi(y) - target; };
      const double far = side == 0 ? hi : lo;
      auto br = first_bracket(g, c, far, 256);
      if (!br) continue;
      double y2;
      try {
        y2 = bisect(g, br->first, br->second);
      } catch (const std::exception&) {
        continue;
      }
      if (std::abs(y2 - y1) > 1e-12 * (1.0 + std::abs(y1)) &&
          std::abs(phi(y1) - phi(y2)) <= tol) {
        return std::make_pair(std::min(y1, y2), std::max(y1, y2));
      }
    }
  }
  return std::nullopt;
}

}  // namespace gls::detail
