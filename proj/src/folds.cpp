#include "gls/detail/folds.hpp"

#include <algorithm>
#include <cmath>

#include "gls/detail/roots.hpp"
#include "gls/errors.hpp"

namespace gls::detail {

namespace {

// Brackets [a, b] of consecutive non-NaN, nonzero values with opposite sign.
std::vector<std::pair<std::size_t, std::size_t>> sign_change_brackets(const std::vector<double>& d) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  constexpr std::size_t none = static_cast<std::size_t>(-1);
  std::size_t last = none;
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (std::isnan(d[i])) {
      last = none;
      continue;
    }
    if (d[i] == 0.0) continue;
    if (last != none && std::signbit(d[last]) != std::signbit(d[i])) out.emplace_back(last, i);
    last = i;
  }
  return out;
}

}  // namespace

std::vector<PointPair> axis_line_folds(const SmoothMap& m, const SamplingGrid& grid, const std::vector<bool>& usable,
                                       double tol, std::size_t max_pairs,
                                       const std::function<bool(const Eigen::VectorXd&, const Eigen::VectorXd&)>& accept) {
  std::vector<PointPair> found;
  const auto points = grid.points();
  const std::size_t n = points.size();
  const std::size_t d = grid.dim();
  std::vector<std::size_t> stride(d, 1);
  for (std::size_t k = d - 1; k > 0; --k) stride[k - 1] = stride[k] * grid.axes()[k].count;

  std::vector<std::optional<Eigen::VectorXd>> images(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (usable[i]) images[i] = m(points[i]);
  }

  for (std::size_t axis = 0; axis < d && found.size() < max_pairs; ++axis) {
    const std::size_t count = grid.axes()[axis].count;
    const auto& coords = grid.axis_values(axis);
    const SmoothMap dm = m.partial(m.inputs()[axis]);
    for (std::size_t base = 0; base < n && found.size() < max_pairs; ++base) {
      if ((base / stride[axis]) % count != 0) continue;
      std::vector<std::size_t> line(count);
      for (std::size_t i = 0; i < count; ++i) line[i] = base + i * stride[axis];

      std::vector<std::size_t> varying;
      for (std::size_t k = 0; k < m.out_dim(); ++k) {
        double lo = INFINITY, hi = -INFINITY;
        for (auto idx : line) {
          if (!images[idx]) continue;
          lo = std::min(lo, (*images[idx])(k));
          hi = std::max(hi, (*images[idx])(k));
        }
        if (lo <= hi && hi - lo > tol * (1.0 + std::max(std::abs(lo), std::abs(hi)))) varying.push_back(k);
      }
      if (varying.size() != 1) continue;
      const std::size_t k = varying.front();

      Eigen::VectorXd probe = points[base];
      auto at = [&](double lambda) {
        probe(axis) = lambda;
        return probe;
      };
      const ScalarFn phi = [&](double lambda) {
        Eigen::VectorXd p = at(lambda);
        return m.component(k, std::span<const double>(p.data(), p.size()));
      };
      const ScalarFn dphi = [&](double lambda) {
        Eigen::VectorXd p = at(lambda);
        return dm.component(k, std::span<const double>(p.data(), p.size()));
      };

      std::vector<double> slope(count, NAN);
      for (std::size_t i = 0; i < count; ++i) {
        if (images[line[i]]) slope[i] = safe_eval(dphi, coords[i]);
      }
      for (const auto& [ia, ib] : sign_change_brackets(slope)) {
        double c;
        try {
          c = bisect(dphi, coords[ia], coords[ib]);
        } catch (const std::exception&) {
          continue;
        }
        std::size_t lo = ia, hi = ib;
        while (lo > 0 && images[line[lo - 1]]) --lo;
        while (hi + 1 < count && images[line[hi + 1]]) ++hi;
        const double scale = 1.0 + std::abs(safe_eval(phi, c));
        auto pair = fold_witness(phi, c, coords[lo], coords[hi], tol * scale);
        if (!pair) continue;
        const Eigen::VectorXd p1 = at(pair->first);
        const Eigen::VectorXd p2 = at(pair->second);
        try {
          if (accept(p1, p2)) {
            found.emplace_back(p1, p2);
            break;
          }
        } catch (const DomainError&) {
        }
      }
    }
  }
  return found;
}

}  // namespace gls::detail
