#pragma once

#include <Eigen/Dense>
#include <functional>
#include <utility>
#include <vector>

#include "gls/grid.hpp"
#include "gls/smooth_map.hpp"

namespace gls::detail {

using PointPair = std::pair<Eigen::VectorXd, Eigen::VectorXd>;

/// Fold search along the axis lines of `grid`.
///
/// On each line where exactly one output of `m` varies, sign changes of that
/// output's partial derivative are bracketed, the critical point is bisected
/// and fold_witness produces two points with (nearly) the same output value.
/// Pairs passing `accept` are returned, at most one per line and at most
/// `max_pairs` overall. `usable[i]` marks grid points where m evaluates.
std::vector<PointPair> axis_line_folds(const SmoothMap& m, const SamplingGrid& grid, const std::vector<bool>& usable,
                                       double tol, std::size_t max_pairs,
                                       const std::function<bool(const Eigen::VectorXd&, const Eigen::VectorXd&)>& accept);

}  // namespace gls::detail
