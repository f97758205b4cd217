#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

namespace gls {

struct Axis {
  double lo = 0.0;
  double hi = 1.0;
  std::size_t count = 2;
};

/// Cartesian sampling grid with optional seeded jitter.
///
/// Points are enumerated with the last axis varying fastest. Jitter moves
/// interior samples by at most `jitter` times half the spacing; endpoints stay
/// fixed so the grid covers [lo, hi] exactly.
class SamplingGrid {
 public:
  /// Throws std::invalid_argument unless every axis has count >= 2 and lo < hi.
  explicit SamplingGrid(std::vector<Axis> axes, std::uint64_t seed = 42, double jitter = 0.0);

  static SamplingGrid line(double lo, double hi, std::size_t count);

  std::size_t dim() const { return axes_.size(); }
  std::size_t size() const;
  const std::vector<Axis>& axes() const { return axes_; }
  std::uint64_t seed() const { return seed_; }

  /// Sample values along one axis (jitter applied).
  const std::vector<double>& axis_values(std::size_t axis) const { return values_.at(axis); }
  std::vector<Eigen::VectorXd> points() const;

  /// e.g. "[-3,3]x101 * [0,1]x5 seed=42".
  std::string summary() const;

 private:
  std::vector<Axis> axes_;
  std::uint64_t seed_;
  double jitter_;
  std::vector<std::vector<double>> values_;
};

}  // namespace gls
