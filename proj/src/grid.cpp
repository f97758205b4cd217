#include "gls/grid.hpp"

#include <random>
#include <sstream>
#include <stdexcept>

namespace gls {

SamplingGrid::SamplingGrid(std::vector<Axis> axes, std::uint64_t seed, double jitter)
    : axes_(std::move(axes)), seed_(seed), jitter_(jitter) {
  if (axes_.empty()) throw std::invalid_argument("SamplingGrid needs at least one axis");
  if (jitter_ < 0.0 || jitter_ > 1.0) throw std::invalid_argument("jitter must lie in [0,1]");
  std::mt19937_64 rng(seed_);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (const auto& a : axes_) {
    if (a.count < 2) throw std::invalid_argument("grid axis needs count >= 2");
    if (!(a.lo < a.hi)) throw std::invalid_argument("grid axis needs lo < hi");
    const double step = (a.hi - a.lo) / static_cast<double>(a.count - 1);
    std::vector<double> v(a.count);
    for (std::size_t i = 0; i < a.count; ++i) {
      v[i] = a.lo + step * static_cast<double>(i);
      if (jitter_ > 0.0 && i > 0 && i + 1 < a.count) v[i] += 0.5 * jitter_ * step * unit(rng);
    }
    v.back() = a.hi;
    values_.push_back(std::move(v));
  }
}

SamplingGrid SamplingGrid::line(double lo, double hi, std::size_t count) {
  return SamplingGrid({Axis{lo, hi, count}});
}

std::size_t SamplingGrid::size() const {
  std::size_t n = 1;
  for (const auto& a : axes_) n *= a.count;
  return n;
}

std::vector<Eigen::VectorXd> SamplingGrid::points() const {
  const std::size_t d = dim();
  std::vector<Eigen::VectorXd> out;
  out.reserve(size());
  std::vector<std::size_t> idx(d, 0);
  for (;;) {
    Eigen::VectorXd p(d);
    for (std::size_t k = 0; k < d; ++k) p(k) = values_[k][idx[k]];
    out.push_back(std::move(p));
    std::size_t k = d;
    while (k > 0) {
      --k;
      if (++idx[k] < axes_[k].count) break;
      idx[k] = 0;
      if (k == 0) return out;
    }
  }
}

std::string SamplingGrid::summary() const {
  std::ostringstream os;
  for (std::size_t k = 0; k < axes_.size(); ++k) {
    if (k) os << " * ";
    os << '[' << axes_[k].lo << ',' << axes_[k].hi << "]x" << axes_[k].count;
  }
  os << " seed=" << seed_;
  if (jitter_ > 0.0) os << " jitter=" << jitter_;
  return os.str();
}

}  // namespace gls
