#include "gls/report.hpp"

#include <cmath>

namespace gls {

std::vector<double> to_std(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

void DeviationTracker::observe(double deviation, const Eigen::VectorXd& point,
                               const Eigen::VectorXd& value) {
  if (std::isnan(deviation)) deviation = INFINITY;
  if (!any_ || deviation > max_) {
    max_ = deviation;
    worst_ = Witness{to_std(point), to_std(value), "largest deviation"};
  }
  any_ = true;
}

void DeviationTracker::write_to(VerificationReport& r) const {
  r.max_deviation = max_;
  if (any_ && max_ > r.tolerance) r.witnesses.push_back(worst_);
}

}  // namespace gls
