#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace gls {

/// An input point with the values observed there.
struct Witness {
  std::vector<double> point;
  std::vector<double> value;
  std::string note;
};

/// Outcome of a property suite.
///
/// `pass` holds exactly when the run was conclusive, no discrete violation was
/// recorded and `max_deviation <= tolerance`. Call finalize() after filling in
/// the counters.
struct VerificationReport {
  std::string suite;
  bool pass = false;
  bool inconclusive = false;
  double max_deviation = 0.0;
  double tolerance = 0.0;
  std::string grid;
  std::size_t evaluated = 0;
  std::size_t skipped = 0;
  /// Discrete violations (collisions, monotonicity breaks, mismatched branches).
  std::size_t failures = 0;
  std::vector<Witness> witnesses;
  std::vector<std::string> notes;

  void finalize() { pass = !inconclusive && failures == 0 && max_deviation <= tolerance; }
};

std::vector<double> to_std(const Eigen::VectorXd& v);

/// Keeps the running maximum deviation together with the point that produced it.
class DeviationTracker {
 public:
  void observe(double deviation, const Eigen::VectorXd& point, const Eigen::VectorXd& value);
  double max() const { return max_; }
  bool any() const { return any_; }
  /// Writes max_deviation and, when the bound is exceeded, the worst point as a witness.
  void write_to(VerificationReport& r) const;

 private:
  double max_ = 0.0;
  bool any_ = false;
  Witness worst_;
};

}  // namespace gls
