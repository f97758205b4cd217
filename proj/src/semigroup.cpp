#include "gls/semigroup.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "gls/detail/folds.hpp"
#include "gls/errors.hpp"

namespace gls {

namespace {

constexpr std::size_t kMaxWitnesses = 16;

Eigen::VectorXd concat(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  Eigen::VectorXd out(a.size() + b.size());
  out << a, b;
  return out;
}

Eigen::VectorXd with_times(double t, double s, const Eigen::VectorXd& y) {
  Eigen::VectorXd out(y.size() + 2);
  out << t, s, y;
  return out;
}

void mark_inconclusive_if_sparse(VerificationReport& r, std::size_t total) {
  if (total == 0 || r.skipped * 2 > total) {
    r.inconclusive = true;
    r.notes.push_back("more than half of the sample points were skipped");
  }
}

}  // namespace

double scaled_deviation(const Eigen::VectorXd& lhs, const Eigen::VectorXd& rhs) {
  return (lhs - rhs).norm() / (1.0 + rhs.norm());
}

VerificationReport identity_check(const TimeAction& a, const SamplingGrid& grid, double tol) {
  VerificationReport r;
  r.suite = "identity:" + a.name();
  r.tolerance = tol;
  r.grid = grid.summary();
  if (grid.dim() != a.dim()) throw std::invalid_argument("identity_check: grid dimension mismatch");
  DeviationTracker dev;
  for (const auto& y : grid.points()) {
    if (!a.valid(0.0, y)) {
      ++r.skipped;
      continue;
    }
    const Eigen::VectorXd v = a(0.0, y);
    dev.observe(scaled_deviation(v, y), y, v);
    ++r.evaluated;
  }
  dev.write_to(r);
  mark_inconclusive_if_sparse(r, grid.size());
  r.finalize();
  return r;
}

VerificationReport composition_check(const TimeAction& a, std::span<const std::pair<double, double>> times,
                                     const SamplingGrid& grid, double tol) {
  VerificationReport r;
  r.suite = "composition:" + a.name();
  r.tolerance = tol;
  r.grid = grid.summary();
  if (grid.dim() != a.dim()) throw std::invalid_argument("composition_check: grid dimension mismatch");
  const auto points = grid.points();
  DeviationTracker dev;
  std::size_t total = 0;
  for (const auto& [t, s] : times) {
    if (!a.time_in_domain(t) || !a.time_in_domain(s) || !a.time_in_domain(t + s)) {
      throw PreconditionError("composition_check: times outside the action's time domain");
    }
    for (const auto& y : points) {
      ++total;
      if (!a.valid(s, y) || !a.valid(t + s, y)) {
        ++r.skipped;
        continue;
      }
      try {
        const Eigen::VectorXd z = a(s, y);
        if (!a.valid(t, z)) {
          ++r.skipped;
          continue;
        }
        const Eigen::VectorXd lhs = a(t, z);
        const Eigen::VectorXd rhs = a(t + s, y);
        dev.observe(scaled_deviation(lhs, rhs), with_times(t, s, y), concat(lhs, rhs));
        ++r.evaluated;
      } catch (const DomainError&) {
        ++r.skipped;
      }
    }
  }
  dev.write_to(r);
  mark_inconclusive_if_sparse(r, total);
  r.finalize();
  return r;
}

VerificationReport injectivity_probe(const SmoothMap& m, const SamplingGrid& grid, double tol) {
  VerificationReport r;
  r.suite = "injectivity";
  r.tolerance = 0.0;
  r.grid = grid.summary();
  if (grid.dim() != m.in_dim()) throw std::invalid_argument("injectivity_probe: grid dimension mismatch");
  {
    std::ostringstream os;
    os << "collision tolerance " << tol;
    r.notes.push_back(os.str());
  }

  const auto points = grid.points();
  const std::size_t n = points.size();
  std::vector<std::optional<Eigen::VectorXd>> images(n);
  for (std::size_t i = 0; i < n; ++i) {
    try {
      Eigen::VectorXd v = m(points[i]);
      if (v.allFinite()) {
        images[i] = std::move(v);
        ++r.evaluated;
        continue;
      }
    } catch (const DomainError&) {
    }
    ++r.skipped;
  }

  auto add_witness = [&](const Eigen::VectorXd& p1, const Eigen::VectorXd& p2, const char* note) {
    ++r.failures;
    if (r.witnesses.size() < kMaxWitnesses) {
      r.witnesses.push_back(Witness{to_std(concat(p1, p2)), to_std(concat(m(p1), m(p2))), note});
    }
  };

  // Collisions between samples.
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < n; ++i) {
    if (images[i]) order.push_back(i);
  }
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return (*images[a])(0) < (*images[b])(0);
  });
  for (std::size_t a = 0; a < order.size() && r.failures < kMaxWitnesses; ++a) {
    const auto& ia = *images[order[a]];
    for (std::size_t b = a + 1; b < order.size(); ++b) {
      const auto& ib = *images[order[b]];
      if (ib(0) - ia(0) > tol) break;
      if ((ia - ib).norm() <= tol) {
        add_witness(points[order[a]], points[order[b]], "image collision");
        break;
      }
    }
  }

  // Folds along axis lines.
  if (r.failures < kMaxWitnesses) {
    std::vector<bool> usable(n);
    for (std::size_t i = 0; i < n; ++i) usable[i] = images[i].has_value();
    const auto folds = detail::axis_line_folds(
        m, grid, usable, tol, kMaxWitnesses - r.failures,
        [&](const Eigen::VectorXd& p1, const Eigen::VectorXd& p2) { return scaled_deviation(m(p1), m(p2)) <= tol; });
    for (const auto& [p1, p2] : folds) add_witness(p1, p2, "fold along axis line");
  }

  mark_inconclusive_if_sparse(r, n);
  if (r.evaluated < 2) r.inconclusive = true;
  r.finalize();
  return r;
}

std::pair<double, double> noninvertibility_witness_sqrt(double t) {
  if (!(t > 0.0)) throw DomainError("noninvertibility_witness_sqrt requires t > 0");
  return {0.0, -1.0 / std::sqrt(t)};
}

const char* to_string(Dichotomy d) {
  switch (d) {
    case Dichotomy::GroupLike: return "group_like";
    case Dichotomy::GenuineSemigroup: return "genuine_semigroup";
    case Dichotomy::Inconsistent: return "inconsistent";
    case Dichotomy::Inconclusive: return "inconclusive";
  }
  return "?";
}

DichotomyResult dichotomy_classify(const TimeAction& a, std::span<const double> t_samples,
                                   const SamplingGrid& grid, double tol,
                                   const std::optional<SamplingGrid>& law_grid) {
  if (!a.formula()) throw std::invalid_argument("dichotomy_classify requires a formula-backed action");
  DichotomyResult out;
  const SamplingGrid& lg = law_grid ? *law_grid : grid;

  std::vector<std::pair<double, double>> pairs;
  for (double t : t_samples) {
    for (double s : t_samples) pairs.emplace_back(t, s);
  }
  out.identity = identity_check(a, lg, tol);
  if (!out.identity.pass && !out.identity.inconclusive) {
    throw PreconditionError(a.name() + " fails the identity axiom");
  }
  out.composition = composition_check(a, pairs, lg, tol);
  if (!out.composition.pass && !out.composition.inconclusive) {
    throw PreconditionError(a.name() + " fails the composition law");
  }
  if (out.identity.inconclusive || out.composition.inconclusive) {
    out.classification = Dichotomy::Inconclusive;
    return out;
  }

  std::size_t injective = 0, non_injective = 0, unknown = 0;
  for (double t : t_samples) {
    if (!(t > 0.0)) continue;
    VerificationReport probe = injectivity_probe(a.slice(t), grid, tol);
    if (probe.inconclusive) {
      ++unknown;
    } else if (probe.pass) {
      ++injective;
    } else {
      ++non_injective;
    }
    out.probes.emplace_back(t, std::move(probe));
  }
  if (injective > 0 && non_injective > 0) {
    out.classification = Dichotomy::Inconsistent;
  } else if (unknown > 0 || out.probes.empty()) {
    out.classification = Dichotomy::Inconclusive;
  } else if (injective > 0) {
    out.classification = Dichotomy::GroupLike;
  } else {
    out.classification = Dichotomy::GenuineSemigroup;
  }
  return out;
}

}  // namespace gls
