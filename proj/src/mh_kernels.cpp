#include "mhrev/mh_kernels.hpp"

#include "mhrev/markov_core.hpp"

#include <cmath>

namespace mhrev {

namespace {

enum class Pick { Min, Max };

Generator build_mh(const Generator& q, const ProbabilityDistribution& target, Pick pick) {
  if (target.size() != q.size())
    throw Error(ErrorKind::DimensionMismatch, "target size does not match generator");
  target.require_positive("MH construction");
  const Eigen::Index n = q.size();
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index x = 0; x < n; ++x) {
    for (Eigen::Index y = 0; y < n; ++y) {
      if (x == y) continue;
      // Same evaluation order as time_reversal, so comparisons against Q*
      // are bit-consistent.
      double reversed = target(y) * q.rate(y, x) / target(x);
      out(x, y) = pick == Pick::Min ? std::min(q.rate(x, y), reversed)
                                    : std::max(q.rate(x, y), reversed);
    }
  }
  return Generator::from_off_diagonal(std::move(out), q.labels());
}

}  // namespace

Generator build_m1(const Generator& q, const ProbabilityDistribution& target) {
  return build_mh(q, target, Pick::Min);
}

Generator build_m2(const Generator& q, const ProbabilityDistribution& target) {
  return build_mh(q, target, Pick::Max);
}

MhPair build_pair(const Generator& q, const ProbabilityDistribution& target) {
  MhPair pair{build_m1(q, target), build_m2(q, target), q, target};
  // min/max selection makes these invariants exact up to a few ulps; a
  // failure indicates memory corruption rather than numerics.
  if (!is_reversible(pair.m1, target, kIdentityTol) ||
      !is_reversible(pair.m2, target, kIdentityTol))
    throw Error(ErrorKind::ValidationFailure, "MH pair lost reversibility");
  if (!peskun_dominates(pair.m2, pair.m1, 0.0))
    throw Error(ErrorKind::ValidationFailure, "MH pair lost Peskun ordering");
  return pair;
}

Generator convex_combination(const MhPair& pair, double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0))
    throw Error(ErrorKind::AlphaOutOfRange, "alpha = " + std::to_string(alpha));
  const Eigen::Index n = pair.m1.size();
  Eigen::MatrixXd mix = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index x = 0; x < n; ++x)
    for (Eigen::Index y = 0; y < n; ++y)
      if (x != y) mix(x, y) = alpha * pair.m1.rate(x, y) + (1.0 - alpha) * pair.m2.rate(x, y);
  return Generator::from_off_diagonal(std::move(mix), pair.source.labels());
}

double l1_distance(const Generator& g1, const Generator& g2,
                   const ProbabilityDistribution& mu) {
  if (g1.size() != g2.size() || mu.size() != g1.size())
    throw Error(ErrorKind::DimensionMismatch, "distance operands differ in size");
  double total = 0.0;
  for (Eigen::Index x = 0; x < g1.size(); ++x)
    for (Eigen::Index y = 0; y < g1.size(); ++y)
      if (x != y) total += mu(x) * std::abs(g1.rate(x, y) - g2.rate(x, y));
  return total;
}

double distance_to_reversible(const Generator& q, const ProbabilityDistribution& target) {
  if (target.size() != q.size())
    throw Error(ErrorKind::DimensionMismatch, "target size does not match generator");
  target.require_positive("projection distance");
  // One pass over the ordered pairs where the weighted flow exceeds its
  // reverse; each unordered pair contributes its detailed-balance gap once.
  double total = 0.0;
  for (Eigen::Index x = 0; x < q.size(); ++x) {
    for (Eigen::Index y = 0; y < q.size(); ++y) {
      if (x == y) continue;
      double forward = target(x) * q.rate(x, y);
      double backward = target(y) * q.rate(y, x);
      if (forward > backward) total += forward - backward;
    }
  }
  return total;
}

}  // namespace mhrev
