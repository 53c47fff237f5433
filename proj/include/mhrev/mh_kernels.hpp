#ifndef MHREV_MH_KERNELS_HPP
#define MHREV_MH_KERNELS_HPP

#include "mhrev/types.hpp"

namespace mhrev {

/// First MH reversiblization: off-diagonal entrywise minimum of Q and its
/// target-reversal. May disconnect the chain; the result carries the usual
/// irreducibility flag.
Generator build_m1(const Generator& q, const ProbabilityDistribution& target);

/// Second MH reversiblization: off-diagonal entrywise maximum of Q and its
/// target-reversal.
Generator build_m2(const Generator& q, const ProbabilityDistribution& target);

/// The two reversiblizations of one (Q, target) instance, constructed
/// together. Invariants: m1 and m2 are target-reversible, m2 dominates m1
/// off-diagonally, and m1 + m2 = Q + Q* entrywise.
struct MhPair {
  Generator m1;
  Generator m2;
  Generator source;
  ProbabilityDistribution target;
};

MhPair build_pair(const Generator& q, const ProbabilityDistribution& target);

/// alpha * m1 + (1 - alpha) * m2 for alpha in [0, 1]; target-reversible.
Generator convex_combination(const MhPair& pair, double alpha);

/// Weighted l1 metric on generators:
/// sum_x sum_{y != x} mu(x) |G1(x,y) - G2(x,y)|.
double l1_distance(const Generator& g1, const Generator& g2, const ProbabilityDistribution& mu);

/// Distance from Q to the set of target-reversible generators, in closed
/// form: the one-sided sum of detailed-balance violations. Equals
/// l1_distance(Q, M1) = l1_distance(Q, M2) = l1_distance(Q, any convex
/// combination of the two).
double distance_to_reversible(const Generator& q, const ProbabilityDistribution& target);

}  // namespace mhrev

#endif
