#ifndef MHREV_MIXING_SST_HPP
#define MHREV_MIXING_SST_HPP

#include "mhrev/types.hpp"

namespace mhrev {

/// exp(Gt) by uniformization: with L = max_x |G(x,x)| and P = I + G/L,
/// exp(Gt) = sum_k Poisson(Lt; k) P^k, truncated once the tail mass drops
/// below 1e-13 (capped at Lt + 40 sqrt(Lt) + 50 terms). Large Lt is handled
/// by halving t and squaring. Rows sum to 1 within 1e-12, entries >= 0.
Eigen::MatrixXd transition_semigroup(const Generator& g, double t);

/// Total-variation mixing time
/// inf{t : max_x ||P_t(x,.) - pi||_TV < epsilon}, located by exponential
/// bracketing and bisection to absolute width 1e-8 (worst-case TV is
/// non-increasing in t). `stationary` must actually be stationary for G.
double tv_mixing_time(const Generator& g, const ProbabilityDistribution& stationary,
                      double epsilon);

/// Separation distance max_y (1 - P_t(start, y) / pi(y)), clamped to [0,1].
double separation_distance(const Generator& g, const ProbabilityDistribution& stationary,
                           Eigen::Index start, double t);

/// Law of the fastest strong stationary time of an ergodic birth-death
/// chain started at state 0: a convolution of exponentials whose rates are
/// the non-zero eigenvalues of the negated generator, sorted ascending.
struct SstDistribution {
  Eigen::VectorXd rates;
};

/// Validates that g is tridiagonal with strictly positive sub/super
/// diagonals and target-reversible, then extracts the exponential rates.
/// Entries below 1e-14 * scale are snapped to zero before the shape check.
SstDistribution bd_sst(const Generator& g, const ProbabilityDistribution& target);

/// E(exp(-alpha T)) = prod_i rate_i / (rate_i + alpha), alpha > 0.
double sst_laplace(const SstDistribution& d, double alpha);
/// E(T) = sum_i 1 / rate_i.
double sst_mean(const SstDistribution& d);
/// Var(T) = sum_i 1 / rate_i^2.
double sst_variance(const SstDistribution& d);

/// P(T > t), evaluated by exponentiating the auxiliary pure-death chain so
/// repeated rates need no special casing.
double sst_survival(const SstDistribution& d, double t);

}  // namespace mhrev

#endif
