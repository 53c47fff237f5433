#ifndef MHREV_MARKOV_CORE_HPP
#define MHREV_MARKOV_CORE_HPP

#include "mhrev/types.hpp"

namespace mhrev {

/// Validates a square rate matrix and reports irreducibility through the
/// returned Generator's flag.
Generator validate_generator(const Eigen::MatrixXd& rates, std::vector<std::string> labels = {});

/// Solves pi G = 0, pi . 1 = 1. Requires an irreducible generator; throws
/// NotIrreducible when the kernel is not one-dimensional or the solution is
/// not strictly positive.
ProbabilityDistribution stationary_distribution(const Generator& g);

/// Time-reversal generator w.r.t. a strictly positive target:
/// G*(x,y) = target(y) G(y,x) / target(x) off the diagonal.
Generator time_reversal(const Generator& g, const ProbabilityDistribution& target);

/// Additive reversiblization (G + G*)/2; always target-reversible.
Generator additive_reversiblization(const Generator& g, const ProbabilityDistribution& target);

/// Detailed balance check: max over x != y of
/// |mu(x)G(x,y) - mu(y)G(y,x)| <= tol * scale.
bool is_reversible(const Generator& g, const ProbabilityDistribution& target,
                   double tol = kOrderTol);

/// Off-diagonal domination g1(x,y) >= g2(x,y) - tol * scale for all x != y.
bool peskun_dominates(const Generator& g1, const Generator& g2, double tol = kOrderTol);

/// Weighted inner product sum_x f(x) g(x) mu(x).
double inner_product(const ObservableFunction& f, const ObservableFunction& g,
                     const ProbabilityDistribution& mu);

/// Dirichlet form <-Gf, f>_mu. For mu-reversible G this equals
/// (1/2) sum_{x,y} mu(x) G(x,y) (f(x) - f(y))^2 and is non-negative.
double dirichlet_form(const Generator& g, const ProbabilityDistribution& mu,
                      const ObservableFunction& f);

}  // namespace mhrev

#endif
