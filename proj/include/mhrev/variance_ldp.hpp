#ifndef MHREV_VARIANCE_LDP_HPP
#define MHREV_VARIANCE_LDP_HPP

#include "mhrev/types.hpp"

namespace mhrev {

/// Centered solution of the Poisson equation G g = f, with mu . g = 0.
struct PoissonSolution {
  ObservableFunction g;
  double residual;  // ||G g - f||_inf
};

/// Solves the bordered system [G, 1; mu^T, 0] so the one-dimensional kernel
/// of G is absorbed by the centering constraint. Requires mu G = 0 and
/// mu . f = 0.
PoissonSolution solve_poisson(const Generator& g, const ProbabilityDistribution& stationary,
                              const ObservableFunction& f);

/// CLT variance of time averages of a mean-zero observable:
/// sigma^2 = -2 <f, g>_mu with G g = f.
double asymptotic_variance(const Generator& g, const ProbabilityDistribution& stationary,
                           const ObservableFunction& f);

/// Donsker-Varadhan rate function of a mu-reversible generator in closed
/// form: the Dirichlet form of sqrt(nu/mu). Zeros in nu are allowed.
double rate_function_reversible(const Generator& g, const ProbabilityDistribution& target,
                                const ProbabilityDistribution& nu);

/// Variational rate function sup_{u > 0} -sum_x nu(x) (Gu)(x) / u(x) for an
/// arbitrary generator, by Newton ascent in log coordinates (u = exp(v),
/// v(0) pinned to 0) with 8 starts and objective tolerance 1e-10. In these
/// coordinates the objective is concave, so the ascent is globally
/// convergent; nu must have full support.
double rate_function_variational(const Generator& g, const ProbabilityDistribution& nu,
                                 std::uint64_t seed = 0);

}  // namespace mhrev

#endif
