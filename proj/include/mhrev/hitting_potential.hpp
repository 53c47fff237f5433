#ifndef MHREV_HITTING_POTENTIAL_HPP
#define MHREV_HITTING_POTENTIAL_HPP

#include "mhrev/types.hpp"

namespace mhrev {

/// Non-empty subset of states, kept sorted and de-duplicated.
class TargetSet {
 public:
  static TargetSet of(std::vector<Eigen::Index> members, Eigen::Index n);

  const std::vector<Eigen::Index>& members() const { return members_; }
  bool contains(Eigen::Index x) const;
  Eigen::Index state_count() const { return n_; }

 private:
  TargetSet(std::vector<Eigen::Index> members, Eigen::Index n)
      : members_(std::move(members)), n_(n) {}

  std::vector<Eigen::Index> members_;
  Eigen::Index n_;
};

/// Mean hitting times v(x) = E_x(tau_A): solves (Gv)(x) = -1 off A with
/// v = 0 on A. Requires every state to reach A.
ObservableFunction expected_hitting_times(const Generator& g, const TargetSet& a);

/// Laplace transforms u(x) = E_x(exp(-lambda tau_A)) for lambda > 0:
/// solves (lambda I - G) u = 0 off A with u = 1 on A.
ObservableFunction hitting_laplace(const Generator& g, const TargetSet& a, double lambda);

/// Average hitting time sum_{x,y} E_x(tau_y) mu(x) mu(y). For mu-reversible
/// irreducible G this equals the sum of reciprocals of the non-zero
/// eigenvalues of -G.
double average_hitting_time(const Generator& g, const ProbabilityDistribution& mu);

/// E_x(tau_y) + E_y(tau_x) for distinct states of an irreducible generator.
double commute_time(const Generator& g, Eigen::Index x, Eigen::Index y);

/// Capacity between disjoint non-empty sets A and B.
///
/// For mu-reversible G this is the Dirichlet form of the equilibrium
/// potential (1 on A, 0 on B, harmonic elsewhere). For non-reversible G the
/// rate-weighted probabilistic value
///   sum_{x in A} mu(x) (-G(x,x)) P_x(hit B before returning to A)
/// is computed through the embedded jump chain. NOTE on conventions: the
/// unweighted escape probability sum (without the exit-rate factor) is NOT
/// consistent with the Dirichlet principle; this library uses the
/// rate-weighted convention throughout, under which the two routes agree
/// for reversible generators and cap({x},{y}) = 1 / commute_time(x,y).
double capacity(const Generator& g, const ProbabilityDistribution& mu, const TargetSet& a,
                const TargetSet& b);

/// The two capacity routes individually, for cross-checking.
double capacity_dirichlet(const Generator& g, const ProbabilityDistribution& mu,
                          const TargetSet& a, const TargetSet& b);
double capacity_probabilistic(const Generator& g, const ProbabilityDistribution& mu,
                              const TargetSet& a, const TargetSet& b);

/// Convenience weighted means over a start distribution.
double mean_hitting_from(const Generator& g, const ProbabilityDistribution& start,
                         const TargetSet& a);
double laplace_hitting_from(const Generator& g, const ProbabilityDistribution& start,
                            const TargetSet& a, double lambda);

}  // namespace mhrev

#endif
