#ifndef MHREV_SPECTRAL_HPP
#define MHREV_SPECTRAL_HPP

#include "mhrev/types.hpp"

namespace mhrev {

/// Eigensystem of -G for a mu-reversible generator. Eigenvalues ascend
/// (eigenvalues[0] ~ 0 for a conservative generator); eigenvector column i
/// pairs with eigenvalues[i] and the columns are orthonormal in l2(mu).
struct SpectrumResult {
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd eigenvectors;
  ProbabilityDistribution target;
};

/// Dense symmetric eigendecomposition after conjugating by diag(sqrt(mu)).
/// Throws NotReversible when detailed balance fails at 1e-9.
SpectrumResult reversible_spectrum(const Generator& g, const ProbabilityDistribution& target);

/// Second-smallest eigenvalue of -G when G is mu-reversible, of the negated
/// additive reversiblization otherwise (the two Dirichlet forms coincide).
/// Returns +inf for a single state; 0 (up to rounding) for reducible input.
double spectral_gap(const Generator& g, const ProbabilityDistribution& target);

/// 1 / spectral_gap; throws ZeroGap when the gap vanishes.
double relaxation_time(const Generator& g, const ProbabilityDistribution& target);

/// Worst-case l2(mu) contraction factor at time t, exp(-gap * t), derived
/// from the gap rather than by exponentiating the matrix.
double l2_convergence_rate(const Generator& g, const ProbabilityDistribution& target, double t);

}  // namespace mhrev

#endif
