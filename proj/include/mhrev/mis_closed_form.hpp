#ifndef MHREV_MIS_CLOSED_FORM_HPP
#define MHREV_MIS_CLOSED_FORM_HPP

#include "mhrev/types.hpp"

namespace mhrev {

/// Metropolised independent sampling instance: rank-one proposal rows p,
/// target mu, importance weights w = mu/p, and the permutation that sorts
/// the weights descending (ties broken by original index). All outputs of
/// the closed-form spectrum are reported in ORIGINAL labels with the
/// permutation attached.
struct MisInstance {
  ProbabilityDistribution proposal;
  ProbabilityDistribution target;
  Eigen::VectorXd weights;            // mu(x) / p(x), original labels
  std::vector<Eigen::Index> order;    // order[k] = original index of k-th largest weight
  bool already_sorted = false;
};

/// Closed-form eigensystem of the two MH reversiblizations of Q = P - I.
/// In sorted labels, gamma[x] (x = 0..m-2) and beta[i-1] (i = 1..m-1) are
/// the partial sums of p_j - mu(j)/w over the lower/upper weight tails;
/// the non-zero eigenvalues are gamma - 1 (M1) and beta - 1 (M2), and the
/// eigenvector matrices hold the displayed triangular vectors mapped back
/// to original labels (column k pairs with eigenvalue k).
struct MisSpectrum {
  Eigen::VectorXd gamma;              // length m-1, all >= 0
  Eigen::VectorXd beta;               // length m-1, all <= 0
  Eigen::VectorXd m1_eigenvalues;     // gamma - 1
  Eigen::VectorXd m2_eigenvalues;     // beta - 1
  Eigen::MatrixXd m1_eigenvectors;    // n x (m-1), original labels
  Eigen::MatrixXd m2_eigenvectors;    // n x (m-1), original labels
};

MisInstance build_mis(const ProbabilityDistribution& proposal,
                      const ProbabilityDistribution& target);

/// Q = P - I with P(x,y) = p(y), in original labels.
Generator mis_generator(const MisInstance& inst);

/// Computes the closed-form spectrum and verifies every (eigenvalue,
/// eigenvector) pair against the numerically built M1/M2 at residual 1e-10.
MisSpectrum mis_spectrum(const MisInstance& inst);

struct MisValidation {
  double max_eigenvalue_gap;  // multiset distance closed form vs numeric
  double max_residual;        // worst ||M v - lambda v||_inf
};

/// Cross-validates the closed form against the dense eigensolver; throws
/// ValidationFailure (with the offending index) beyond 1e-10.
MisValidation mis_cross_validate(const MisInstance& inst);

}  // namespace mhrev

#endif
