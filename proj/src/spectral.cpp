#include "mhrev/spectral.hpp"

#include "mhrev/markov_core.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>

namespace mhrev {

SpectrumResult reversible_spectrum(const Generator& g, const ProbabilityDistribution& target) {
  if (target.size() != g.size())
    throw Error(ErrorKind::DimensionMismatch, "target size does not match generator");
  target.require_positive("spectral decomposition");
  if (!is_reversible(g, target, 1e-9))
    throw Error(ErrorKind::NotReversible, "generator is not reversible for the given target");

  const Eigen::Index n = g.size();
  Eigen::VectorXd d = target.weights().cwiseSqrt();
  // Conjugating -G by diag(sqrt(mu)) gives a symmetric matrix with the same
  // spectrum; symmetrize explicitly to shed the last few ulps of asymmetry.
  Eigen::MatrixXd sym = d.asDiagonal() * (-g.rates()) * d.cwiseInverse().asDiagonal();
  sym = 0.5 * (sym + sym.transpose()).eval();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym);
  if (solver.info() != Eigen::Success)
    throw Error(ErrorKind::SingularSystem, "symmetric eigensolver failed to converge");

  Eigen::MatrixXd vectors(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    vectors.col(i) = solver.eigenvectors().col(i).cwiseQuotient(d);
  return SpectrumResult{solver.eigenvalues(), std::move(vectors), target};
}

double spectral_gap(const Generator& g, const ProbabilityDistribution& target) {
  if (g.size() == 1) return std::numeric_limits<double>::infinity();
  SpectrumResult spectrum = is_reversible(g, target, 1e-9)
                                ? reversible_spectrum(g, target)
                                : reversible_spectrum(additive_reversiblization(g, target), target);
  return std::max(0.0, spectrum.eigenvalues(1));
}

double relaxation_time(const Generator& g, const ProbabilityDistribution& target) {
  double gap = spectral_gap(g, target);
  if (!(gap > 0.0))
    throw Error(ErrorKind::ZeroGap, "spectral gap vanishes; relaxation time undefined");
  return 1.0 / gap;
}

double l2_convergence_rate(const Generator& g, const ProbabilityDistribution& target,
                           double t) {
  if (!(t >= 0.0)) throw Error(ErrorKind::NegativeTime, "time must be non-negative");
  return std::exp(-spectral_gap(g, target) * t);
}

}  // namespace mhrev
