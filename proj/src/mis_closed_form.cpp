#include "mhrev/mis_closed_form.hpp"

#include "mhrev/markov_core.hpp"
#include "mhrev/mh_kernels.hpp"
#include "mhrev/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace mhrev {

MisInstance build_mis(const ProbabilityDistribution& proposal,
                      const ProbabilityDistribution& target) {
  const Eigen::Index m = proposal.size();
  if (target.size() != m)
    throw Error(ErrorKind::DimensionMismatch, "proposal and target differ in length");
  if (m < 2) throw Error(ErrorKind::DimensionMismatch, "independent sampling needs m >= 2");
  if (!proposal.strictly_positive() || !target.strictly_positive())
    throw Error(ErrorKind::ZeroMass, "proposal and target must be strictly positive");

  Eigen::VectorXd weights = target.weights().cwiseQuotient(proposal.weights());
  std::vector<Eigen::Index> order(static_cast<size_t>(m));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  // Descending weights; stable so ties keep their original order.
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return weights(a) > weights(b); });
  bool sorted = true;
  for (Eigen::Index k = 0; k < m; ++k)
    if (order[static_cast<size_t>(k)] != k) sorted = false;
  return MisInstance{proposal, target, std::move(weights), std::move(order), sorted};
}

Generator mis_generator(const MisInstance& inst) {
  const Eigen::Index m = inst.proposal.size();
  Eigen::MatrixXd rates(m, m);
  for (Eigen::Index x = 0; x < m; ++x) rates.row(x) = inst.proposal.weights().transpose();
  return Generator::from_off_diagonal(std::move(rates));
}

MisSpectrum mis_spectrum(const MisInstance& inst) {
  const Eigen::Index m = inst.proposal.size();
  const auto& order = inst.order;

  // Sorted-label views: ps(k) = p(order[k]) etc., with ws descending.
  Eigen::VectorXd ps(m), mus(m), ws(m);
  for (Eigen::Index k = 0; k < m; ++k) {
    ps(k) = inst.proposal(order[static_cast<size_t>(k)]);
    mus(k) = inst.target(order[static_cast<size_t>(k)]);
    ws(k) = inst.weights(order[static_cast<size_t>(k)]);
  }

  MisSpectrum out;
  out.gamma.resize(m - 1);
  out.beta.resize(m - 1);
  for (Eigen::Index x = 0; x < m - 1; ++x) {
    double sum = 0.0;
    for (Eigen::Index j = x; j < m; ++j) sum += ps(j) - mus(j) / ws(x);
    out.gamma(x) = sum;
  }
  for (Eigen::Index i = 1; i < m; ++i) {
    double sum = 0.0;
    for (Eigen::Index j = 0; j <= i; ++j) sum += ps(j) - mus(j) / ws(i);
    out.beta(i - 1) = sum;
  }
  out.m1_eigenvalues = out.gamma.array() - 1.0;
  out.m2_eigenvalues = out.beta.array() - 1.0;

  // Displayed triangular eigenvectors, built in sorted labels and scattered
  // back through the permutation.
  out.m1_eigenvectors = Eigen::MatrixXd::Zero(m, m - 1);
  out.m2_eigenvectors = Eigen::MatrixXd::Zero(m, m - 1);
  for (Eigen::Index x = 0; x < m - 1; ++x) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(m);
    double tail = 0.0;
    for (Eigen::Index j = x + 1; j < m; ++j) tail += mus(j);
    v(x) = tail;
    for (Eigen::Index j = x + 1; j < m; ++j) v(j) = -mus(x);
    for (Eigen::Index k = 0; k < m; ++k)
      out.m1_eigenvectors(order[static_cast<size_t>(k)], x) = v(k);
  }
  for (Eigen::Index i = 1; i < m; ++i) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(m);
    double head = 0.0;
    for (Eigen::Index j = 0; j < i; ++j) head += mus(j);
    for (Eigen::Index j = 0; j < i; ++j) v(j) = -mus(i);
    v(i) = head;
    for (Eigen::Index k = 0; k < m; ++k)
      out.m2_eigenvectors(order[static_cast<size_t>(k)], i - 1) = v(k);
  }

  // Safety net: every displayed pair must be an actual eigenpair of the
  // numerically constructed kernels.
  Generator q = mis_generator(inst);
  Generator m1 = build_m1(q, inst.target);
  Generator m2 = build_m2(q, inst.target);
  for (Eigen::Index k = 0; k < m - 1; ++k) {
    double res1 = (m1.rates() * out.m1_eigenvectors.col(k) -
                   out.m1_eigenvalues(k) * out.m1_eigenvectors.col(k))
                      .cwiseAbs()
                      .maxCoeff();
    double res2 = (m2.rates() * out.m2_eigenvectors.col(k) -
                   out.m2_eigenvalues(k) * out.m2_eigenvectors.col(k))
                      .cwiseAbs()
                      .maxCoeff();
    if (res1 > 1e-10 || res2 > 1e-10)
      throw Error(ErrorKind::ValidationFailure,
                  "closed-form eigenpair " + std::to_string(k) + " fails the residual check");
  }
  return out;
}

MisValidation mis_cross_validate(const MisInstance& inst) {
  const Eigen::Index m = inst.proposal.size();
  if (m > 200)
    throw Error(ErrorKind::DimensionMismatch, "cross validation supports m <= 200");

  MisSpectrum closed = mis_spectrum(inst);
  Generator q = mis_generator(inst);
  SpectrumResult num1 = reversible_spectrum(build_m1(q, inst.target), inst.target);
  SpectrumResult num2 = reversible_spectrum(build_m2(q, inst.target), inst.target);

  // Multiset comparison: sorted closed-form eigenvalues of -M (including
  // the trivial zero) against the solver output.
  auto multiset_gap = [m](const Eigen::VectorXd& closed_vals, const Eigen::VectorXd& numeric) {
    std::vector<double> all(static_cast<size_t>(m));
    all[0] = 0.0;
    for (Eigen::Index k = 0; k < m - 1; ++k) all[static_cast<size_t>(k) + 1] = -closed_vals(k);
    std::sort(all.begin(), all.end());
    double worst = 0.0;
    Eigen::Index at = 0;
    for (Eigen::Index k = 0; k < m; ++k) {
      double gap = std::abs(all[static_cast<size_t>(k)] - numeric(k));
      if (gap > worst) {
        worst = gap;
        at = k;
      }
    }
    return std::pair<double, Eigen::Index>{worst, at};
  };

  auto [gap1, at1] = multiset_gap(closed.m1_eigenvalues, num1.eigenvalues);
  auto [gap2, at2] = multiset_gap(closed.m2_eigenvalues, num2.eigenvalues);
  if (gap1 > 1e-10)
    throw Error(ErrorKind::ValidationFailure,
                "M1 eigenvalue " + std::to_string(at1) + " deviates by " + std::to_string(gap1));
  if (gap2 > 1e-10)
    throw Error(ErrorKind::ValidationFailure,
                "M2 eigenvalue " + std::to_string(at2) + " deviates by " + std::to_string(gap2));

  Generator m1 = build_m1(q, inst.target);
  Generator m2 = build_m2(q, inst.target);
  double max_residual = 0.0;
  for (Eigen::Index k = 0; k < m - 1; ++k) {
    max_residual = std::max(max_residual, (m1.rates() * closed.m1_eigenvectors.col(k) -
                                           closed.m1_eigenvalues(k) * closed.m1_eigenvectors.col(k))
                                              .cwiseAbs()
                                              .maxCoeff());
    max_residual = std::max(max_residual, (m2.rates() * closed.m2_eigenvectors.col(k) -
                                           closed.m2_eigenvalues(k) * closed.m2_eigenvectors.col(k))
                                              .cwiseAbs()
                                              .maxCoeff());
  }
  return MisValidation{std::max(gap1, gap2), max_residual};
}

}  // namespace mhrev
