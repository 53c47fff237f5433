#include "mhrev/markov_core.hpp"

#include <Eigen/LU>

#include <cmath>

namespace mhrev {

Generator validate_generator(const Eigen::MatrixXd& rates, std::vector<std::string> labels) {
  return Generator::validated(rates, std::move(labels));
}

ProbabilityDistribution stationary_distribution(const Generator& g) {
  const Eigen::Index n = g.size();
  if (n == 1) return ProbabilityDistribution::validated(Eigen::VectorXd::Ones(1));

  Eigen::FullPivLU<Eigen::MatrixXd> lu(g.rates().transpose());
  if (lu.dimensionOfKernel() != 1)
    throw Error(ErrorKind::NotIrreducible,
                "kernel of Q^T has dimension " + std::to_string(lu.dimensionOfKernel()));
  Eigen::VectorXd pi = lu.kernel().col(0);
  double sum = pi.sum();
  if (sum == 0.0) throw Error(ErrorKind::NotIrreducible, "degenerate kernel vector");
  pi /= sum;

  if ((pi.array() <= 0.0).any())
    throw Error(ErrorKind::NotIrreducible, "stationary solution is not strictly positive");
  double residual = (pi.transpose() * g.rates()).cwiseAbs().maxCoeff();
  if (residual > 1e-12 * g.scale())
    throw Error(ErrorKind::NotIrreducible,
                "stationary residual " + std::to_string(residual) + " exceeds tolerance");
  return ProbabilityDistribution::validated((pi / pi.sum()).eval());
}

Generator time_reversal(const Generator& g, const ProbabilityDistribution& target) {
  if (target.size() != g.size())
    throw Error(ErrorKind::DimensionMismatch, "target size does not match generator");
  target.require_positive("time reversal");
  const Eigen::Index n = g.size();
  Eigen::MatrixXd rev = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index x = 0; x < n; ++x)
    for (Eigen::Index y = 0; y < n; ++y)
      if (x != y) rev(x, y) = target(y) * g.rate(y, x) / target(x);
  return Generator::from_off_diagonal(std::move(rev), g.labels());
}

Generator additive_reversiblization(const Generator& g, const ProbabilityDistribution& target) {
  Generator rev = time_reversal(g, target);
  const Eigen::Index n = g.size();
  Eigen::MatrixXd avg = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index x = 0; x < n; ++x)
    for (Eigen::Index y = 0; y < n; ++y)
      if (x != y) avg(x, y) = 0.5 * (g.rate(x, y) + rev.rate(x, y));
  return Generator::from_off_diagonal(std::move(avg), g.labels());
}

bool is_reversible(const Generator& g, const ProbabilityDistribution& target, double tol) {
  if (target.size() != g.size())
    throw Error(ErrorKind::DimensionMismatch, "target size does not match generator");
  target.require_positive("reversibility check");
  double worst = 0.0;
  for (Eigen::Index x = 0; x < g.size(); ++x)
    for (Eigen::Index y = x + 1; y < g.size(); ++y)
      worst = std::max(worst, std::abs(target(x) * g.rate(x, y) - target(y) * g.rate(y, x)));
  return worst <= tol * g.scale();
}

bool peskun_dominates(const Generator& g1, const Generator& g2, double tol) {
  if (g1.size() != g2.size())
    throw Error(ErrorKind::DimensionMismatch, "generators have different sizes");
  double scale = std::max(g1.scale(), g2.scale());
  for (Eigen::Index x = 0; x < g1.size(); ++x)
    for (Eigen::Index y = 0; y < g1.size(); ++y)
      if (x != y && g1.rate(x, y) < g2.rate(x, y) - tol * scale) return false;
  return true;
}

double inner_product(const ObservableFunction& f, const ObservableFunction& g,
                     const ProbabilityDistribution& mu) {
  if (f.size() != g.size() || f.size() != mu.size())
    throw Error(ErrorKind::DimensionMismatch, "inner product operands differ in size");
  return (f.values().array() * g.values().array() * mu.weights().array()).sum();
}

double dirichlet_form(const Generator& g, const ProbabilityDistribution& mu,
                      const ObservableFunction& f) {
  if (f.size() != g.size() || mu.size() != g.size())
    throw Error(ErrorKind::DimensionMismatch, "Dirichlet form operands differ in size");
  Eigen::VectorXd gf = g.rates() * f.values();
  return -(mu.weights().array() * f.values().array() * gf.array()).sum();
}

}  // namespace mhrev
