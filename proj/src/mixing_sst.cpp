#include "mhrev/mixing_sst.hpp"

#include "mhrev/markov_core.hpp"
#include "mhrev/spectral.hpp"

#include <cmath>

namespace mhrev {

namespace {

// Uniformized series for exp(Gt) with Lt <= kSplitThreshold; `tail` is the
// admissible truncated Poisson mass.
constexpr double kSplitThreshold = 64.0;

Eigen::MatrixXd uniformized_series(const Eigen::MatrixXd& rates, double uniform_rate, double t,
                                   double tail) {
  const Eigen::Index n = rates.rows();
  double lt = uniform_rate * t;
  Eigen::MatrixXd jump = Eigen::MatrixXd::Identity(n, n) + rates / uniform_rate;
  jump = jump.cwiseMax(0.0);

  int cap = static_cast<int>(std::ceil(lt + 40.0 * std::sqrt(lt) + 50.0));
  double weight = std::exp(-lt);
  double covered = weight;
  Eigen::MatrixXd power = Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd acc = weight * power;
  for (int k = 1; k <= cap && 1.0 - covered >= tail; ++k) {
    power = (power * jump).eval();
    weight *= lt / static_cast<double>(k);
    acc += weight * power;
    covered += weight;
  }
  return acc;
}

}  // namespace

Eigen::MatrixXd transition_semigroup(const Generator& g, double t) {
  if (!(t >= 0.0)) throw Error(ErrorKind::NegativeTime, "time must be non-negative");
  const Eigen::Index n = g.size();
  double uniform_rate = g.rates().diagonal().cwiseAbs().maxCoeff();
  if (uniform_rate * t == 0.0) return Eigen::MatrixXd::Identity(n, n);

  int halvings = 0;
  double step = t;
  while (uniform_rate * step > kSplitThreshold) {
    step *= 0.5;
    ++halvings;
  }
  // Tighter tail when squaring amplifies the truncation deficiency.
  Eigen::MatrixXd result =
      uniformized_series(g.rates(), uniform_rate, step, halvings == 0 ? 1e-13 : 1e-15);
  for (int i = 0; i < halvings; ++i) {
    result = (result * result).eval();
    for (Eigen::Index x = 0; x < n; ++x) result.row(x) /= result.row(x).sum();
  }
  return result.cwiseMax(0.0);
}

namespace {

double worst_case_tv(const Generator& g, const ProbabilityDistribution& pi, double t) {
  Eigen::MatrixXd p = transition_semigroup(g, t);
  double worst = 0.0;
  for (Eigen::Index x = 0; x < g.size(); ++x)
    worst = std::max(worst, 0.5 * (p.row(x).transpose() - pi.weights()).cwiseAbs().sum());
  return worst;
}

}  // namespace

double tv_mixing_time(const Generator& g, const ProbabilityDistribution& stationary,
                      double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw Error(ErrorKind::EpsilonOutOfRange, "epsilon must lie in (0,1)");
  if (stationary.size() != g.size())
    throw Error(ErrorKind::DimensionMismatch, "distribution sized for a different chain");
  if (!g.irreducible())
    throw Error(ErrorKind::NotIrreducible, "mixing time needs an irreducible chain");
  double drift = (stationary.weights().transpose() * g.rates()).cwiseAbs().maxCoeff();
  if (drift > 1e-9 * g.scale())
    throw Error(ErrorKind::NotStationary, "supplied distribution is not stationary");

  if (worst_case_tv(g, stationary, 0.0) < epsilon) return 0.0;

  // Worst-case TV is non-increasing in t, so bracket by doubling and then
  // bisect. Start from the relaxation time when the chain is reversible.
  double t_hi = 1.0 / g.rates().diagonal().cwiseAbs().maxCoeff();
  if (is_reversible(g, stationary, 1e-9)) {
    double gap = spectral_gap(g, stationary);
    if (gap > 0.0 && std::isfinite(gap)) t_hi = 1.0 / gap;
  }
  double t_lo = 0.0;
  int guard = 0;
  while (worst_case_tv(g, stationary, t_hi) >= epsilon) {
    t_lo = t_hi;
    t_hi *= 2.0;
    if (++guard > 200)
      throw Error(ErrorKind::SingularSystem, "total variation fails to contract");
  }
  while (t_hi - t_lo > 1e-8) {
    double mid = 0.5 * (t_lo + t_hi);
    (worst_case_tv(g, stationary, mid) < epsilon ? t_hi : t_lo) = mid;
  }
  return t_hi;
}

double separation_distance(const Generator& g, const ProbabilityDistribution& stationary,
                           Eigen::Index start, double t) {
  if (!(t >= 0.0)) throw Error(ErrorKind::NegativeTime, "time must be non-negative");
  if (stationary.size() != g.size())
    throw Error(ErrorKind::DimensionMismatch, "distribution sized for a different chain");
  if (start < 0 || start >= g.size())
    throw Error(ErrorKind::InvalidTargetSet, "start state out of range");
  stationary.require_positive("separation distance");
  Eigen::MatrixXd p = transition_semigroup(g, t);
  double sep = 0.0;
  for (Eigen::Index y = 0; y < g.size(); ++y)
    sep = std::max(sep, 1.0 - p(start, y) / stationary(y));
  return std::min(1.0, sep);
}

SstDistribution bd_sst(const Generator& g, const ProbabilityDistribution& target) {
  const Eigen::Index n = g.size();
  if (target.size() != n)
    throw Error(ErrorKind::DimensionMismatch, "target sized for a different chain");
  if (n < 2) throw Error(ErrorKind::NotBirthDeath, "birth-death chain needs at least two states");

  double snap = 1e-14 * g.scale();
  Eigen::MatrixXd rates =
      g.rates().unaryExpr([snap](double v) { return std::abs(v) < snap ? 0.0 : v; });
  for (Eigen::Index x = 0; x < n; ++x) {
    for (Eigen::Index y = 0; y < n; ++y) {
      if (std::abs(x - y) >= 2 && rates(x, y) != 0.0)
        throw Error(ErrorKind::NotBirthDeath, "non-zero rate off the tridiagonal band");
    }
    if (x + 1 < n && !(rates(x, x + 1) > 0.0 && rates(x + 1, x) > 0.0))
      throw Error(ErrorKind::NotBirthDeath, "vanishing birth or death rate");
  }
  Generator snapped = Generator::from_off_diagonal(std::move(rates), g.labels());
  if (!is_reversible(snapped, target, 1e-9))
    throw Error(ErrorKind::NotReversible, "generator is not reversible for the given target");

  SpectrumResult spectrum = reversible_spectrum(snapped, target);
  Eigen::VectorXd positive = spectrum.eigenvalues.tail(n - 1);
  if (!(positive.array() > 0.0).all())
    throw Error(ErrorKind::ZeroGap, "non-zero eigenvalues must be positive");
  return SstDistribution{std::move(positive)};
}

double sst_laplace(const SstDistribution& d, double alpha) {
  if (!(alpha > 0.0)) throw Error(ErrorKind::NonPositiveAlpha, "alpha must be positive");
  double product = 1.0;
  for (Eigen::Index i = 0; i < d.rates.size(); ++i)
    product *= d.rates(i) / (d.rates(i) + alpha);
  return product;
}

double sst_mean(const SstDistribution& d) { return d.rates.cwiseInverse().sum(); }

double sst_variance(const SstDistribution& d) {
  return d.rates.cwiseInverse().array().square().sum();
}

double sst_survival(const SstDistribution& d, double t) {
  if (!(t >= 0.0)) throw Error(ErrorKind::NegativeTime, "time must be non-negative");
  const Eigen::Index m = d.rates.size();
  // Absorption time of the pure-death ladder 0 -> 1 -> ... -> m with the
  // convolution rates; repeated rates need no special casing this way.
  Eigen::MatrixXd ladder = Eigen::MatrixXd::Zero(m + 1, m + 1);
  for (Eigen::Index k = 0; k < m; ++k) ladder(k, k + 1) = d.rates(k);
  Generator chain = Generator::from_off_diagonal(std::move(ladder));
  Eigen::MatrixXd p = transition_semigroup(chain, t);
  return std::min(1.0, std::max(0.0, 1.0 - p(0, m)));
}

}  // namespace mhrev
