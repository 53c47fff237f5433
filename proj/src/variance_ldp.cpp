#include "mhrev/variance_ldp.hpp"

#include "mhrev/markov_core.hpp"

#include <Eigen/LU>

#include <cmath>
#include <random>

namespace mhrev {

PoissonSolution solve_poisson(const Generator& g, const ProbabilityDistribution& stationary,
                              const ObservableFunction& f) {
  const Eigen::Index n = g.size();
  if (stationary.size() != n || f.size() != n)
    throw Error(ErrorKind::DimensionMismatch, "Poisson equation operands differ in size");

  // Border G with the centering constraint mu . g = 0; the multiplier
  // column absorbs the one-dimensional kernel of G.
  Eigen::MatrixXd sys = Eigen::MatrixXd::Zero(n + 1, n + 1);
  sys.topLeftCorner(n, n) = g.rates();
  sys.topRightCorner(n, 1).setOnes();
  sys.bottomLeftCorner(1, n) = stationary.weights().transpose();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n + 1);
  rhs.head(n) = f.values();

  Eigen::FullPivLU<Eigen::MatrixXd> lu(sys);
  if (!lu.isInvertible())
    throw Error(ErrorKind::SingularSystem, "bordered Poisson system is singular");
  Eigen::VectorXd sol = lu.solve(rhs);
  Eigen::VectorXd centered = sol.head(n);
  centered.array() -= stationary.weights().dot(centered);

  double residual = (g.rates() * centered - f.values()).cwiseAbs().maxCoeff();
  double bound = 1e-10 * g.scale() * std::max(1.0, centered.cwiseAbs().maxCoeff());
  if (!centered.allFinite() || residual > bound)
    throw Error(ErrorKind::SingularSystem,
                "Poisson residual " + std::to_string(residual) + " exceeds tolerance");
  return PoissonSolution{ObservableFunction(std::move(centered)), residual};
}

double asymptotic_variance(const Generator& g, const ProbabilityDistribution& stationary,
                           const ObservableFunction& f) {
  const Eigen::Index n = g.size();
  if (stationary.size() != n || f.size() != n)
    throw Error(ErrorKind::DimensionMismatch, "variance operands differ in size");
  double mean = stationary.weights().dot(f.values());
  if (std::abs(mean) > 1e-10 * std::max(1.0, f.values().cwiseAbs().maxCoeff()))
    throw Error(ErrorKind::NotMeanZero, "observable mean is " + std::to_string(mean));
  double drift = (stationary.weights().transpose() * g.rates()).cwiseAbs().maxCoeff();
  if (drift > 1e-9 * g.scale())
    throw Error(ErrorKind::NotStationary, "supplied distribution is not stationary");

  PoissonSolution poisson = solve_poisson(g, stationary, f);
  return -2.0 * inner_product(f, poisson.g, stationary);
}

double rate_function_reversible(const Generator& g, const ProbabilityDistribution& target,
                                const ProbabilityDistribution& nu) {
  const Eigen::Index n = g.size();
  if (target.size() != n || nu.size() != n)
    throw Error(ErrorKind::DimensionMismatch, "rate function operands differ in size");
  target.require_positive("closed-form rate function");
  if (!is_reversible(g, target, 1e-9))
    throw Error(ErrorKind::NotReversible, "closed form needs a target-reversible generator");
  Eigen::VectorXd root = (nu.weights().array() / target.weights().array()).sqrt();
  return dirichlet_form(g, target, ObservableFunction(std::move(root)));
}

namespace {

// Objective and derivatives of F(v) = -sum_x nu(x) (G e^v)(x) e^{-v(x)} in
// log coordinates. Off-diagonal coefficients nu(x) G(x,y) are non-negative,
// so F is concave and Newton ascent converges globally.
struct LogObjective {
  const Eigen::MatrixXd& rates;
  const Eigen::VectorXd& nu;

  double value(const Eigen::VectorXd& v) const {
    const Eigen::Index n = rates.rows();
    double total = 0.0;
    for (Eigen::Index x = 0; x < n; ++x) {
      total -= nu(x) * rates(x, x);
      for (Eigen::Index y = 0; y < n; ++y)
        if (y != x) total -= nu(x) * rates(x, y) * std::exp(v(y) - v(x));
    }
    return total;
  }

  void gradient_hessian(const Eigen::VectorXd& v, Eigen::VectorXd& grad,
                        Eigen::MatrixXd& hess) const {
    const Eigen::Index n = rates.rows();
    grad.setZero(n);
    hess.setZero(n, n);
    for (Eigen::Index x = 0; x < n; ++x) {
      for (Eigen::Index y = 0; y < n; ++y) {
        if (y == x) continue;
        double w = nu(x) * rates(x, y) * std::exp(v(y) - v(x));
        grad(y) -= w;
        grad(x) += w;
        hess(y, y) -= w;
        hess(x, x) -= w;
        hess(x, y) += w;
        hess(y, x) += w;
      }
    }
  }
};

double ascend(const LogObjective& objective, Eigen::VectorXd v) {
  const Eigen::Index n = v.size();
  double value = objective.value(v);
  Eigen::VectorXd grad(n);
  Eigen::MatrixXd hess(n, n);
  for (int iter = 0; iter < 200; ++iter) {
    objective.gradient_hessian(v, grad, hess);
    // Pin v(0) = 0 to fix the scale invariance.
    Eigen::MatrixXd h = -hess.bottomRightCorner(n - 1, n - 1);
    h.diagonal().array() += 1e-12;
    Eigen::VectorXd step = Eigen::PartialPivLU<Eigen::MatrixXd>(h).solve(grad.tail(n - 1));
    if (!step.allFinite()) break;

    double slope = grad.tail(n - 1).dot(step);
    if (slope <= 0.0) break;
    double t = 1.0;
    double next = value;
    Eigen::VectorXd trial = v;
    while (t > 1e-14) {
      trial.tail(n - 1) = v.tail(n - 1) + t * step;
      next = objective.value(trial);
      if (std::isfinite(next) && next >= value + 1e-4 * t * slope) break;
      t *= 0.5;
    }
    if (!(next > value)) break;
    v = trial;
    if (next - value < 1e-10) {
      value = next;
      break;
    }
    value = next;
  }
  return value;
}

}  // namespace

double rate_function_variational(const Generator& g, const ProbabilityDistribution& nu,
                                 std::uint64_t seed) {
  const Eigen::Index n = g.size();
  if (nu.size() != n)
    throw Error(ErrorKind::DimensionMismatch, "rate function operands differ in size");
  if (!nu.strictly_positive())
    throw Error(ErrorKind::DegenerateSupport,
                "variational rate function needs full support; use the closed form for "
                "measures with zeros");
  if (n == 1) return 0.0;

  LogObjective objective{g.rates(), nu.weights()};
  double best = objective.value(Eigen::VectorXd::Zero(n));  // u = 1 lower bound
  best = std::max(best, ascend(objective, Eigen::VectorXd::Zero(n)));

  std::mt19937_64 engine(seed + 0x9e3779b97f4a7c15ULL);
  for (int start = 0; start < 7; ++start) {
    Eigen::VectorXd v(n);
    v(0) = 0.0;
    for (Eigen::Index i = 1; i < n; ++i) {
      double u = static_cast<double>(engine() >> 11) * 0x1.0p-53;
      v(i) = -2.0 + 4.0 * u;
    }
    best = std::max(best, ascend(objective, std::move(v)));
  }
  return best;
}

}  // namespace mhrev
