#include "mhrev/oracles.hpp"

#include "mhrev/markov_core.hpp"
#include "mhrev/mh_kernels.hpp"

#include <cmath>
#include <limits>

namespace mhrev::oracles {

Generator random_irreducible_generator(const InstanceSpec& spec) {
  if (spec.n < 2) throw Error(ErrorKind::DimensionMismatch, "instances need n >= 2");
  Rng rng(spec.seed);
  const Eigen::Index n = spec.n;
  Eigen::MatrixXd rates = Eigen::MatrixXd::Zero(n, n);
  double lo = 0.1 * spec.rate_scale;
  double hi = spec.rate_scale;
  switch (spec.structure) {
    case InstanceSpec::Structure::Dense:
      for (Eigen::Index x = 0; x < n; ++x)
        for (Eigen::Index y = 0; y < n; ++y)
          if (x != y) rates(x, y) = rng.uniform(lo, hi);
      break;
    case InstanceSpec::Structure::BirthDeath:
      for (Eigen::Index x = 0; x + 1 < n; ++x) {
        rates(x, x + 1) = rng.uniform(lo, hi);
        rates(x + 1, x) = rng.uniform(lo, hi);
      }
      break;
    case InstanceSpec::Structure::Mis: {
      Eigen::VectorXd p(n);
      for (Eigen::Index x = 0; x < n; ++x) p(x) = rng.uniform(0.1, 1.0);
      p /= p.sum();
      for (Eigen::Index x = 0; x < n; ++x)
        rates.row(x) = spec.rate_scale * p.transpose();
      break;
    }
  }
  return Generator::from_off_diagonal(std::move(rates));
}

Generator random_reversible_generator(const ProbabilityDistribution& target,
                                      const InstanceSpec& spec) {
  target.require_positive("reversible sampling");
  Rng rng(spec.seed);
  const Eigen::Index n = target.size();
  Eigen::MatrixXd rates = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index x = 0; x < n; ++x) {
    for (Eigen::Index y = x + 1; y < n; ++y) {
      // Occasional zeroed edges keep reducible members in the sample.
      double flow = rng.uniform(0.0, 1.0) < 0.25 ? 0.0 : rng.uniform(0.0, spec.rate_scale);
      rates(x, y) = flow / target(x);
      rates(y, x) = flow / target(y);
    }
  }
  return Generator::from_off_diagonal(std::move(rates));
}

ProbabilityDistribution random_target(Eigen::Index n, Rng& rng) {
  Eigen::VectorXd w(n);
  for (Eigen::Index x = 0; x < n; ++x) w(x) = rng.uniform(0.1, 1.0);
  w /= w.sum();
  return ProbabilityDistribution::validated(std::move(w));
}

ObservableFunction random_observable(Eigen::Index n, Rng& rng) {
  Eigen::VectorXd f(n);
  for (Eigen::Index x = 0; x < n; ++x) f(x) = rng.uniform(-1.0, 1.0);
  return ObservableFunction(std::move(f));
}

ObservableFunction random_mean_zero_observable(const ProbabilityDistribution& mu, Rng& rng) {
  Eigen::VectorXd f(mu.size());
  for (Eigen::Index x = 0; x < mu.size(); ++x) f(x) = rng.uniform(-1.0, 1.0);
  f.array() -= mu.weights().dot(f);
  return ObservableFunction(std::move(f));
}

ProjectionProbe projection_oracle(const Generator& q, const ProbabilityDistribution& target,
                                  int samples, std::uint64_t seed) {
  if (samples < 100)
    throw Error(ErrorKind::ValidationFailure, "projection oracle needs at least 100 samples");
  double closed = distance_to_reversible(q, target);
  MhPair pair = build_pair(q, target);

  ProjectionProbe probe{closed, std::numeric_limits<double>::infinity(), samples, true};
  InstanceSpec sampler{q.size(), seed, InstanceSpec::Structure::Dense, q.scale()};
  for (int i = 0; i < samples; ++i) {
    sampler.seed = seed + static_cast<std::uint64_t>(i);
    Generator n = random_reversible_generator(target, sampler);
    double d = l1_distance(q, n, target);
    probe.min_sampled_distance = std::min(probe.min_sampled_distance, d);
    if (d < closed - 1e-12) probe.verdict = false;
  }

  // Uniqueness probes: shrink one reversible flow of M1 (stays admissibly
  // below Q) and grow one flow of M2 (stays above Q); the distance must
  // strictly increase.
  const double eps = 1e-3;
  auto perturbed_distance = [&](const Generator& m, Eigen::Index x, Eigen::Index y,
                                double delta) {
    Eigen::MatrixXd rates = m.rates();
    rates(x, y) += delta / target(x);
    rates(y, x) += delta / target(y);
    Generator n = Generator::from_off_diagonal(std::move(rates));
    return l1_distance(q, n, target);
  };
  double base1 = l1_distance(q, pair.m1, target);
  double base2 = l1_distance(q, pair.m2, target);
  for (Eigen::Index x = 0; x < q.size(); ++x) {
    for (Eigen::Index y = x + 1; y < q.size(); ++y) {
      double flow = target(x) * pair.m1.rate(x, y);
      if (flow > 0.0) {
        double delta = std::min(eps, 0.5 * flow);
        if (perturbed_distance(pair.m1, x, y, -delta) <= base1 + 1e-12) probe.verdict = false;
      }
      if (perturbed_distance(pair.m2, x, y, eps) <= base2 + 1e-12) probe.verdict = false;
    }
  }
  return probe;
}

namespace {

double dv_objective(const Eigen::MatrixXd& rates, const Eigen::VectorXd& nu,
                    const Eigen::VectorXd& v) {
  double total = 0.0;
  for (Eigen::Index x = 0; x < rates.rows(); ++x) {
    total -= nu(x) * rates(x, x);
    for (Eigen::Index y = 0; y < rates.rows(); ++y)
      if (y != x) total -= nu(x) * rates(x, y) * std::exp(v(y) - v(x));
  }
  return total;
}

}  // namespace

double variational_ldp_oracle(const Generator& g, const ProbabilityDistribution& nu,
                              int grid_points_per_dim) {
  if (nu.size() != g.size())
    throw Error(ErrorKind::DimensionMismatch, "oracle operands differ in size");
  nu.require_positive("variational oracle");
  const Eigen::Index n = g.size();
  if (n == 1) return 0.0;
  if (n > 6)
    throw Error(ErrorKind::DimensionMismatch, "grid oracle supports n <= 6");

  const int points = std::max(3, grid_points_per_dim);
  const Eigen::Index dims = n - 1;
  Eigen::VectorXd best_v = Eigen::VectorXd::Zero(n);
  double best = dv_objective(g.rates(), nu.weights(), best_v);

  // Log-uniform grid over u with u(0) pinned to 1.
  std::vector<int> idx(static_cast<size_t>(dims), 0);
  Eigen::VectorXd v = Eigen::VectorXd::Zero(n);
  bool done = false;
  while (!done) {
    for (Eigen::Index k = 0; k < dims; ++k)
      v(k + 1) = -3.0 + 6.0 * idx[static_cast<size_t>(k)] / static_cast<double>(points - 1);
    double value = dv_objective(g.rates(), nu.weights(), v);
    if (value > best) {
      best = value;
      best_v = v;
    }
    Eigen::Index carry = 0;
    while (carry < dims && ++idx[static_cast<size_t>(carry)] == points) {
      idx[static_cast<size_t>(carry)] = 0;
      ++carry;
    }
    done = carry == dims;
  }

  // Pattern-search refinement around the best grid point.
  v = best_v;
  for (double step : {1.0, 0.3, 0.1, 0.03, 0.01, 0.003, 1e-3, 3e-4, 1e-4, 1e-5, 1e-6}) {
    bool improved = true;
    while (improved) {
      improved = false;
      for (Eigen::Index k = 1; k < n; ++k) {
        for (double sign : {1.0, -1.0}) {
          v(k) += sign * step;
          double value = dv_objective(g.rates(), nu.weights(), v);
          if (value > best) {
            best = value;
            improved = true;
          } else {
            v(k) -= sign * step;
          }
        }
      }
    }
  }
  return best;
}

}  // namespace mhrev::oracles
