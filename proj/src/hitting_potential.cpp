#include "mhrev/hitting_potential.hpp"

#include "mhrev/markov_core.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>

namespace mhrev {

TargetSet TargetSet::of(std::vector<Eigen::Index> members, Eigen::Index n) {
  if (members.empty()) throw Error(ErrorKind::InvalidTargetSet, "target set is empty");
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  if (members.front() < 0 || members.back() >= n)
    throw Error(ErrorKind::InvalidTargetSet, "target set member out of range");
  return TargetSet(std::move(members), n);
}

bool TargetSet::contains(Eigen::Index x) const {
  return std::binary_search(members_.begin(), members_.end(), x);
}

namespace {

std::vector<char> membership(const TargetSet& a, Eigen::Index n) {
  std::vector<char> in(static_cast<size_t>(n), 0);
  for (Eigen::Index x : a.members()) in[static_cast<size_t>(x)] = 1;
  return in;
}

// Every state reaches the set along positive-rate edges (backward BFS).
bool all_states_reach(const Generator& g, const TargetSet& a) {
  const Eigen::Index n = g.size();
  std::vector<char> seen = membership(a, n);
  std::vector<Eigen::Index> stack(a.members().begin(), a.members().end());
  Eigen::Index count = static_cast<Eigen::Index>(stack.size());
  while (!stack.empty()) {
    Eigen::Index y = stack.back();
    stack.pop_back();
    for (Eigen::Index x = 0; x < n; ++x) {
      if (seen[static_cast<size_t>(x)] || x == y) continue;
      if (g.rate(x, y) > 0.0) {
        seen[static_cast<size_t>(x)] = 1;
        ++count;
        stack.push_back(x);
      }
    }
  }
  return count == n;
}

// Solves the restriction of (shift*I - G) u = rhs to the states outside
// `fixed`, with u given on `fixed`; returns the full vector. The residual of
// the restricted system is verified.
Eigen::VectorXd solve_off_set(const Generator& g, const std::vector<char>& fixed,
                              const Eigen::VectorXd& fixed_values, double shift,
                              const Eigen::VectorXd& rhs_free) {
  const Eigen::Index n = g.size();
  std::vector<Eigen::Index> free_states;
  for (Eigen::Index x = 0; x < n; ++x)
    if (!fixed[static_cast<size_t>(x)]) free_states.push_back(x);
  const Eigen::Index m = static_cast<Eigen::Index>(free_states.size());

  Eigen::VectorXd full = fixed_values;
  if (m == 0) return full;

  Eigen::MatrixXd sys(m, m);
  Eigen::VectorXd rhs(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    Eigen::Index x = free_states[static_cast<size_t>(i)];
    rhs(i) = rhs_free(x);
    for (Eigen::Index y = 0; y < n; ++y)
      if (fixed[static_cast<size_t>(y)]) rhs(i) += g.rate(x, y) * fixed_values(y);
    for (Eigen::Index j = 0; j < m; ++j) {
      Eigen::Index y = free_states[static_cast<size_t>(j)];
      sys(i, j) = shift * (i == j ? 1.0 : 0.0) - g.rate(x, y);
    }
  }

  Eigen::PartialPivLU<Eigen::MatrixXd> lu(sys);
  Eigen::VectorXd sol = lu.solve(rhs);
  double residual = (sys * sol - rhs).cwiseAbs().maxCoeff();
  double bound = 1e-10 * g.scale() * std::max(1.0, sol.cwiseAbs().maxCoeff());
  if (!sol.allFinite() || residual > bound)
    throw Error(ErrorKind::SingularSystem,
                "linear system residual " + std::to_string(residual) + " exceeds tolerance");

  for (Eigen::Index i = 0; i < m; ++i) full(free_states[static_cast<size_t>(i)]) = sol(i);
  return full;
}

}  // namespace

ObservableFunction expected_hitting_times(const Generator& g, const TargetSet& a) {
  if (a.state_count() != g.size())
    throw Error(ErrorKind::DimensionMismatch, "target set sized for a different chain");
  if (!all_states_reach(g, a))
    throw Error(ErrorKind::UnreachableTarget, "some state cannot reach the target set");
  const Eigen::Index n = g.size();
  std::vector<char> fixed = membership(a, n);
  // (G v)(x) = -1 off A, v = 0 on A.
  Eigen::VectorXd v = solve_off_set(g, fixed, Eigen::VectorXd::Zero(n), 0.0,
                                    Eigen::VectorXd::Ones(n));
  return ObservableFunction(std::move(v));
}

ObservableFunction hitting_laplace(const Generator& g, const TargetSet& a, double lambda) {
  if (a.state_count() != g.size())
    throw Error(ErrorKind::DimensionMismatch, "target set sized for a different chain");
  if (!(lambda > 0.0)) throw Error(ErrorKind::NonPositiveLambda, "lambda must be positive");
  if (!all_states_reach(g, a))
    throw Error(ErrorKind::UnreachableTarget, "some state cannot reach the target set");
  const Eigen::Index n = g.size();
  std::vector<char> fixed = membership(a, n);
  // (lambda I - G) u = 0 off A, u = 1 on A.
  Eigen::VectorXd u = solve_off_set(g, fixed, Eigen::VectorXd::Ones(n), lambda,
                                    Eigen::VectorXd::Zero(n));
  return ObservableFunction(std::move(u));
}

double average_hitting_time(const Generator& g, const ProbabilityDistribution& mu) {
  if (mu.size() != g.size())
    throw Error(ErrorKind::DimensionMismatch, "distribution sized for a different chain");
  if (!g.irreducible()) throw Error(ErrorKind::NotIrreducible, "average hitting time needs an irreducible chain");
  const Eigen::Index n = g.size();
  double total = 0.0;
  for (Eigen::Index y = 0; y < n; ++y) {
    ObservableFunction v = expected_hitting_times(g, TargetSet::of({y}, n));
    total += mu(y) * inner_product(v, ObservableFunction::constant(n, 1.0), mu);
  }
  return total;
}

double commute_time(const Generator& g, Eigen::Index x, Eigen::Index y) {
  if (x == y) throw Error(ErrorKind::SameState, "commute time needs two distinct states");
  if (!g.irreducible()) throw Error(ErrorKind::NotIrreducible, "commute time needs an irreducible chain");
  const Eigen::Index n = g.size();
  double forward = expected_hitting_times(g, TargetSet::of({y}, n))(x);
  double back = expected_hitting_times(g, TargetSet::of({x}, n))(y);
  return forward + back;
}

namespace {

void check_disjoint(const Generator& g, const TargetSet& a, const TargetSet& b) {
  if (a.state_count() != g.size() || b.state_count() != g.size())
    throw Error(ErrorKind::DimensionMismatch, "target sets sized for a different chain");
  for (Eigen::Index x : a.members())
    if (b.contains(x))
      throw Error(ErrorKind::OverlappingSets, "sets share state " + std::to_string(x));
}

// P_.(hit B before A): 1 on B, 0 on A, harmonic elsewhere.
Eigen::VectorXd hit_b_before_a(const Generator& g, const TargetSet& a, const TargetSet& b) {
  const Eigen::Index n = g.size();
  std::vector<char> fixed = membership(a, n);
  Eigen::VectorXd values = Eigen::VectorXd::Zero(n);
  for (Eigen::Index x : b.members()) {
    fixed[static_cast<size_t>(x)] = 1;
    values(x) = 1.0;
  }
  return solve_off_set(g, fixed, values, 0.0, Eigen::VectorXd::Zero(n));
}

}  // namespace

double capacity_dirichlet(const Generator& g, const ProbabilityDistribution& mu,
                          const TargetSet& a, const TargetSet& b) {
  check_disjoint(g, a, b);
  Eigen::VectorXd h = Eigen::VectorXd::Ones(g.size()) - hit_b_before_a(g, a, b);
  return dirichlet_form(g, mu, ObservableFunction(std::move(h)));
}

double capacity_probabilistic(const Generator& g, const ProbabilityDistribution& mu,
                              const TargetSet& a, const TargetSet& b) {
  check_disjoint(g, a, b);
  Eigen::VectorXd p = hit_b_before_a(g, a, b);
  // Exit-rate weighted escape probability through the embedded jump chain:
  // sum_{x in A} mu(x) (-G(x,x)) sum_y J(x,y) p(y), with p = 0 on A
  // covering jumps that land back in A.
  double total = 0.0;
  for (Eigen::Index x : a.members())
    for (Eigen::Index y = 0; y < g.size(); ++y)
      if (y != x) total += mu(x) * g.rate(x, y) * p(y);
  return total;
}

double capacity(const Generator& g, const ProbabilityDistribution& mu, const TargetSet& a,
                const TargetSet& b) {
  if (mu.size() != g.size())
    throw Error(ErrorKind::DimensionMismatch, "distribution sized for a different chain");
  return is_reversible(g, mu, 1e-9) ? capacity_dirichlet(g, mu, a, b)
                                    : capacity_probabilistic(g, mu, a, b);
}

double mean_hitting_from(const Generator& g, const ProbabilityDistribution& start,
                         const TargetSet& a) {
  ObservableFunction v = expected_hitting_times(g, a);
  return inner_product(v, ObservableFunction::constant(g.size(), 1.0), start);
}

double laplace_hitting_from(const Generator& g, const ProbabilityDistribution& start,
                            const TargetSet& a, double lambda) {
  ObservableFunction u = hitting_laplace(g, a, lambda);
  return inner_product(u, ObservableFunction::constant(g.size(), 1.0), start);
}

}  // namespace mhrev
