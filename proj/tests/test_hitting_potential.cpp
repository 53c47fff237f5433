#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mhrev/hitting_potential.hpp"
#include "mhrev/markov_core.hpp"
#include "mhrev/mh_kernels.hpp"
#include "mhrev/oracles.hpp"
#include "mhrev/spectral.hpp"
#include "test_helpers.hpp"

using namespace mhrev;
using namespace mhrev::testing;

namespace {

MhPair worked_pair() { return build_pair(q_a(), half_half()); }

}  // namespace

TEST_CASE("expected hitting times of the worked pair") {
  MhPair pair = worked_pair();
  TargetSet a = TargetSet::of({1}, 2);
  ObservableFunction v1 = expected_hitting_times(pair.m1, a);
  CHECK(v1(1) == 0.0);
  CHECK(v1(0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(expected_hitting_times(pair.m2, a)(0) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("path instance hitting times solve the 2x2 system") {
  Generator m1 = build_m1(q_c(), ProbabilityDistribution::uniform(3));
  ObservableFunction v = expected_hitting_times(m1, TargetSet::of({2}, 3));
  CHECK(v(0) == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(v(1) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(v(2) == 0.0);
}

TEST_CASE("unreachable targets are rejected") {
  Eigen::MatrixXd q(2, 2);
  q << -1, 1, 0, 0;
  Generator g = validate_generator(q);
  CHECK_THROWS_AS(expected_hitting_times(g, TargetSet::of({0}, 2)), Error);
  CHECK_NOTHROW(expected_hitting_times(g, TargetSet::of({1}, 2)));
}

TEST_CASE("hitting Laplace transforms of the worked pair") {
  MhPair pair = worked_pair();
  TargetSet a = TargetSet::of({1}, 2);
  CHECK(hitting_laplace(pair.m1, a, 1.0)(0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(hitting_laplace(pair.m1, a, 1.0)(1) == 1.0);
  CHECK(hitting_laplace(pair.m2, a, 1.0)(0) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  // Small-lambda limit approaches 1 for every reachable start.
  CHECK(hitting_laplace(pair.m1, a, 1e-9)(0) == doctest::Approx(1.0).epsilon(1e-7));
  CHECK_THROWS_AS(hitting_laplace(pair.m1, a, 0.0), Error);
}

TEST_CASE("Laplace transform is decreasing in lambda") {
  oracles::Rng rng(73);
  for (int trial = 0; trial < 15; ++trial) {
    Eigen::Index n = 3 + static_cast<Eigen::Index>(trial % 5);
    Generator g = oracles::random_irreducible_generator(
        {n, 7000 + static_cast<std::uint64_t>(trial),
         oracles::InstanceSpec::Structure::Dense, 1.0});
    TargetSet a = TargetSet::of({static_cast<Eigen::Index>(trial) % n}, n);
    double previous = 2.0;
    for (double lambda : {0.1, 0.5, 1.0, 2.0, 5.0, 10.0}) {
      ObservableFunction u = hitting_laplace(g, a, lambda);
      double mean = u.values().mean();
      CHECK(mean <= previous + 1e-12);
      for (Eigen::Index x = 0; x < n; ++x) {
        CHECK(u(x) > 0.0);
        CHECK(u(x) <= 1.0 + 1e-12);
      }
      previous = mean;
    }
  }
}

TEST_CASE("average hitting time agrees with the spectral route") {
  MhPair pair = worked_pair();
  CHECK(average_hitting_time(pair.m1, half_half()) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(average_hitting_time(pair.m2, half_half()) == doctest::Approx(0.25).epsilon(1e-12));

  oracles::Rng rng(79);
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::Index n = 2 + static_cast<Eigen::Index>(trial % 7);
    ProbabilityDistribution mu = oracles::random_target(n, rng);
    Generator g = build_m2(oracles::random_irreducible_generator(
                               {n, 7400 + static_cast<std::uint64_t>(trial),
                                oracles::InstanceSpec::Structure::Dense, 1.0}),
                           mu);
    double direct = average_hitting_time(g, mu);
    SpectrumResult s = reversible_spectrum(g, mu);
    double spectral = 0.0;
    for (Eigen::Index i = 1; i < n; ++i) spectral += 1.0 / s.eigenvalues(i);
    CHECK(direct == doctest::Approx(spectral).epsilon(1e-9));
  }
}

TEST_CASE("single state chain has zero average hitting time") {
  Generator trivial = validate_generator(Eigen::MatrixXd::Zero(1, 1));
  CHECK(average_hitting_time(trivial, ProbabilityDistribution::uniform(1)) == 0.0);
}

TEST_CASE("commute time worked values and symmetry") {
  MhPair pair = worked_pair();
  CHECK(commute_time(pair.m1, 0, 1) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(commute_time(pair.m2, 0, 1) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(commute_time(pair.m2, 1, 0) == doctest::Approx(commute_time(pair.m2, 0, 1)));
  CHECK_THROWS_AS(commute_time(pair.m1, 1, 1), Error);
}

TEST_CASE("commute time equals the reciprocal singleton capacity for reversible chains") {
  oracles::Rng rng(83);
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::Index n = 2 + static_cast<Eigen::Index>(trial % 6);
    ProbabilityDistribution mu = oracles::random_target(n, rng);
    Generator g = build_m1(oracles::random_irreducible_generator(
                               {n, 7800 + static_cast<std::uint64_t>(trial),
                                oracles::InstanceSpec::Structure::Dense, 1.0}),
                           mu);
    Eigen::Index x = rng.uniform_index(0, n - 1);
    Eigen::Index y = rng.uniform_index(0, n - 2);
    if (y >= x) ++y;
    double cap = capacity(g, mu, TargetSet::of({x}, n), TargetSet::of({y}, n));
    CHECK(commute_time(g, x, y) == doctest::Approx(1.0 / cap).epsilon(1e-9));
  }
}

TEST_CASE("capacity worked values") {
  MhPair pair = worked_pair();
  TargetSet a = TargetSet::of({0}, 2);
  TargetSet b = TargetSet::of({1}, 2);
  CHECK(capacity(pair.m1, half_half(), a, b) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(capacity(pair.m2, half_half(), a, b) == doctest::Approx(1.0).epsilon(1e-12));

  Generator path = build_m1(q_c(), ProbabilityDistribution::uniform(3));
  CHECK(capacity(path, ProbabilityDistribution::uniform(3), TargetSet::of({0}, 3),
                 TargetSet::of({2}, 3)) == doctest::Approx(1.0 / 6.0).epsilon(1e-12));
}

TEST_CASE("capacity is symmetric for reversible generators") {
  oracles::Rng rng(89);
  for (int trial = 0; trial < 15; ++trial) {
    Eigen::Index n = 3 + static_cast<Eigen::Index>(trial % 5);
    ProbabilityDistribution mu = oracles::random_target(n, rng);
    Generator g = build_m2(oracles::random_irreducible_generator(
                               {n, 8200 + static_cast<std::uint64_t>(trial),
                                oracles::InstanceSpec::Structure::Dense, 1.0}),
                           mu);
    TargetSet a = TargetSet::of({0}, n);
    TargetSet b = TargetSet::of({n - 1}, n);
    CHECK(capacity(g, mu, a, b) == doctest::Approx(capacity(g, mu, b, a)).epsilon(1e-10));
  }
}

TEST_CASE("Dirichlet and probabilistic capacity routes agree for reversible chains") {
  oracles::Rng rng(97);
  for (int trial = 0; trial < 25; ++trial) {
    Eigen::Index n = 3 + static_cast<Eigen::Index>(trial % 6);
    ProbabilityDistribution mu = oracles::random_target(n, rng);
    Generator g = build_m1(oracles::random_irreducible_generator(
                               {n, 8600 + static_cast<std::uint64_t>(trial),
                                oracles::InstanceSpec::Structure::Dense, 1.0}),
                           mu);
    TargetSet a = TargetSet::of({0}, n);
    TargetSet b = TargetSet::of({1, n - 1}, n);
    double dirichlet = capacity_dirichlet(g, mu, a, b);
    double probabilistic = capacity_probabilistic(g, mu, a, b);
    CHECK(std::abs(dirichlet - probabilistic) <= 1e-10 * std::max(1.0, dirichlet));
  }
}

TEST_CASE("overlapping capacity sets are rejected") {
  CHECK_THROWS_AS(
      capacity(q_c(), ProbabilityDistribution::uniform(3), TargetSet::of({0, 1}, 3),
               TargetSet::of({1, 2}, 3)),
      Error);
}

TEST_CASE("hitting and capacity orderings across the pair") {
  oracles::Rng rng(101);
  for (int trial = 0; trial < 15; ++trial) {
    Eigen::Index n = 3 + static_cast<Eigen::Index>(trial % 6);
    ProbabilityDistribution mu = oracles::random_target(n, rng);
    Generator g = oracles::random_irreducible_generator(
        {n, 9000 + static_cast<std::uint64_t>(trial),
         oracles::InstanceSpec::Structure::Dense, 1.0});
    MhPair pair = build_pair(g, mu);

    TargetSet a = TargetSet::of({rng.uniform_index(0, n - 1)}, n);
    for (double lambda : {0.1, 1.0, 10.0})
      CHECK(laplace_hitting_from(pair.m1, mu, a, lambda) <=
            laplace_hitting_from(pair.m2, mu, a, lambda) + 1e-9);
    CHECK(mean_hitting_from(pair.m1, mu, a) >= mean_hitting_from(pair.m2, mu, a) - 1e-9);
    CHECK(average_hitting_time(pair.m1, mu) >= average_hitting_time(pair.m2, mu) - 1e-9);

    TargetSet b = TargetSet::of({(a.members()[0] + 1) % n}, n);
    CHECK(capacity(pair.m1, mu, a, b) <= capacity(pair.m2, mu, a, b) + 1e-9);
    CHECK(commute_time(pair.m1, a.members()[0], b.members()[0]) >=
          commute_time(pair.m2, a.members()[0], b.members()[0]) - 1e-9);
  }
}

TEST_CASE("sandwich orderings at the stationary target") {
  oracles::Rng rng(103);
  for (int trial = 0; trial < 15; ++trial) {
    Eigen::Index n = 3 + static_cast<Eigen::Index>(trial % 5);
    Generator g = oracles::random_irreducible_generator(
        {n, 9400 + static_cast<std::uint64_t>(trial),
         oracles::InstanceSpec::Structure::Dense, 1.0});
    ProbabilityDistribution pi = stationary_distribution(g);
    MhPair pair = build_pair(g, pi);
    Generator qbar = additive_reversiblization(g, pi);

    TargetSet a = TargetSet::of({rng.uniform_index(0, n - 1)}, n);
    for (double lambda : {0.1, 1.0, 10.0}) {
      double lm1 = laplace_hitting_from(pair.m1, pi, a, lambda);
      double lbar = laplace_hitting_from(qbar, pi, a, lambda);
      double lq = laplace_hitting_from(g, pi, a, lambda);
      double lm2 = laplace_hitting_from(pair.m2, pi, a, lambda);
      CHECK(lm1 <= lbar + 1e-9);
      CHECK(lbar <= std::min(lq, lm2) + 1e-9);
    }
    double tm1 = average_hitting_time(pair.m1, pi);
    double tbar = average_hitting_time(qbar, pi);
    double tq = average_hitting_time(g, pi);
    double tm2 = average_hitting_time(pair.m2, pi);
    CHECK(tm1 >= tbar - 1e-9);
    CHECK(tbar >= std::max(tq, tm2) - 1e-9);

    TargetSet b = TargetSet::of({(a.members()[0] + 1) % n}, n);
    double cm1 = capacity(pair.m1, pi, a, b);
    double cbar = capacity(qbar, pi, a, b);
    double cq = capacity(g, pi, a, b);
    double cm2 = capacity(pair.m2, pi, a, b);
    CHECK(cm1 <= cbar + 1e-9);
    CHECK(cbar <= std::min(cq, cm2) + 1e-9);
  }
}

TEST_CASE("hard pool: small rates still produce finite results") {
  oracles::Rng rng(107);
  for (int trial = 0; trial < 10; ++trial) {
    Eigen::Index n = 3 + static_cast<Eigen::Index>(trial % 4);
    Eigen::MatrixXd rates = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index x = 0; x < n; ++x)
      for (Eigen::Index y = 0; y < n; ++y)
        if (x != y) rates(x, y) = rng.uniform(1e-4, 1.0);
    Generator g = Generator::from_off_diagonal(std::move(rates));
    ProbabilityDistribution pi = stationary_distribution(g);
    ObservableFunction v = expected_hitting_times(g, TargetSet::of({0}, n));
    CHECK(v.values().allFinite());
    CHECK(average_hitting_time(g, pi) >= 0.0);
  }
}
