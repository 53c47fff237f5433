#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mhrev/markov_core.hpp"
#include "mhrev/mh_kernels.hpp"
#include "mhrev/oracles.hpp"
#include "test_helpers.hpp"

using namespace mhrev;
using namespace mhrev::testing;

TEST_CASE("validate_generator accepts a symmetric two-state chain") {
  Eigen::MatrixXd q(2, 2);
  q << -1, 1, 1, -1;
  Generator g = validate_generator(q);
  CHECK(g.irreducible());
  CHECK(g.size() == 2);
}

TEST_CASE("validate_generator rejects a bad row sum") {
  Eigen::MatrixXd q(2, 2);
  q << -1, 2, 1, -1;
  CHECK_THROWS_AS(validate_generator(q), Error);
  try {
    validate_generator(q);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::RowSumViolation);
    CHECK(std::string(e.what()).find("row 0") != std::string::npos);
  }
}

TEST_CASE("validate_generator rejects negative off-diagonals and empty input") {
  Eigen::MatrixXd q(2, 2);
  q << -1, 1, -0.5, 0.5;
  CHECK_THROWS_AS(validate_generator(q), Error);
  CHECK_THROWS_AS(validate_generator(Eigen::MatrixXd(0, 0)), Error);
}

TEST_CASE("an absorbing state is accepted but flagged reducible") {
  Eigen::MatrixXd q(2, 2);
  q << -1, 1, 0, 0;
  Generator g = validate_generator(q);
  CHECK_FALSE(g.irreducible());
}

TEST_CASE("stationary distribution of Q_A is (1/3, 2/3)") {
  ProbabilityDistribution pi = stationary_distribution(q_a());
  CHECK(pi(0) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(pi(1) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("symmetric generators have uniform stationary law") {
  oracles::Rng rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::Index n = 2 + static_cast<Eigen::Index>(trial % 5);
    Eigen::MatrixXd s = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index x = 0; x < n; ++x)
      for (Eigen::Index y = x + 1; y < n; ++y) s(x, y) = s(y, x) = rng.uniform(0.1, 1.0);
    Generator g = Generator::from_off_diagonal(s);
    ProbabilityDistribution pi = stationary_distribution(g);
    for (Eigen::Index x = 0; x < n; ++x)
      CHECK(pi(x) == doctest::Approx(1.0 / static_cast<double>(n)).epsilon(1e-10));
  }
}

TEST_CASE("stationary distribution rejects reducible generators") {
  Eigen::MatrixXd q = Eigen::MatrixXd::Zero(2, 2);
  CHECK_THROWS_AS(stationary_distribution(validate_generator(q)), Error);
}

TEST_CASE("M1 is stationary for its target") {
  Generator m1 = build_m1(q_a(), half_half());
  ProbabilityDistribution pi = stationary_distribution(m1);
  CHECK(pi(0) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("time reversal of Q_A under the uniform target") {
  Generator rev = time_reversal(q_a(), half_half());
  Eigen::MatrixXd expected(2, 2);
  expected << -1, 1, 2, -2;
  CHECK(max_abs_diff(rev.rates(), expected) <= 1e-15);
}

TEST_CASE("time reversal fixes reversible generators and is an involution") {
  oracles::Rng rng(11);
  for (int trial = 0; trial < 25; ++trial) {
    Eigen::Index n = 2 + static_cast<Eigen::Index>(trial % 6);
    ProbabilityDistribution mu = oracles::random_target(n, rng);
    oracles::InstanceSpec spec{n, 100 + static_cast<std::uint64_t>(trial),
                               oracles::InstanceSpec::Structure::Dense, 1.0};

    Generator g = oracles::random_irreducible_generator(spec);
    Generator twice = time_reversal(time_reversal(g, mu), mu);
    CHECK(max_abs_diff(twice.rates(), g.rates()) <= 1e-12);

    Generator rev = oracles::random_reversible_generator(mu, spec);
    CHECK(max_abs_diff(time_reversal(rev, mu).rates(), rev.rates()) <= 1e-12);
  }
}

TEST_CASE("time reversal preserves the stationary law") {
  oracles::Rng rng(13);
  for (int trial = 0; trial < 25; ++trial) {
    Eigen::Index n = 2 + static_cast<Eigen::Index>(trial % 6);
    oracles::InstanceSpec spec{n, 300 + static_cast<std::uint64_t>(trial),
                               oracles::InstanceSpec::Structure::Dense, 1.0};
    Generator g = oracles::random_irreducible_generator(spec);
    ProbabilityDistribution pi = stationary_distribution(g);
    Generator rev = time_reversal(g, pi);
    double residual = (pi.weights().transpose() * rev.rates()).cwiseAbs().maxCoeff();
    CHECK(residual <= 1e-12);
  }
}

TEST_CASE("additive reversiblization of Q_A averages Q and Q*") {
  Generator qbar = additive_reversiblization(q_a(), half_half());
  Eigen::MatrixXd expected(2, 2);
  expected << -1.5, 1.5, 1.5, -1.5;
  CHECK(max_abs_diff(qbar.rates(), expected) <= 1e-15);
  CHECK(is_reversible(qbar, half_half(), 1e-12));
}

TEST_CASE("additive reversiblization fixes reversible generators") {
  Generator m1 = build_m1(q_a(), half_half());
  Generator again = additive_reversiblization(m1, half_half());
  CHECK(max_abs_diff(again.rates(), m1.rates()) <= 1e-15);
}

TEST_CASE("Qbar equals (M1 + M2)/2 for any strictly positive target") {
  oracles::Rng rng(17);
  for (int trial = 0; trial < 25; ++trial) {
    Eigen::Index n = 2 + static_cast<Eigen::Index>(trial % 7);
    ProbabilityDistribution mu = oracles::random_target(n, rng);
    oracles::InstanceSpec spec{n, 900 + static_cast<std::uint64_t>(trial),
                               oracles::InstanceSpec::Structure::Dense, 1.0};
    Generator g = oracles::random_irreducible_generator(spec);
    Generator qbar = additive_reversiblization(g, mu);
    MhPair pair = build_pair(g, mu);
    Eigen::MatrixXd mean = 0.5 * (pair.m1.rates() + pair.m2.rates());
    CHECK(max_abs_diff(qbar.rates(), mean) <= 1e-12);
  }
}

TEST_CASE("is_reversible distinguishes Q_A from its reversiblizations") {
  CHECK(is_reversible(build_m1(q_a(), half_half()), half_half(), 1e-12));
  CHECK_FALSE(is_reversible(q_a(), half_half(), 1e-9));
  Generator trivial = validate_generator(Eigen::MatrixXd::Zero(1, 1));
  CHECK(is_reversible(trivial, ProbabilityDistribution::uniform(1), 1e-12));
}

TEST_CASE("Peskun ordering of the MH pair") {
  MhPair pair = build_pair(q_a(), half_half());
  CHECK(peskun_dominates(pair.m2, pair.m1, 0.0));
  CHECK(peskun_dominates(pair.m1, pair.m1, 0.0));
  CHECK_FALSE(peskun_dominates(q_a(), pair.m2, 1e-12));
}

TEST_CASE("Peskun sandwich around Q holds at the stationary target") {
  oracles::Rng rng(19);
  for (int trial = 0; trial < 25; ++trial) {
    Eigen::Index n = 2 + static_cast<Eigen::Index>(trial % 6);
    oracles::InstanceSpec spec{n, 500 + static_cast<std::uint64_t>(trial),
                               oracles::InstanceSpec::Structure::Dense, 1.0};
    Generator g = oracles::random_irreducible_generator(spec);
    ProbabilityDistribution pi = stationary_distribution(g);
    MhPair pair = build_pair(g, pi);
    CHECK(peskun_dominates(pair.m2, g, 0.0));
    CHECK(peskun_dominates(g, pair.m1, 0.0));
  }
}

TEST_CASE("peskun_dominates requires equal dimensions") {
  Generator small = validate_generator(Eigen::MatrixXd::Zero(1, 1));
  CHECK_THROWS_AS(peskun_dominates(small, q_a(), 0.0), Error);
}

TEST_CASE("inner product worked values") {
  ProbabilityDistribution quarter =
      ProbabilityDistribution::validated((Eigen::VectorXd(2) << 0.25, 0.75).finished());
  ObservableFunction ones = ObservableFunction::constant(2, 1.0);
  ObservableFunction sign(Eigen::VectorXd((Eigen::VectorXd(2) << 1, -1).finished()));
  CHECK(inner_product(ones, ones, quarter) == doctest::Approx(1.0));
  CHECK(inner_product(sign, sign, half_half()) == doctest::Approx(1.0));
  CHECK(inner_product(sign, ones, quarter) == doctest::Approx(-0.5));
}

TEST_CASE("Dirichlet form worked values on the MH pair") {
  ObservableFunction sign(Eigen::VectorXd((Eigen::VectorXd(2) << 1, -1).finished()));
  CHECK(dirichlet_form(q_a(), half_half(), ObservableFunction::constant(2, 3.0)) ==
        doctest::Approx(0.0).epsilon(1e-14));
  CHECK(dirichlet_form(build_m1(q_a(), half_half()), half_half(), sign) ==
        doctest::Approx(2.0).epsilon(1e-13));
  CHECK(dirichlet_form(build_m2(q_a(), half_half()), half_half(), sign) ==
        doctest::Approx(4.0).epsilon(1e-13));
}

TEST_CASE("Dirichlet form matches the flow-square expansion for reversible inputs") {
  oracles::Rng rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::Index n = 2 + static_cast<Eigen::Index>(trial % 6);
    ProbabilityDistribution mu = oracles::random_target(n, rng);
    oracles::InstanceSpec spec{n, 700 + static_cast<std::uint64_t>(trial),
                               oracles::InstanceSpec::Structure::Dense, 1.0};
    Generator rev = oracles::random_reversible_generator(mu, spec);
    ObservableFunction f = oracles::random_observable(n, rng);
    double direct = dirichlet_form(rev, mu, f);
    double square_sum = 0.0;
    for (Eigen::Index x = 0; x < n; ++x)
      for (Eigen::Index y = 0; y < n; ++y)
        if (x != y)
          square_sum += 0.5 * mu(x) * rev.rate(x, y) *
                        (f(x) - f(y)) * (f(x) - f(y));
    CHECK(direct == doctest::Approx(square_sum).epsilon(1e-10));
    CHECK(direct >= -1e-12);
  }
}

TEST_CASE("Dirichlet form ordering across the pair, and the sandwich at stationarity") {
  oracles::Rng rng(29);
  for (int trial = 0; trial < 10; ++trial) {
    Eigen::Index n = 2 + static_cast<Eigen::Index>(trial % 6);
    oracles::InstanceSpec spec{n, 1100 + static_cast<std::uint64_t>(trial),
                               oracles::InstanceSpec::Structure::Dense, 1.0};
    Generator g = oracles::random_irreducible_generator(spec);

    ProbabilityDistribution mu = oracles::random_target(n, rng);
    MhPair pair = build_pair(g, mu);
    for (int k = 0; k < 100; ++k) {
      ObservableFunction f = oracles::random_observable(n, rng);
      CHECK(dirichlet_form(pair.m2, mu, f) >= dirichlet_form(pair.m1, mu, f) - 1e-9);
    }

    ProbabilityDistribution pi = stationary_distribution(g);
    MhPair at_pi = build_pair(g, pi);
    for (int k = 0; k < 100; ++k) {
      ObservableFunction f = oracles::random_observable(n, rng);
      double e_q = dirichlet_form(g, pi, f);
      CHECK(dirichlet_form(at_pi.m2, pi, f) >= e_q - 1e-9);
      CHECK(e_q >= dirichlet_form(at_pi.m1, pi, f) - 1e-9);
    }
  }
}

TEST_CASE("M1 + M2 = Q + Q* entrywise") {
  oracles::Rng rng(31);
  for (int trial = 0; trial < 25; ++trial) {
    Eigen::Index n = 2 + static_cast<Eigen::Index>(trial % 7);
    ProbabilityDistribution mu = oracles::random_target(n, rng);
    oracles::InstanceSpec spec{n, 1300 + static_cast<std::uint64_t>(trial),
                               oracles::InstanceSpec::Structure::Dense, 1.0};
    Generator g = oracles::random_irreducible_generator(spec);
    MhPair pair = build_pair(g, mu);
    Eigen::MatrixXd lhs = pair.m1.rates() + pair.m2.rates();
    Eigen::MatrixXd rhs = g.rates() + time_reversal(g, mu).rates();
    CHECK(max_abs_diff(lhs, rhs) <= 1e-12);
  }
}

TEST_CASE("zero-mass targets are rejected at the reversal boundary") {
  Eigen::VectorXd w(2);
  w << 1.0, 0.0;
  ProbabilityDistribution degenerate = ProbabilityDistribution::validated(w);
  CHECK_THROWS_AS(time_reversal(q_a(), degenerate), Error);
  CHECK_THROWS_AS(build_m1(q_a(), degenerate), Error);
}
