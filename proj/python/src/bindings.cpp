#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "mhrev/hitting_potential.hpp"
#include "mhrev/markov_core.hpp"
#include "mhrev/mh_kernels.hpp"
#include "mhrev/mis_closed_form.hpp"
#include "mhrev/mixing_sst.hpp"
#include "mhrev/oracles.hpp"
#include "mhrev/spectral.hpp"
#include "mhrev/variance_ldp.hpp"

namespace py = pybind11;

namespace {

using mhrev::Generator;
using mhrev::ObservableFunction;
using mhrev::ProbabilityDistribution;
using mhrev::TargetSet;

Generator make_generator(const Eigen::MatrixXd& rates) {
  return Generator::validated(rates);
}

ProbabilityDistribution make_distribution(const Eigen::VectorXd& weights) {
  return ProbabilityDistribution::validated(weights);
}

TargetSet make_set(const std::vector<Eigen::Index>& members, Eigen::Index n) {
  return TargetSet::of(members, n);
}

}  // namespace

PYBIND11_MODULE(_mhrev, m) {
  m.doc() =
      "Metropolis-Hastings reversiblizations of finite-state Markov generators: "
      "M1/M2 construction, l1 projection distances, spectra, hitting times, "
      "mixing times, capacities, asymptotic variances, rate functions and "
      "birth-death strong stationary times.";

  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const mhrev::Error& e) {
      PyErr_SetString(PyExc_ValueError, e.what());
    }
  });

  m.def("is_irreducible",
        [](const Eigen::MatrixXd& q) { return make_generator(q).irreducible(); },
        py::arg("q"));
  m.def("stationary_distribution",
        [](const Eigen::MatrixXd& q) {
          return mhrev::stationary_distribution(make_generator(q)).weights();
        },
        py::arg("q"));
  m.def("time_reversal",
        [](const Eigen::MatrixXd& q, const Eigen::VectorXd& mu) {
          return mhrev::time_reversal(make_generator(q), make_distribution(mu)).rates();
        },
        py::arg("q"), py::arg("mu"));
  m.def("additive_reversiblization",
        [](const Eigen::MatrixXd& q, const Eigen::VectorXd& mu) {
          return mhrev::additive_reversiblization(make_generator(q), make_distribution(mu))
              .rates();
        },
        py::arg("q"), py::arg("mu"));
  m.def("is_reversible",
        [](const Eigen::MatrixXd& q, const Eigen::VectorXd& mu, double tol) {
          return mhrev::is_reversible(make_generator(q), make_distribution(mu), tol);
        },
        py::arg("q"), py::arg("mu"), py::arg("tol") = mhrev::kOrderTol);
  m.def("peskun_dominates",
        [](const Eigen::MatrixXd& q1, const Eigen::MatrixXd& q2, double tol) {
          return mhrev::peskun_dominates(make_generator(q1), make_generator(q2), tol);
        },
        py::arg("q1"), py::arg("q2"), py::arg("tol") = mhrev::kOrderTol);
  m.def("dirichlet_form",
        [](const Eigen::MatrixXd& q, const Eigen::VectorXd& mu, const Eigen::VectorXd& f) {
          return mhrev::dirichlet_form(make_generator(q), make_distribution(mu),
                                       ObservableFunction(f));
        },
        py::arg("q"), py::arg("mu"), py::arg("f"));

  m.def("build_m1",
        [](const Eigen::MatrixXd& q, const Eigen::VectorXd& mu) {
          return mhrev::build_m1(make_generator(q), make_distribution(mu)).rates();
        },
        py::arg("q"), py::arg("mu"));
  m.def("build_m2",
        [](const Eigen::MatrixXd& q, const Eigen::VectorXd& mu) {
          return mhrev::build_m2(make_generator(q), make_distribution(mu)).rates();
        },
        py::arg("q"), py::arg("mu"));
  m.def("convex_combination",
        [](const Eigen::MatrixXd& q, const Eigen::VectorXd& mu, double alpha) {
          return mhrev::convex_combination(
                     mhrev::build_pair(make_generator(q), make_distribution(mu)), alpha)
              .rates();
        },
        py::arg("q"), py::arg("mu"), py::arg("alpha"));
  m.def("l1_distance",
        [](const Eigen::MatrixXd& q1, const Eigen::MatrixXd& q2, const Eigen::VectorXd& mu) {
          return mhrev::l1_distance(make_generator(q1), make_generator(q2),
                                    make_distribution(mu));
        },
        py::arg("q1"), py::arg("q2"), py::arg("mu"));
  m.def("distance_to_reversible",
        [](const Eigen::MatrixXd& q, const Eigen::VectorXd& mu) {
          return mhrev::distance_to_reversible(make_generator(q), make_distribution(mu));
        },
        py::arg("q"), py::arg("mu"));

  m.def("reversible_spectrum",
        [](const Eigen::MatrixXd& q, const Eigen::VectorXd& mu) {
          mhrev::SpectrumResult s =
              mhrev::reversible_spectrum(make_generator(q), make_distribution(mu));
          return py::make_tuple(s.eigenvalues, s.eigenvectors);
        },
        py::arg("q"), py::arg("mu"));
  m.def("spectral_gap",
        [](const Eigen::MatrixXd& q, const Eigen::VectorXd& mu) {
          return mhrev::spectral_gap(make_generator(q), make_distribution(mu));
        },
        py::arg("q"), py::arg("mu"));
  m.def("relaxation_time",
        [](const Eigen::MatrixXd& q, const Eigen::VectorXd& mu) {
          return mhrev::relaxation_time(make_generator(q), make_distribution(mu));
        },
        py::arg("q"), py::arg("mu"));
  m.def("l2_convergence_rate",
        [](const Eigen::MatrixXd& q, const Eigen::VectorXd& mu, double t) {
          return mhrev::l2_convergence_rate(make_generator(q), make_distribution(mu), t);
        },
        py::arg("q"), py::arg("mu"), py::arg("t"));

  m.def("expected_hitting_times",
        [](const Eigen::MatrixXd& q, const std::vector<Eigen::Index>& a) {
          Generator g = make_generator(q);
          return mhrev::expected_hitting_times(g, make_set(a, g.size())).values();
        },
        py::arg("q"), py::arg("a"));
  m.def("hitting_laplace",
        [](const Eigen::MatrixXd& q, const std::vector<Eigen::Index>& a, double lam) {
          Generator g = make_generator(q);
          return mhrev::hitting_laplace(g, make_set(a, g.size()), lam).values();
        },
        py::arg("q"), py::arg("a"), py::arg("lam"));
  m.def("average_hitting_time",
        [](const Eigen::MatrixXd& q, const Eigen::VectorXd& mu) {
          return mhrev::average_hitting_time(make_generator(q), make_distribution(mu));
        },
        py::arg("q"), py::arg("mu"));
  m.def("commute_time",
        [](const Eigen::MatrixXd& q, Eigen::Index x, Eigen::Index y) {
          return mhrev::commute_time(make_generator(q), x, y);
        },
        py::arg("q"), py::arg("x"), py::arg("y"));
  m.def("capacity",
        [](const Eigen::MatrixXd& q, const Eigen::VectorXd& mu,
           const std::vector<Eigen::Index>& a, const std::vector<Eigen::Index>& b) {
          Generator g = make_generator(q);
          return mhrev::capacity(g, make_distribution(mu), make_set(a, g.size()),
                                 make_set(b, g.size()));
        },
        py::arg("q"), py::arg("mu"), py::arg("a"), py::arg("b"));

  m.def("transition_semigroup",
        [](const Eigen::MatrixXd& q, double t) {
          return mhrev::transition_semigroup(make_generator(q), t);
        },
        py::arg("q"), py::arg("t"));
  m.def("tv_mixing_time",
        [](const Eigen::MatrixXd& q, const Eigen::VectorXd& pi, double eps) {
          return mhrev::tv_mixing_time(make_generator(q), make_distribution(pi), eps);
        },
        py::arg("q"), py::arg("pi"), py::arg("epsilon") = 0.25);
  m.def("separation_distance",
        [](const Eigen::MatrixXd& q, const Eigen::VectorXd& pi, Eigen::Index start, double t) {
          return mhrev::separation_distance(make_generator(q), make_distribution(pi), start, t);
        },
        py::arg("q"), py::arg("pi"), py::arg("start"), py::arg("t"));

  m.def("bd_sst_rates",
        [](const Eigen::MatrixXd& q, const Eigen::VectorXd& mu) {
          return mhrev::bd_sst(make_generator(q), make_distribution(mu)).rates;
        },
        py::arg("q"), py::arg("mu"));
  m.def("sst_mean",
        [](const Eigen::VectorXd& rates) { return mhrev::sst_mean({rates}); },
        py::arg("rates"));
  m.def("sst_variance",
        [](const Eigen::VectorXd& rates) { return mhrev::sst_variance({rates}); },
        py::arg("rates"));
  m.def("sst_laplace",
        [](const Eigen::VectorXd& rates, double alpha) {
          return mhrev::sst_laplace({rates}, alpha);
        },
        py::arg("rates"), py::arg("alpha"));
  m.def("sst_survival",
        [](const Eigen::VectorXd& rates, double t) { return mhrev::sst_survival({rates}, t); },
        py::arg("rates"), py::arg("t"));

  m.def("asymptotic_variance",
        [](const Eigen::MatrixXd& q, const Eigen::VectorXd& mu, const Eigen::VectorXd& f) {
          return mhrev::asymptotic_variance(make_generator(q), make_distribution(mu),
                                            ObservableFunction(f));
        },
        py::arg("q"), py::arg("mu"), py::arg("f"));
  m.def("rate_function_reversible",
        [](const Eigen::MatrixXd& q, const Eigen::VectorXd& mu, const Eigen::VectorXd& nu) {
          return mhrev::rate_function_reversible(make_generator(q), make_distribution(mu),
                                                 make_distribution(nu));
        },
        py::arg("q"), py::arg("mu"), py::arg("nu"));
  m.def("rate_function_variational",
        [](const Eigen::MatrixXd& q, const Eigen::VectorXd& nu, std::uint64_t seed) {
          return mhrev::rate_function_variational(make_generator(q), make_distribution(nu),
                                                  seed);
        },
        py::arg("q"), py::arg("nu"), py::arg("seed") = 0);

  m.def("mis_spectrum",
        [](const Eigen::VectorXd& p, const Eigen::VectorXd& mu) {
          mhrev::MisInstance inst =
              mhrev::build_mis(make_distribution(p), make_distribution(mu));
          mhrev::MisSpectrum s = mhrev::mis_spectrum(inst);
          py::dict out;
          out["weights"] = inst.weights;
          out["order"] = inst.order;
          out["gamma"] = s.gamma;
          out["beta"] = s.beta;
          out["m1_eigenvalues"] = s.m1_eigenvalues;
          out["m2_eigenvalues"] = s.m2_eigenvalues;
          out["m1_eigenvectors"] = s.m1_eigenvectors;
          out["m2_eigenvectors"] = s.m2_eigenvectors;
          return out;
        },
        py::arg("p"), py::arg("mu"));
  m.def("mis_cross_validate",
        [](const Eigen::VectorXd& p, const Eigen::VectorXd& mu) {
          mhrev::MisValidation v = mhrev::mis_cross_validate(
              mhrev::build_mis(make_distribution(p), make_distribution(mu)));
          py::dict out;
          out["max_eigenvalue_gap"] = v.max_eigenvalue_gap;
          out["max_residual"] = v.max_residual;
          return out;
        },
        py::arg("p"), py::arg("mu"));
}
