#ifndef MHREV_REPORT_HPP
#define MHREV_REPORT_HPP

#include "mhrev/hitting_potential.hpp"
#include "mhrev/types.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace mhrev {

/// The evaluation battery fed to a comparison run: observables for the
/// asymptotic variance, measures for the rate function, set pairs for
/// capacities, hit sets for hitting statistics, state pairs for commute
/// times, and the Laplace grid.
struct ReportInputs {
  std::vector<Eigen::VectorXd> f_list;
  std::vector<Eigen::VectorXd> nu_list;
  std::vector<std::pair<std::vector<Eigen::Index>, std::vector<Eigen::Index>>> set_pairs;
  std::vector<std::vector<Eigen::Index>> hit_sets;
  std::vector<std::pair<Eigen::Index, Eigen::Index>> commute_pairs;
  std::vector<double> lambda_grid{0.1, 1.0, 10.0};
};

ReportInputs default_report_inputs(Eigen::Index n, const ProbabilityDistribution& mu,
                                   std::uint64_t seed, int num_f = 3, int num_nu = 3,
                                   int num_sets = 3, int num_hit = 3, int num_commute = 3);

/// One generator's value block. Cells that are undefined for the generator
/// (e.g. mixing time when the target is not its stationary law) stay empty.
struct GeneratorFunctionals {
  std::string name;
  Eigen::MatrixXd rates;
  bool reversible = false;
  bool irreducible = false;
  std::optional<double> lambda2;
  std::optional<double> t_rel;
  std::optional<double> t_av;
  std::optional<double> t_mix;
  std::vector<std::optional<double>> sigma2;
  std::vector<std::optional<double>> cap;
  std::vector<std::optional<double>> rate_i;
  std::vector<std::optional<double>> mean_hit;
  std::vector<std::optional<double>> commute;
  std::vector<std::vector<std::optional<double>>> laplace;  // [hit set][lambda]
};

struct Verdict {
  std::string clause;
  std::string status;  // holds | holds-at-tolerance | violated | not-applicable
  double margin = 0.0;
  double tolerance = 0.0;
};

struct ComparisonReport {
  Eigen::Index n = 0;
  std::string target_source;  // "explicit" | "file" | "stationary"
  bool mu_is_stationary = false;
  double tol_identity = kIdentityTol;
  double tol_order = kOrderTol;
  double epsilon = 0.25;
  Eigen::VectorXd mu;
  ReportInputs inputs;
  std::vector<GeneratorFunctionals> generators;  // Q, Q*, Qbar, M1, M2
  std::vector<Verdict> verdicts;
  std::optional<double> mixing_ratio_m2_m1;
  std::optional<bool> qbar_mixing_between;
  bool ok = true;  // no theorem-backed verdict violated
};

/// Evaluates the full functional battery for Q, Q*, Qbar, M1, M2 and fills
/// in the ordering verdicts (the M1/M2 clauses always; the sandwich clauses
/// including Q and Qbar when mu is stationary for Q). The mixing-time
/// comparison is reported, never asserted.
ComparisonReport build_comparison_report(const Generator& q, const ProbabilityDistribution& mu,
                                         std::string target_source, const ReportInputs& inputs,
                                         double tol_identity = kIdentityTol,
                                         double tol_order = kOrderTol, double epsilon = 0.25,
                                         std::uint64_t variational_seed = 0);

std::string report_to_json(const ComparisonReport& report, int indent = 2);
std::string report_to_csv(const ComparisonReport& report);

}  // namespace mhrev

#endif
