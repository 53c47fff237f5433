#include "mhrev/report.hpp"

#include "mhrev/chain_file.hpp"
#include "mhrev/markov_core.hpp"
#include "mhrev/mh_kernels.hpp"
#include "mhrev/mixing_sst.hpp"
#include "mhrev/oracles.hpp"
#include "mhrev/spectral.hpp"
#include "mhrev/variance_ldp.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace mhrev {

using nlohmann::json;

ReportInputs default_report_inputs(Eigen::Index n, const ProbabilityDistribution& mu,
                                   std::uint64_t seed, int num_f, int num_nu, int num_sets,
                                   int num_hit, int num_commute) {
  oracles::Rng rng(seed ^ 0xd1b54a32d192ed03ULL);
  ReportInputs inputs;
  for (int i = 0; i < num_f; ++i)
    inputs.f_list.push_back(oracles::random_mean_zero_observable(mu, rng).values());
  for (int i = 0; i < num_nu; ++i)
    inputs.nu_list.push_back(oracles::random_target(n, rng).weights());

  auto random_subset = [&](Eigen::Index max_size, const std::vector<char>& excluded) {
    std::vector<Eigen::Index> pool;
    for (Eigen::Index x = 0; x < n; ++x)
      if (!excluded[static_cast<size_t>(x)]) pool.push_back(x);
    for (size_t i = pool.size(); i > 1; --i)
      std::swap(pool[i - 1], pool[static_cast<size_t>(rng.uniform_index(0,
                                   static_cast<Eigen::Index>(i) - 1))]);
    Eigen::Index size = rng.uniform_index(1, std::max<Eigen::Index>(1, max_size));
    size = std::min(size, static_cast<Eigen::Index>(pool.size()));
    return std::vector<Eigen::Index>(pool.begin(), pool.begin() + size);
  };

  for (int i = 0; i < num_sets && n >= 2; ++i) {
    std::vector<char> used(static_cast<size_t>(n), 0);
    std::vector<Eigen::Index> a = random_subset(std::max<Eigen::Index>(1, n / 3), used);
    for (Eigen::Index x : a) used[static_cast<size_t>(x)] = 1;
    std::vector<Eigen::Index> b = random_subset(std::max<Eigen::Index>(1, n / 3), used);
    inputs.set_pairs.emplace_back(std::move(a), std::move(b));
  }
  for (int i = 0; i < num_hit; ++i) {
    std::vector<char> none(static_cast<size_t>(n), 0);
    inputs.hit_sets.push_back(random_subset(std::max<Eigen::Index>(1, n / 2), none));
  }
  for (int i = 0; i < num_commute && n >= 2; ++i) {
    Eigen::Index x = rng.uniform_index(0, n - 1);
    Eigen::Index y = rng.uniform_index(0, n - 2);
    if (y >= x) ++y;
    inputs.commute_pairs.emplace_back(x, y);
  }
  return inputs;
}

namespace {

template <typename Fn>
std::optional<double> guarded(Fn&& fn) {
  try {
    double v = fn();
    if (!std::isfinite(v)) return std::nullopt;
    return v;
  } catch (const Error&) {
    return std::nullopt;
  }
}

struct VerdictSink {
  std::vector<Verdict>& verdicts;
  bool& ok;

  // Clause asserts lhs <= rhs.
  void require(const std::string& clause, const std::optional<double>& lhs,
               const std::optional<double>& rhs, double tol) {
    if (!lhs || !rhs) {
      verdicts.push_back({clause, "not-applicable", 0.0, tol});
      return;
    }
    double margin = *rhs - *lhs;
    std::string status = margin >= 0.0          ? "holds"
                         : margin >= -tol       ? "holds-at-tolerance"
                                                : "violated";
    if (status == "violated") ok = false;
    verdicts.push_back({clause, status, margin, tol});
  }
};

}  // namespace

ComparisonReport build_comparison_report(const Generator& q, const ProbabilityDistribution& mu,
                                         std::string target_source, const ReportInputs& inputs,
                                         double tol_identity, double tol_order, double epsilon,
                                         std::uint64_t variational_seed) {
  const Eigen::Index n = q.size();
  ComparisonReport report;
  report.n = n;
  report.target_source = std::move(target_source);
  report.tol_identity = tol_identity;
  report.tol_order = tol_order;
  report.epsilon = epsilon;
  report.mu = mu.weights();
  report.inputs = inputs;

  double drift = (mu.weights().transpose() * q.rates()).cwiseAbs().maxCoeff();
  report.mu_is_stationary = drift <= 1e-9 * q.scale();

  Generator qstar = time_reversal(q, mu);
  Generator qbar = additive_reversiblization(q, mu);
  MhPair pair = build_pair(q, mu);
  const std::vector<std::pair<std::string, const Generator*>> generators = {
      {"Q", &q}, {"Q*", &qstar}, {"Qbar", &qbar}, {"M1", &pair.m1}, {"M2", &pair.m2}};

  for (const auto& [name, gen] : generators) {
    const Generator& g = *gen;
    GeneratorFunctionals block;
    block.name = name;
    block.rates = g.rates();
    block.reversible = is_reversible(g, mu, 1e-9);
    block.irreducible = g.irreducible();
    bool stationary_matches =
        block.reversible ||
        (mu.weights().transpose() * g.rates()).cwiseAbs().maxCoeff() <= 1e-9 * g.scale();

    block.lambda2 = guarded([&] { return spectral_gap(g, mu); });
    block.t_rel = guarded([&] { return relaxation_time(g, mu); });
    block.t_av = guarded([&] { return average_hitting_time(g, mu); });
    if (stationary_matches)
      block.t_mix = guarded([&] { return tv_mixing_time(g, mu, epsilon); });

    for (const Eigen::VectorXd& f : inputs.f_list) {
      if (stationary_matches)
        block.sigma2.push_back(
            guarded([&] { return asymptotic_variance(g, mu, ObservableFunction(f)); }));
      else
        block.sigma2.push_back(std::nullopt);
    }
    for (const auto& [a, b] : inputs.set_pairs)
      block.cap.push_back(guarded([&] {
        return capacity(g, mu, TargetSet::of(a, n), TargetSet::of(b, n));
      }));
    for (const Eigen::VectorXd& nu : inputs.nu_list)
      block.rate_i.push_back(guarded([&] {
        ProbabilityDistribution nu_dist = ProbabilityDistribution::validated(nu);
        return block.reversible ? rate_function_reversible(g, mu, nu_dist)
                                : rate_function_variational(g, nu_dist, variational_seed);
      }));
    for (const auto& a : inputs.hit_sets) {
      block.mean_hit.push_back(
          guarded([&] { return mean_hitting_from(g, mu, TargetSet::of(a, n)); }));
      std::vector<std::optional<double>> row;
      for (double lambda : inputs.lambda_grid)
        row.push_back(guarded(
            [&] { return laplace_hitting_from(g, mu, TargetSet::of(a, n), lambda); }));
      block.laplace.push_back(std::move(row));
    }
    for (const auto& [x, y] : inputs.commute_pairs)
      block.commute.push_back(guarded([&] { return commute_time(g, x, y); }));

    report.generators.push_back(std::move(block));
  }

  const GeneratorFunctionals& bq = report.generators[0];
  const GeneratorFunctionals& bbar = report.generators[2];
  const GeneratorFunctionals& b1 = report.generators[3];
  const GeneratorFunctionals& b2 = report.generators[4];
  VerdictSink sink{report.verdicts, report.ok};
  const double variational_tol = std::max(tol_order, 1e-6);

  // Pairwise M1/M2 comparisons hold for every strictly positive target.
  for (size_t i = 0; i < inputs.hit_sets.size(); ++i) {
    for (size_t j = 0; j < inputs.lambda_grid.size(); ++j) {
      std::string tag = "laplace[A" + std::to_string(i) + ",l" + std::to_string(j) + "]";
      sink.require(tag + ": M1<=M2", b1.laplace[i][j], b2.laplace[i][j], tol_order);
    }
    std::string tag = "mean_hitting[A" + std::to_string(i) + "]";
    sink.require(tag + ": M2<=M1", b2.mean_hit[i], b1.mean_hit[i], tol_order);
  }
  sink.require("t_av: M2<=M1", b2.t_av, b1.t_av, tol_order);
  sink.require("gap: M1<=M2", b1.lambda2, b2.lambda2, tol_order);
  for (size_t i = 0; i < inputs.f_list.size(); ++i)
    sink.require("sigma2[f" + std::to_string(i) + "]: M2<=M1", b2.sigma2[i], b1.sigma2[i],
                 tol_order);
  for (size_t i = 0; i < inputs.nu_list.size(); ++i)
    sink.require("rate[nu" + std::to_string(i) + "]: M1<=M2", b1.rate_i[i], b2.rate_i[i],
                 tol_order);
  for (size_t i = 0; i < inputs.set_pairs.size(); ++i)
    sink.require("capacity[p" + std::to_string(i) + "]: M1<=M2", b1.cap[i], b2.cap[i],
                 tol_order);
  for (size_t i = 0; i < inputs.commute_pairs.size(); ++i)
    sink.require("commute[c" + std::to_string(i) + "]: M2<=M1", b2.commute[i], b1.commute[i],
                 tol_order);

  // Sandwich comparisons against Q and Qbar need mu to be stationary for Q.
  if (report.mu_is_stationary) {
    for (size_t i = 0; i < inputs.hit_sets.size(); ++i) {
      for (size_t j = 0; j < inputs.lambda_grid.size(); ++j) {
        std::string tag = "laplace[A" + std::to_string(i) + ",l" + std::to_string(j) + "]";
        sink.require(tag + ": M1<=Qbar", b1.laplace[i][j], bbar.laplace[i][j], tol_order);
        sink.require(tag + ": Qbar<=Q", bbar.laplace[i][j], bq.laplace[i][j], tol_order);
        sink.require(tag + ": Qbar<=M2", bbar.laplace[i][j], b2.laplace[i][j], tol_order);
      }
      std::string tag = "mean_hitting[A" + std::to_string(i) + "]";
      sink.require(tag + ": Qbar<=M1", bbar.mean_hit[i], b1.mean_hit[i], tol_order);
      sink.require(tag + ": Q<=Qbar", bq.mean_hit[i], bbar.mean_hit[i], tol_order);
      sink.require(tag + ": M2<=Qbar", b2.mean_hit[i], bbar.mean_hit[i], tol_order);
    }
    sink.require("t_av: Qbar<=M1", bbar.t_av, b1.t_av, tol_order);
    sink.require("t_av: Q<=Qbar", bq.t_av, bbar.t_av, tol_order);
    sink.require("t_av: M2<=Qbar", b2.t_av, bbar.t_av, tol_order);
    sink.require("gap: M1<=Qbar", b1.lambda2, bbar.lambda2, tol_order);
    sink.require("gap: Qbar<=M2", bbar.lambda2, b2.lambda2, tol_order);
    for (size_t i = 0; i < inputs.f_list.size(); ++i) {
      std::string tag = "sigma2[f" + std::to_string(i) + "]";
      sink.require(tag + ": Qbar<=M1", bbar.sigma2[i], b1.sigma2[i], tol_order);
      sink.require(tag + ": Q<=Qbar", bq.sigma2[i], bbar.sigma2[i], tol_order);
      sink.require(tag + ": M2<=Qbar", b2.sigma2[i], bbar.sigma2[i], tol_order);
    }
    for (size_t i = 0; i < inputs.nu_list.size(); ++i) {
      std::string tag = "rate[nu" + std::to_string(i) + "]";
      sink.require(tag + ": M1<=Qbar", b1.rate_i[i], bbar.rate_i[i], tol_order);
      sink.require(tag + ": Qbar<=Q", bbar.rate_i[i], bq.rate_i[i], variational_tol);
      sink.require(tag + ": Qbar<=M2", bbar.rate_i[i], b2.rate_i[i], tol_order);
    }
    for (size_t i = 0; i < inputs.set_pairs.size(); ++i) {
      std::string tag = "capacity[p" + std::to_string(i) + "]";
      sink.require(tag + ": M1<=Qbar", b1.cap[i], bbar.cap[i], tol_order);
      sink.require(tag + ": Qbar<=Q", bbar.cap[i], bq.cap[i], tol_order);
      sink.require(tag + ": Qbar<=M2", bbar.cap[i], b2.cap[i], tol_order);
    }
    for (size_t i = 0; i < inputs.commute_pairs.size(); ++i) {
      std::string tag = "commute[c" + std::to_string(i) + "]";
      sink.require(tag + ": Qbar<=M1", bbar.commute[i], b1.commute[i], tol_order);
      sink.require(tag + ": Q<=Qbar", bq.commute[i], bbar.commute[i], tol_order);
      sink.require(tag + ": M2<=Qbar", b2.commute[i], bbar.commute[i], tol_order);
    }
  }

  // The mixing-time comparison carries an unspecified constant, so it is
  // reported rather than asserted.
  report.verdicts.push_back({"t_mix: reported (constant-bearing)", "not-applicable", 0.0, 0.0});
  if (b1.t_mix && b2.t_mix && *b1.t_mix > 0.0)
    report.mixing_ratio_m2_m1 = *b2.t_mix / *b1.t_mix;
  if (b1.t_mix && b2.t_mix && bbar.t_mix)
    report.qbar_mixing_between = *b2.t_mix <= *bbar.t_mix + tol_order &&
                                 *bbar.t_mix <= *b1.t_mix + tol_order;
  return report;
}

namespace {

json opt_json(const std::optional<double>& value) {
  if (!value) return nullptr;
  return *value;
}

json vector_json(const Eigen::VectorXd& v) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
  return arr;
}

json opt_list_json(const std::vector<std::optional<double>>& values) {
  json arr = json::array();
  for (const auto& v : values) arr.push_back(opt_json(v));
  return arr;
}

}  // namespace

std::string report_to_json(const ComparisonReport& report, int indent) {
  json j;
  j["n"] = report.n;
  j["target_source"] = report.target_source;
  j["target"] = vector_json(report.mu);
  j["mu_is_stationary"] = report.mu_is_stationary;
  j["tolerances"] = {{"identity", report.tol_identity},
                     {"order", report.tol_order},
                     {"epsilon", report.epsilon}};

  json inputs;
  inputs["lambda_grid"] = report.inputs.lambda_grid;
  inputs["f_list"] = json::array();
  for (const auto& f : report.inputs.f_list) inputs["f_list"].push_back(vector_json(f));
  inputs["nu_list"] = json::array();
  for (const auto& nu : report.inputs.nu_list) inputs["nu_list"].push_back(vector_json(nu));
  inputs["set_pairs"] = json::array();
  for (const auto& [a, b] : report.inputs.set_pairs)
    inputs["set_pairs"].push_back({{"a", a}, {"b", b}});
  inputs["hit_sets"] = report.inputs.hit_sets;
  inputs["commute_pairs"] = json::array();
  for (const auto& [x, y] : report.inputs.commute_pairs)
    inputs["commute_pairs"].push_back({x, y});
  j["inputs"] = std::move(inputs);

  j["generators"] = json::object();
  for (const GeneratorFunctionals& block : report.generators) {
    json g;
    g["rates"] = json::array();
    for (Eigen::Index x = 0; x < block.rates.rows(); ++x)
      g["rates"].push_back(vector_json(block.rates.row(x)));
    g["reversible"] = block.reversible;
    g["irreducible"] = block.irreducible;
    g["lambda2"] = opt_json(block.lambda2);
    g["t_rel"] = opt_json(block.t_rel);
    g["t_av"] = opt_json(block.t_av);
    g["t_mix"] = opt_json(block.t_mix);
    g["sigma2"] = opt_list_json(block.sigma2);
    g["capacity"] = opt_list_json(block.cap);
    g["rate_function"] = opt_list_json(block.rate_i);
    g["mean_hitting"] = opt_list_json(block.mean_hit);
    g["commute"] = opt_list_json(block.commute);
    g["laplace_hitting"] = json::array();
    for (const auto& row : block.laplace) g["laplace_hitting"].push_back(opt_list_json(row));
    j["generators"][block.name] = std::move(g);
  }

  j["verdicts"] = json::array();
  for (const Verdict& v : report.verdicts)
    j["verdicts"].push_back({{"clause", v.clause},
                             {"status", v.status},
                             {"margin", v.margin},
                             {"tolerance", v.tolerance}});
  json mixing;
  mixing["ratio_m2_m1"] = opt_json(report.mixing_ratio_m2_m1);
  mixing["qbar_between"] =
      report.qbar_mixing_between ? json(*report.qbar_mixing_between) : json(nullptr);
  j["mixing_report"] = std::move(mixing);
  j["ok"] = report.ok;
  return j.dump(indent);
}

std::string report_to_csv(const ComparisonReport& report) {
  std::ostringstream out;
  out << "generator,functional,index,value\n";
  auto cell = [&](const std::string& gen, const std::string& functional,
                  const std::string& index, const std::optional<double>& value) {
    out << gen << ',' << functional << ',' << index << ',';
    if (value)
      out << format_number(*value);
    else
      out << "NA";
    out << '\n';
  };
  for (const GeneratorFunctionals& block : report.generators) {
    cell(block.name, "lambda2", "", block.lambda2);
    cell(block.name, "t_rel", "", block.t_rel);
    cell(block.name, "t_av", "", block.t_av);
    cell(block.name, "t_mix", "", block.t_mix);
    for (size_t i = 0; i < block.sigma2.size(); ++i)
      cell(block.name, "sigma2", "f" + std::to_string(i), block.sigma2[i]);
    for (size_t i = 0; i < block.cap.size(); ++i)
      cell(block.name, "capacity", "p" + std::to_string(i), block.cap[i]);
    for (size_t i = 0; i < block.rate_i.size(); ++i)
      cell(block.name, "rate_function", "nu" + std::to_string(i), block.rate_i[i]);
    for (size_t i = 0; i < block.mean_hit.size(); ++i)
      cell(block.name, "mean_hitting", "A" + std::to_string(i), block.mean_hit[i]);
    for (size_t i = 0; i < block.laplace.size(); ++i)
      for (size_t k = 0; k < block.laplace[i].size(); ++k)
        cell(block.name, "laplace_hitting",
             "A" + std::to_string(i) + ":l" + std::to_string(k), block.laplace[i][k]);
    for (size_t i = 0; i < block.commute.size(); ++i)
      cell(block.name, "commute", "c" + std::to_string(i), block.commute[i]);
  }
  out << "verdict,clause,status,margin\n";
  for (const Verdict& v : report.verdicts)
    out << "verdict," << '"' << v.clause << '"' << ',' << v.status << ',' << v.margin << '\n';
  return out.str();
}

}  // namespace mhrev
