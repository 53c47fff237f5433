#include "mhrev/cli_app.hpp"

#include "mhrev/chain_file.hpp"
#include "mhrev/markov_core.hpp"
#include "mhrev/mh_kernels.hpp"
#include "mhrev/mis_closed_form.hpp"
#include "mhrev/mixing_sst.hpp"
#include "mhrev/oracles.hpp"
#include "mhrev/report.hpp"
#include "mhrev/spectral.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

namespace mhrev {

using nlohmann::json;

namespace {

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("MHREV_SEED")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end && *end == '\0') return static_cast<std::uint64_t>(v);
  }
  return 24601;
}

ProbabilityDistribution normalize_target(Eigen::VectorXd raw, std::ostream& err,
                                         const std::string& what) {
  if ((raw.array() <= 0.0).any())
    throw Error(ErrorKind::ZeroTargetMass, what + " must be strictly positive");
  double sum = raw.sum();
  if (std::abs(sum - 1.0) > 1e-6)
    throw Error(ErrorKind::ParseError, what + " sums to " + std::to_string(sum));
  if (std::abs(sum - 1.0) > 1e-9) {
    raw /= sum;
    err << "warning: " << what << " renormalized\n";
  } else {
    raw /= sum;  // exact-sum inputs are unchanged by this
  }
  return ProbabilityDistribution::validated(std::move(raw));
}

struct ResolvedTarget {
  ProbabilityDistribution mu;
  std::string source;
};

ResolvedTarget resolve_target(const Generator& q, const ChainFile& file,
                              const std::string& target_flag, std::ostream& err) {
  if (!target_flag.empty())
    return {normalize_target(parse_vector_spec(target_flag), err, "target"), "explicit"};
  if (file.target)
    return {normalize_target(*file.target, err, "target"), "file"};
  return {stationary_distribution(q), "stationary"};
}

std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> grid;
  std::stringstream stream(text);
  std::string token;
  while (std::getline(stream, token, ',')) {
    if (token.empty()) continue;
    grid.push_back(std::stod(token));
  }
  if (grid.empty()) throw Error(ErrorKind::ParseError, "empty numeric grid");
  return grid;
}

std::vector<Eigen::Index> parse_state_list(const std::string& text) {
  std::vector<Eigen::Index> states;
  std::stringstream stream(text);
  std::string token;
  while (std::getline(stream, token, ',')) {
    if (token.empty()) continue;
    states.push_back(static_cast<Eigen::Index>(std::stoll(token)));
  }
  return states;
}

std::vector<Eigen::VectorXd> load_vector_rows(const std::string& path, Eigen::Index n) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ParseError, "cannot open '" + path + "'");
  std::vector<Eigen::VectorXd> rows;
  std::string line;
  while (std::getline(in, line)) {
    size_t begin = line.find_first_not_of(" \t\r");
    if (begin == std::string::npos || line[begin] == '#') continue;
    std::stringstream stream(line);
    std::vector<double> values;
    double v;
    while (stream >> v) values.push_back(v);
    if (values.empty()) continue;
    if (static_cast<Eigen::Index>(values.size()) != n)
      throw Error(ErrorKind::ParseError,
                  "'" + path + "': row has " + std::to_string(values.size()) +
                      " entries, expected " + std::to_string(n));
    rows.push_back(
        Eigen::Map<Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size())));
  }
  if (rows.empty()) throw Error(ErrorKind::ParseError, "'" + path + "' has no rows");
  return rows;
}

json vector_json(const Eigen::VectorXd& v) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
  return arr;
}

json matrix_json(const Eigen::MatrixXd& m) {
  json arr = json::array();
  for (Eigen::Index x = 0; x < m.rows(); ++x) arr.push_back(vector_json(m.row(x)));
  return arr;
}

struct CompareOptions {
  std::string input;
  std::string target_flag;
  std::string format = "json";
  std::string lambda_grid = "0.1,1,10";
  std::string f_list_path;
  std::string nu_list_path;
  std::string set_pairs;
  std::string a_list;
  std::string commute_pairs;
  double epsilon = 0.25;
  double tol_identity = kIdentityTol;
  double tol_order = kOrderTol;
  std::optional<std::uint64_t> seed;
};

ComparisonReport run_compare(const CompareOptions& opt, std::ostream& err) {
  ChainFile file = load_chain_file(opt.input);
  for (const std::string& w : file.warnings) err << "warning: " << w << "\n";
  Generator q = validate_generator(file.rates, file.states);
  if (!q.irreducible())
    throw Error(ErrorKind::NotIrreducible, "comparison needs an irreducible proposal chain");
  ResolvedTarget target = resolve_target(q, file, opt.target_flag, err);
  std::uint64_t seed = resolve_seed(opt.seed);

  ReportInputs inputs = default_report_inputs(q.size(), target.mu, seed);
  inputs.lambda_grid = parse_grid(opt.lambda_grid);
  if (!opt.f_list_path.empty()) {
    inputs.f_list = load_vector_rows(opt.f_list_path, q.size());
    for (Eigen::VectorXd& f : inputs.f_list)
      f.array() -= target.mu.weights().dot(f);  // sigma^2 needs mean-zero observables
  }
  if (!opt.nu_list_path.empty()) {
    inputs.nu_list = load_vector_rows(opt.nu_list_path, q.size());
    for (Eigen::VectorXd& nu : inputs.nu_list) {
      if ((nu.array() < 0.0).any() || nu.sum() <= 0.0)
        throw Error(ErrorKind::ParseError, "nu rows must be non-negative and non-null");
      nu /= nu.sum();
    }
  }
  if (!opt.set_pairs.empty()) {
    inputs.set_pairs.clear();
    std::stringstream stream(opt.set_pairs);
    std::string pair_text;
    while (std::getline(stream, pair_text, ';')) {
      size_t bar = pair_text.find('|');
      if (bar == std::string::npos)
        throw Error(ErrorKind::ParseError, "set pair needs 'a|b': " + pair_text);
      inputs.set_pairs.emplace_back(parse_state_list(pair_text.substr(0, bar)),
                                    parse_state_list(pair_text.substr(bar + 1)));
    }
  }
  if (!opt.a_list.empty()) {
    inputs.hit_sets.clear();
    std::stringstream stream(opt.a_list);
    std::string set_text;
    while (std::getline(stream, set_text, ';'))
      if (!set_text.empty()) inputs.hit_sets.push_back(parse_state_list(set_text));
  }
  if (!opt.commute_pairs.empty()) {
    inputs.commute_pairs.clear();
    std::stringstream stream(opt.commute_pairs);
    std::string pair_text;
    while (std::getline(stream, pair_text, ';')) {
      std::vector<Eigen::Index> states = parse_state_list(pair_text);
      if (states.size() != 2)
        throw Error(ErrorKind::ParseError, "commute pair needs two states: " + pair_text);
      inputs.commute_pairs.emplace_back(states[0], states[1]);
    }
  }

  return build_comparison_report(q, target.mu, target.source, inputs, opt.tol_identity,
                                 opt.tol_order, opt.epsilon, seed);
}

int cmd_info(const std::string& input, const std::string& target_flag, std::ostream& out,
             std::ostream& err) {
  ChainFile file = load_chain_file(input);
  for (const std::string& w : file.warnings) err << "warning: " << w << "\n";
  Generator q = validate_generator(file.rates, file.states);

  json j;
  j["n"] = q.size();
  j["labels"] = file.states;
  j["irreducible"] = q.irreducible();
  j["scale"] = q.scale();
  j["rates"] = matrix_json(q.rates());
  if (q.irreducible()) {
    ProbabilityDistribution pi = stationary_distribution(q);
    j["stationary"] = vector_json(pi.weights());
    j["reversible_wrt_stationary"] = is_reversible(q, pi, 1e-9);
  } else {
    j["stationary"] = nullptr;
    j["reversible_wrt_stationary"] = nullptr;
  }
  if (!target_flag.empty() || file.target) {
    ResolvedTarget target = resolve_target(q, file, target_flag, err);
    j["target"] = vector_json(target.mu.weights());
    j["target_source"] = target.source;
    j["reversible_wrt_target"] = is_reversible(q, target.mu, 1e-9);
  }
  out << j.dump(2) << "\n";
  return 0;
}

int cmd_reversiblize(const std::string& input, const std::string& kind,
                     const std::optional<double>& alpha_flag, const std::string& target_flag,
                     const std::string& output, std::ostream& out, std::ostream& err) {
  ChainFile file = load_chain_file(input);
  for (const std::string& w : file.warnings) err << "warning: " << w << "\n";
  Generator q = validate_generator(file.rates, file.states);
  ResolvedTarget target = resolve_target(q, file, target_flag, err);

  Generator result = [&] {
    if (kind == "convex" || alpha_flag) {
      double alpha = alpha_flag ? *alpha_flag : 0.5;
      return convex_combination(build_pair(q, target.mu), alpha);
    }
    if (kind == "m1") return build_m1(q, target.mu);
    if (kind == "m2") return build_m2(q, target.mu);
    if (kind == "additive") return additive_reversiblization(q, target.mu);
    if (kind.rfind("convex:", 0) == 0) {
      double alpha = std::stod(kind.substr(7));
      return convex_combination(build_pair(q, target.mu), alpha);
    }
    throw Error(ErrorKind::ParseError, "unknown kind '" + kind + "'");
  }();

  ChainFile out_file;
  out_file.states = file.states;
  out_file.rates = result.rates();
  out_file.target = target.mu.weights();
  std::vector<std::string> comments = {
      "mhrev reversiblize kind=" + kind,
      "target=" + target.source,
      std::string("reversible: ") + (is_reversible(result, target.mu, 1e-9) ? "true" : "false"),
      std::string("irreducible: ") + (result.irreducible() ? "true" : "false")};

  if (output.empty()) {
    write_chain_file(out, out_file, comments);
  } else {
    std::ofstream file_out(output);
    if (!file_out) throw Error(ErrorKind::ParseError, "cannot write '" + output + "'");
    write_chain_file(file_out, out_file, comments);
  }
  return 0;
}

int cmd_project(const std::string& input, const std::string& target_flag, int samples,
                std::optional<std::uint64_t> seed_flag, std::ostream& out, std::ostream& err) {
  ChainFile file = load_chain_file(input);
  for (const std::string& w : file.warnings) err << "warning: " << w << "\n";
  Generator q = validate_generator(file.rates, file.states);
  ResolvedTarget target = resolve_target(q, file, target_flag, err);
  std::uint64_t seed = resolve_seed(seed_flag);

  MhPair pair = build_pair(q, target.mu);
  Generator qbar = additive_reversiblization(q, target.mu);

  json j;
  j["closed_form"] = distance_to_reversible(q, target.mu);
  j["d_m1"] = l1_distance(q, pair.m1, target.mu);
  j["d_m2"] = l1_distance(q, pair.m2, target.mu);
  j["d_qbar"] = l1_distance(q, qbar, target.mu);
  j["convex"] = json::array();
  for (double alpha : {0.0, 0.25, 0.5, 0.75, 1.0})
    j["convex"].push_back(
        {{"alpha", alpha},
         {"d", l1_distance(q, convex_combination(pair, alpha), target.mu)}});

  oracles::ProjectionProbe probe = oracles::projection_oracle(q, target.mu, samples, seed);
  j["oracle"] = {{"samples", probe.samples},
                 {"min_sampled", probe.min_sampled_distance},
                 {"verdict", probe.verdict}};

  if (q.size() == 2) {
    // (a,b) plane of the two-state family, plus the reversible line
    // b = (mu0/mu1) a for plotting.
    j["two_state"] = {{"q", {q.rate(0, 1), q.rate(1, 0)}},
                      {"m1", {pair.m1.rate(0, 1), pair.m1.rate(1, 0)}},
                      {"m2", {pair.m2.rate(0, 1), pair.m2.rate(1, 0)}},
                      {"qbar", {qbar.rate(0, 1), qbar.rate(1, 0)}},
                      {"line_slope_b_over_a", target.mu(0) / target.mu(1)}};
  }
  out << j.dump(2) << "\n";
  return probe.verdict ? 0 : 1;
}

int cmd_mis(const std::string& proposal_spec, const std::string& target_spec, std::ostream& out,
            std::ostream& err) {
  ProbabilityDistribution p =
      normalize_target(parse_vector_spec(proposal_spec), err, "proposal");
  ProbabilityDistribution mu = normalize_target(parse_vector_spec(target_spec), err, "target");
  MisInstance inst = build_mis(p, mu);
  MisSpectrum spectrum = mis_spectrum(inst);

  json j;
  j["m"] = p.size();
  j["weights"] = vector_json(inst.weights);
  j["order"] = inst.order;
  j["already_sorted"] = inst.already_sorted;
  j["gamma"] = vector_json(spectrum.gamma);
  j["beta"] = vector_json(spectrum.beta);
  j["m1_eigenvalues"] = vector_json(spectrum.m1_eigenvalues);
  j["m2_eigenvalues"] = vector_json(spectrum.m2_eigenvalues);
  j["m1_eigenvectors"] = matrix_json(spectrum.m1_eigenvectors);
  j["m2_eigenvectors"] = matrix_json(spectrum.m2_eigenvectors);

  int code = 0;
  try {
    MisValidation validation = mis_cross_validate(inst);
    j["cross_validation"] = {{"pass", true},
                             {"max_eigenvalue_gap", validation.max_eigenvalue_gap},
                             {"max_residual", validation.max_residual}};
  } catch (const Error& e) {
    j["cross_validation"] = {{"pass", false}, {"detail", e.what()}};
    code = 2;
  }
  out << j.dump(2) << "\n";
  return code;
}

int cmd_bd_sst(const std::string& input, const std::string& target_flag,
               const std::string& alpha_grid, std::ostream& out, std::ostream& err) {
  ChainFile file = load_chain_file(input);
  for (const std::string& w : file.warnings) err << "warning: " << w << "\n";
  Generator q = validate_generator(file.rates, file.states);
  ResolvedTarget target = resolve_target(q, file, target_flag, err);

  SstDistribution sst = bd_sst(q, target.mu);
  json j;
  j["rates"] = vector_json(sst.rates);
  j["mean"] = sst_mean(sst);
  j["variance"] = sst_variance(sst);
  j["laplace"] = json::array();
  for (double alpha : parse_grid(alpha_grid))
    j["laplace"].push_back({{"alpha", alpha}, {"value", sst_laplace(sst, alpha)}});

  // Separation started at 0 must match the convolution survival function.
  double horizon = sst_mean(sst);
  double worst_gap = 0.0;
  json grid = json::array();
  for (int k = 1; k <= 10; ++k) {
    double t = 0.2 * static_cast<double>(k) * horizon;
    double sep = separation_distance(q, target.mu, 0, t);
    double survival = sst_survival(sst, t);
    worst_gap = std::max(worst_gap, std::abs(sep - survival));
    grid.push_back({{"t", t}, {"separation", sep}, {"survival", survival}});
  }
  bool pass = worst_gap <= 1e-8;
  j["separation_check"] = {{"pass", pass}, {"max_abs_gap", worst_gap}, {"grid", grid}};
  out << j.dump(2) << "\n";
  return pass ? 0 : 2;
}

int cmd_suite(const std::string& dir, CompareOptions base, std::ostream& out,
              std::ostream& err) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir))
    throw Error(ErrorKind::ParseError, "'" + dir + "' is not a directory");
  std::vector<std::string> paths;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".chain")
      paths.push_back(entry.path().string());
  std::sort(paths.begin(), paths.end());
  if (paths.empty()) throw Error(ErrorKind::ParseError, "no .chain files in '" + dir + "'");

  json j;
  j["files"] = json::array();
  bool any_violated = false;
  bool any_error = false;
  for (const std::string& path : paths) {
    CompareOptions opt = base;
    opt.input = path;
    json entry;
    entry["path"] = path;
    try {
      ComparisonReport report = run_compare(opt, err);
      int violated = 0;
      for (const Verdict& v : report.verdicts)
        if (v.status == "violated") ++violated;
      entry["ok"] = report.ok;
      entry["violated"] = violated;
      entry["mu_is_stationary"] = report.mu_is_stationary;
      any_violated = any_violated || !report.ok;
    } catch (const Error& e) {
      entry["ok"] = false;
      entry["error"] = e.what();
      any_error = true;
    }
    j["files"].push_back(std::move(entry));
  }
  j["ok"] = !any_violated && !any_error;
  out << j.dump(2) << "\n";
  return any_error ? 2 : any_violated ? 1 : 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Metropolis-Hastings reversiblizations of finite-state Markov generators"};
  app.name("mhrev");
  app.require_subcommand(1);

  std::string input, target_flag, output, kind = "m1", format = "json";
  std::string lambda_grid = "0.1,1,10", alpha_grid = "0.1,1,10";
  std::string f_list_path, nu_list_path, set_pairs, a_list, commute_pairs;
  std::string proposal_spec, target_spec, suite_dir;
  double epsilon = 0.25, tol_identity = kIdentityTol, tol_order = kOrderTol;
  int samples = 1000;
  std::optional<std::uint64_t> seed;

  auto add_target = [&](CLI::App* cmd) {
    cmd->add_option("--target", target_flag, "target distribution (inline '0.5,0.5' or file)");
  };
  auto add_tols = [&](CLI::App* cmd) {
    cmd->add_option("--tol-identity", tol_identity, "tolerance for algebraic identities");
    cmd->add_option("--tol-order", tol_order, "tolerance for order relations");
  };

  CLI::App* info = app.add_subcommand("info", "validate a chain file and describe it");
  info->add_option("input", input, "chain file")->required();
  add_target(info);

  std::optional<double> alpha_flag;
  CLI::App* rev = app.add_subcommand("reversiblize", "construct M1/M2/additive/convex kernels");
  rev->add_option("input", input, "chain file")->required();
  rev->add_option("--kind", kind, "m1 | m2 | additive | convex | convex:ALPHA");
  rev->add_option("--alpha", alpha_flag, "convex weight on M1 (implies --kind convex)");
  rev->add_option("-o,--output", output, "output file (stdout when omitted)");
  add_target(rev);

  CLI::App* compare = app.add_subcommand("compare", "full functional comparison report");
  compare->add_option("input", input, "chain file")->required();
  add_target(compare);
  compare->add_option("--format", format, "json | csv");
  compare->add_option("--lambda-grid", lambda_grid, "Laplace transform grid");
  compare->add_option("--epsilon", epsilon, "total-variation mixing threshold");
  compare->add_option("--seed", seed, "seed for generated inputs (env MHREV_SEED fallback)");
  compare->add_option("--f-list", f_list_path, "file of observable rows");
  compare->add_option("--nu-list", nu_list_path, "file of measure rows");
  compare->add_option("--set-pairs", set_pairs, "capacity pairs, e.g. '0|1;0,1|2'");
  compare->add_option("--a-list", a_list, "hitting sets, e.g. '1;0,2'");
  compare->add_option("--commute-pairs", commute_pairs, "state pairs, e.g. '0,1;1,2'");
  add_tols(compare);

  CLI::App* project = app.add_subcommand("project", "l1 projection distances and oracle check");
  project->add_option("input", input, "chain file")->required();
  add_target(project);
  project->add_option("--samples", samples, "sampled reversible generators")
      ->check(CLI::PositiveNumber);
  project->add_option("--seed", seed, "oracle seed (env MHREV_SEED fallback)");

  CLI::App* mis = app.add_subcommand("mis", "closed-form independent-sampling spectrum");
  mis->add_option("proposal", proposal_spec, "proposal vector (inline or file)")->required();
  mis->add_option("target", target_spec, "target vector (inline or file)")->required();

  CLI::App* bdsst = app.add_subcommand("bd-sst", "birth-death fastest strong stationary time");
  bdsst->add_option("input", input, "chain file")->required();
  add_target(bdsst);
  bdsst->add_option("--alpha-grid", alpha_grid, "Laplace transform grid");

  CLI::App* suite = app.add_subcommand("suite", "run compare over a directory of .chain files");
  suite->add_option("dir", suite_dir, "directory with .chain files")->required();
  add_target(suite);
  suite->add_option("--seed", seed, "seed for generated inputs");
  suite->add_option("--epsilon", epsilon, "total-variation mixing threshold");
  add_tols(suite);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (info->parsed()) return cmd_info(input, target_flag, out, err);
    if (rev->parsed())
      return cmd_reversiblize(input, kind, alpha_flag, target_flag, output, out, err);
    if (compare->parsed()) {
      CompareOptions opt;
      opt.input = input;
      opt.target_flag = target_flag;
      opt.format = format;
      opt.lambda_grid = lambda_grid;
      opt.f_list_path = f_list_path;
      opt.nu_list_path = nu_list_path;
      opt.set_pairs = set_pairs;
      opt.a_list = a_list;
      opt.commute_pairs = commute_pairs;
      opt.epsilon = epsilon;
      opt.tol_identity = tol_identity;
      opt.tol_order = tol_order;
      opt.seed = seed;
      ComparisonReport report = run_compare(opt, err);
      out << (format == "csv" ? report_to_csv(report) : report_to_json(report) + "\n");
      return report.ok ? 0 : 1;
    }
    if (project->parsed()) return cmd_project(input, target_flag, samples, seed, out, err);
    if (mis->parsed()) return cmd_mis(proposal_spec, target_spec, out, err);
    if (bdsst->parsed()) return cmd_bd_sst(input, target_flag, alpha_grid, out, err);
    if (suite->parsed()) {
      CompareOptions opt;
      opt.target_flag = target_flag;
      opt.epsilon = epsilon;
      opt.tol_identity = tol_identity;
      opt.tol_order = tol_order;
      opt.seed = seed;
      return cmd_suite(suite_dir, opt, out, err);
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

}  // namespace mhrev
