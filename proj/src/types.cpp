#include "mhrev/types.hpp"

#include <cmath>
#include <utility>

namespace mhrev {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::EmptyMatrix: return "EmptyMatrix";
    case ErrorKind::NegativeOffDiagonal: return "NegativeOffDiagonal";
    case ErrorKind::RowSumViolation: return "RowSumViolation";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::NotIrreducible: return "NotIrreducible";
    case ErrorKind::ZeroTargetMass: return "ZeroTargetMass";
    case ErrorKind::AlphaOutOfRange: return "AlphaOutOfRange";
    case ErrorKind::NotReversible: return "NotReversible";
    case ErrorKind::ZeroGap: return "ZeroGap";
    case ErrorKind::UnreachableTarget: return "UnreachableTarget";
    case ErrorKind::NonPositiveLambda: return "NonPositiveLambda";
    case ErrorKind::SameState: return "SameState";
    case ErrorKind::OverlappingSets: return "OverlappingSets";
    case ErrorKind::InvalidTargetSet: return "InvalidTargetSet";
    case ErrorKind::NegativeTime: return "NegativeTime";
    case ErrorKind::EpsilonOutOfRange: return "EpsilonOutOfRange";
    case ErrorKind::NotBirthDeath: return "NotBirthDeath";
    case ErrorKind::NonPositiveAlpha: return "NonPositiveAlpha";
    case ErrorKind::NotMeanZero: return "NotMeanZero";
    case ErrorKind::NotStationary: return "NotStationary";
    case ErrorKind::SingularSystem: return "SingularSystem";
    case ErrorKind::DegenerateSupport: return "DegenerateSupport";
    case ErrorKind::ZeroMass: return "ZeroMass";
    case ErrorKind::ValidationFailure: return "ValidationFailure";
    case ErrorKind::ParseError: return "ParseError";
  }
  return "Error";
}

namespace {

double off_diagonal_scale(const Eigen::MatrixXd& rates) {
  double largest = 0.0;
  for (Eigen::Index x = 0; x < rates.rows(); ++x)
    for (Eigen::Index y = 0; y < rates.cols(); ++y)
      if (x != y) largest = std::max(largest, rates(x, y));
  return std::max(1.0, largest);
}

// Strong connectivity of the digraph with edges where the rate is
// positive: forward reachability from state 0 and reachability in the
// transposed graph must both cover everything.
bool strongly_connected(const Eigen::MatrixXd& rates) {
  const Eigen::Index n = rates.rows();
  auto covers_all = [&](bool transpose) {
    std::vector<char> seen(static_cast<size_t>(n), 0);
    std::vector<Eigen::Index> stack{0};
    seen[0] = 1;
    Eigen::Index count = 1;
    while (!stack.empty()) {
      Eigen::Index x = stack.back();
      stack.pop_back();
      for (Eigen::Index y = 0; y < n; ++y) {
        if (seen[static_cast<size_t>(y)] || y == x) continue;
        double r = transpose ? rates(y, x) : rates(x, y);
        if (r > 0.0) {
          seen[static_cast<size_t>(y)] = 1;
          ++count;
          stack.push_back(y);
        }
      }
    }
    return count == n;
  };
  return covers_all(false) && covers_all(true);
}

}  // namespace

Generator::Generator(Eigen::MatrixXd rates, std::vector<std::string> labels)
    : rates_(std::move(rates)), labels_(std::move(labels)) {
  scale_ = off_diagonal_scale(rates_);
  irreducible_ = strongly_connected(rates_);
}

Generator Generator::validated(Eigen::MatrixXd rates, std::vector<std::string> labels) {
  const Eigen::Index n = rates.rows();
  if (n == 0) throw Error(ErrorKind::EmptyMatrix, "generator has no states");
  if (rates.cols() != n)
    throw Error(ErrorKind::DimensionMismatch,
                "rate matrix must be square, got " + std::to_string(n) + "x" +
                    std::to_string(rates.cols()));
  if (!labels.empty() && static_cast<Eigen::Index>(labels.size()) != n)
    throw Error(ErrorKind::DimensionMismatch, "label count does not match state count");
  if (!rates.allFinite())
    throw Error(ErrorKind::ValidationFailure, "rate matrix has non-finite entries");

  for (Eigen::Index x = 0; x < n; ++x)
    for (Eigen::Index y = 0; y < n; ++y)
      if (x != y && rates(x, y) < 0.0)
        throw Error(ErrorKind::NegativeOffDiagonal,
                    "rate(" + std::to_string(x) + "," + std::to_string(y) + ") = " +
                        std::to_string(rates(x, y)));

  const double scale = off_diagonal_scale(rates);
  for (Eigen::Index x = 0; x < n; ++x) {
    double sum = rates.row(x).sum();
    if (std::abs(sum) > 1e-9 * scale)
      throw Error(ErrorKind::RowSumViolation,
                  "row " + std::to_string(x) + " sums to " + std::to_string(sum));
  }
  return Generator(std::move(rates), std::move(labels));
}

Generator Generator::from_off_diagonal(Eigen::MatrixXd rates, std::vector<std::string> labels) {
  const Eigen::Index n = rates.rows();
  if (n == 0) throw Error(ErrorKind::EmptyMatrix, "generator has no states");
  if (rates.cols() != n)
    throw Error(ErrorKind::DimensionMismatch, "rate matrix must be square");
  for (Eigen::Index x = 0; x < n; ++x) {
    rates(x, x) = 0.0;
    double sum = 0.0;
    for (Eigen::Index y = 0; y < n; ++y) {
      if (y == x) continue;
      if (rates(x, y) < 0.0)
        throw Error(ErrorKind::NegativeOffDiagonal,
                    "rate(" + std::to_string(x) + "," + std::to_string(y) + ") = " +
                        std::to_string(rates(x, y)));
      sum += rates(x, y);
    }
    rates(x, x) = -sum;
  }
  if (!rates.allFinite())
    throw Error(ErrorKind::ValidationFailure, "rate matrix has non-finite entries");
  return Generator(std::move(rates), std::move(labels));
}

ProbabilityDistribution ProbabilityDistribution::validated(Eigen::VectorXd weights) {
  const Eigen::Index n = weights.size();
  if (n == 0) throw Error(ErrorKind::EmptyMatrix, "distribution has no states");
  if (!weights.allFinite())
    throw Error(ErrorKind::ValidationFailure, "distribution has non-finite entries");
  for (Eigen::Index x = 0; x < n; ++x)
    if (weights(x) < 0.0)
      throw Error(ErrorKind::ZeroMass,
                  "negative mass at state " + std::to_string(x));
  double sum = weights.sum();
  if (std::abs(sum - 1.0) > 1e-9)
    throw Error(ErrorKind::ValidationFailure,
                "weights sum to " + std::to_string(sum) + ", expected 1");
  return ProbabilityDistribution(std::move(weights));
}

ProbabilityDistribution ProbabilityDistribution::uniform(Eigen::Index n) {
  if (n <= 0) throw Error(ErrorKind::EmptyMatrix, "distribution has no states");
  return ProbabilityDistribution(Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n)));
}

ProbabilityDistribution ProbabilityDistribution::point_mass(Eigen::Index n, Eigen::Index x) {
  if (n <= 0) throw Error(ErrorKind::EmptyMatrix, "distribution has no states");
  if (x < 0 || x >= n) throw Error(ErrorKind::DimensionMismatch, "point mass out of range");
  Eigen::VectorXd w = Eigen::VectorXd::Zero(n);
  w(x) = 1.0;
  return ProbabilityDistribution(std::move(w));
}

bool ProbabilityDistribution::strictly_positive() const {
  return (weights_.array() > 0.0).all();
}

void ProbabilityDistribution::require_positive(const char* context) const {
  if (!strictly_positive())
    throw Error(ErrorKind::ZeroTargetMass, std::string(context) + " requires a strictly positive target");
}

ObservableFunction::ObservableFunction(Eigen::VectorXd values) : values_(std::move(values)) {
  if (values_.size() == 0) throw Error(ErrorKind::EmptyMatrix, "observable has no states");
  if (!values_.allFinite())
    throw Error(ErrorKind::ValidationFailure, "observable has non-finite entries");
}

ObservableFunction ObservableFunction::constant(Eigen::Index n, double value) {
  return ObservableFunction(Eigen::VectorXd::Constant(n, value));
}

}  // namespace mhrev
