#ifndef MHREV_TYPES_HPP
#define MHREV_TYPES_HPP

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace mhrev {

// Default tolerances: algebraic identities are checked at kIdentityTol,
// order relations (inequalities backed by limit theorems) at kOrderTol.
// Both are relative to Generator::scale().
inline constexpr double kIdentityTol = 1e-12;
inline constexpr double kOrderTol = 1e-9;

enum class ErrorKind {
  EmptyMatrix,
  NegativeOffDiagonal,
  RowSumViolation,
  DimensionMismatch,
  NotIrreducible,
  ZeroTargetMass,
  AlphaOutOfRange,
  NotReversible,
  ZeroGap,
  UnreachableTarget,
  NonPositiveLambda,
  SameState,
  OverlappingSets,
  InvalidTargetSet,
  NegativeTime,
  EpsilonOutOfRange,
  NotBirthDeath,
  NonPositiveAlpha,
  NotMeanZero,
  NotStationary,
  SingularSystem,
  DegenerateSupport,
  ZeroMass,
  ValidationFailure,
  ParseError,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

/// Conservative rate matrix of a continuous-time Markov chain on a finite
/// state space: non-negative off-diagonal rates, rows summing to zero.
/// Immutable after construction; reducible matrices are accepted and flagged.
class Generator {
 public:
  /// Validates an explicit rate matrix (off-diagonals >= 0, row sums ~ 0).
  static Generator validated(Eigen::MatrixXd rates, std::vector<std::string> labels = {});

  /// Builds a generator from off-diagonal rates only; the diagonal is
  /// overwritten with the negated row sums so the result is exactly
  /// conservative. Off-diagonals must be >= 0.
  static Generator from_off_diagonal(Eigen::MatrixXd rates, std::vector<std::string> labels = {});

  Eigen::Index size() const { return rates_.rows(); }
  const Eigen::MatrixXd& rates() const { return rates_; }
  double rate(Eigen::Index x, Eigen::Index y) const { return rates_(x, y); }
  const std::vector<std::string>& labels() const { return labels_; }

  /// Strong connectivity of the digraph with an edge x->y iff rate(x,y) > 0.
  bool irreducible() const { return irreducible_; }

  /// max(1, largest off-diagonal rate); the reference magnitude for all
  /// relative tolerance checks.
  double scale() const { return scale_; }

 private:
  Generator(Eigen::MatrixXd rates, std::vector<std::string> labels);

  Eigen::MatrixXd rates_;
  std::vector<std::string> labels_;
  double scale_ = 1.0;
  bool irreducible_ = false;
};

/// Probability vector on the state space. Entries are non-negative and sum
/// to one; strict positivity is enforced only where an operation needs it
/// (targets of MH constructions, time reversal).
class ProbabilityDistribution {
 public:
  static ProbabilityDistribution validated(Eigen::VectorXd weights);
  static ProbabilityDistribution uniform(Eigen::Index n);
  static ProbabilityDistribution point_mass(Eigen::Index n, Eigen::Index x);

  Eigen::Index size() const { return weights_.size(); }
  const Eigen::VectorXd& weights() const { return weights_; }
  double operator()(Eigen::Index x) const { return weights_(x); }

  bool strictly_positive() const;
  /// Throws ZeroTargetMass unless every entry is strictly positive.
  void require_positive(const char* context) const;

 private:
  explicit ProbabilityDistribution(Eigen::VectorXd weights) : weights_(std::move(weights)) {}

  Eigen::VectorXd weights_;
};

/// Real-valued function on states (finite entries).
class ObservableFunction {
 public:
  explicit ObservableFunction(Eigen::VectorXd values);
  static ObservableFunction constant(Eigen::Index n, double value);

  Eigen::Index size() const { return values_.size(); }
  const Eigen::VectorXd& values() const { return values_; }
  double operator()(Eigen::Index x) const { return values_(x); }

 private:
  Eigen::VectorXd values_;
};

}  // namespace mhrev

#endif
