#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace lstreg {

/// Precondition breach: bad dimensions, empty inputs, out-of-range parameters.
class ContractViolation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Invalid user-supplied configuration (scenario files, rates, covariances).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Residual scale collapsed to zero without the majority-identical rule firing.
/// Carries the offending coefficient vector when raised from inside a fit.
class DegenerateScaleError : public std::runtime_error {
 public:
  explicit DegenerateScaleError(const std::string& what) : std::runtime_error(what) {}
  DegenerateScaleError(const std::string& what, Eigen::VectorXd beta)
      : std::runtime_error(what), beta_(std::move(beta)) {}

  const std::optional<Eigen::VectorXd>& beta() const { return beta_; }

 private:
  std::optional<Eigen::VectorXd> beta_;
};

/// No row pair with differing predictors exists (all x rows identical).
class UnsampleableDesignError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Every candidate in every restart was skipped by the tie rule.
class AllCandidatesSkippedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Random start subsets stayed rank deficient after bounded retries.
class DegenerateDesignError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input file; row/column are 1-based when known.
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& what, int row = 0, int column = 0)
      : std::runtime_error(what), row_(row), column_(column) {}

  int row() const { return row_; }
  int column() const { return column_; }

 private:
  int row_;
  int column_;
};

/// Too many per-replication method failures in a simulation study.
class StudyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace lstreg
