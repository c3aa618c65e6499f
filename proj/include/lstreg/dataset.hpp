#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>

#include "lstreg/errors.hpp"

namespace lstreg {

/// Candidate or fitted coefficient vector of length p; slot 0 is the intercept.
using CoefficientVector = Eigen::VectorXd;

/// Regression sample of n rows: p-1 predictors plus a scalar response per row.
/// Immutable after construction; all values are validated finite up front so
/// the fitting loops stay branch-free.
class Dataset {
 public:
  /// predictors: n x (p-1), response: n. Throws ContractViolation on empty
  /// data, fewer than one predictor column, or any non-finite value.
  Dataset(const Eigen::MatrixXd& predictors, Eigen::VectorXd response);

  int n() const { return static_cast<int>(design_.rows()); }
  int p() const { return static_cast<int>(design_.cols()); }

  /// n x p design matrix [1 | X].
  const Eigen::MatrixXd& design() const { return design_; }
  const Eigen::VectorXd& response() const { return response_; }

  /// Predictor block without the intercept column, n x (p-1).
  Eigen::Block<const Eigen::MatrixXd, Eigen::Dynamic, Eigen::Dynamic, true> predictors() const {
    return design_.rightCols(design_.cols() - 1);
  }

 private:
  Eigen::MatrixXd design_;
  Eigen::VectorXd response_;
};

using ResidualVector = Eigen::VectorXd;

/// r_i = y_i - (1, x_i^T) beta. Throws ContractViolation on length mismatch.
ResidualVector residuals(const Dataset& data, const CoefficientVector& beta);

enum class Method { LS, LST, LTS };

std::string to_string(Method method);
Method parse_method(const std::string& name);

/// A fitted coefficient vector together with the rows it was fitted on.
/// `objective` is the sum of squared residuals of `beta` over `retained`.
struct TrimmedFit {
  CoefficientVector beta;
  std::vector<int> retained;  // 0-based row indices, ascending
  double objective = 0.0;
  Method method = Method::LS;
};

}  // namespace lstreg
