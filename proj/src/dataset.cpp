#include "lstreg/dataset.hpp"

#include <utility>

namespace lstreg {

Dataset::Dataset(const Eigen::MatrixXd& predictors, Eigen::VectorXd response) {
  const Eigen::Index n = predictors.rows();
  if (n < 1) throw ContractViolation("Dataset: need at least one observation");
  if (predictors.cols() < 1)
    throw ContractViolation("Dataset: need at least one predictor column (p >= 2)");
  if (response.size() != n)
    throw ContractViolation("Dataset: predictor rows and response length differ");
  if (!predictors.allFinite() || !response.allFinite())
    throw ContractViolation("Dataset: non-finite value in predictors or response");

  design_.resize(n, predictors.cols() + 1);
  design_.col(0).setOnes();
  design_.rightCols(predictors.cols()) = predictors;
  response_ = std::move(response);
}

ResidualVector residuals(const Dataset& data, const CoefficientVector& beta) {
  if (beta.size() != data.p())
    throw ContractViolation("residuals: coefficient length " + std::to_string(beta.size()) +
                            " does not match model dimension " + std::to_string(data.p()));
  return data.response() - data.design() * beta;
}

std::string to_string(Method method) {
  switch (method) {
    case Method::LS:
      return "LS";
    case Method::LST:
      return "LST";
    case Method::LTS:
      return "LTS";
  }
  return "?";
}

Method parse_method(const std::string& name) {
  if (name == "LS" || name == "ls") return Method::LS;
  if (name == "LST" || name == "lst") return Method::LST;
  if (name == "LTS" || name == "lts") return Method::LTS;
  throw ConfigError("unknown method '" + name + "' (expected LS, LST, or LTS)");
}

}  // namespace lstreg
