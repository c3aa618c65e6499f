#include "lstreg/ols.hpp"

#include <Eigen/SVD>

namespace lstreg {

namespace {

constexpr double kRankTolerance = 1e-10;

LsSolution solve(const Eigen::MatrixXd& design, const Eigen::VectorXd& response) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(design, Eigen::ComputeThinU | Eigen::ComputeThinV);
  svd.setThreshold(kRankTolerance);
  LsSolution solution;
  solution.beta = svd.solve(response);
  solution.rank_deficient = svd.rank() < design.cols();
  solution.ss = (response - design * solution.beta).squaredNorm();
  return solution;
}

}  // namespace

LsSolution ls_fit(const Dataset& data) { return solve(data.design(), data.response()); }

LsSolution ls_fit(const Dataset& data, std::span<const int> subset) {
  if (subset.empty()) throw ContractViolation("ls_fit: empty subset");
  const int n = data.n();
  Eigen::MatrixXd design(subset.size(), data.p());
  Eigen::VectorXd response(subset.size());
  for (std::size_t k = 0; k < subset.size(); ++k) {
    const int row = subset[k];
    if (row < 0 || row >= n) throw ContractViolation("ls_fit: subset index out of range");
    design.row(k) = data.design().row(row);
    response[k] = data.response()[row];
  }
  return solve(design, response);
}

}  // namespace lstreg
