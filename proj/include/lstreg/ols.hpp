#pragma once

#include <span>
#include <vector>

#include <Eigen/Core>

#include "lstreg/dataset.hpp"

namespace lstreg {

/// Exact least-squares solution on a row subset.
struct LsSolution {
  CoefficientVector beta;
  double ss = 0.0;            // sum of squared residuals over the fitted rows
  bool rank_deficient = false;
};

/// Minimizes the sum of squared residuals over all rows.
LsSolution ls_fit(const Dataset& data);

/// Minimizes the sum of squared residuals over `subset` (0-based row indices).
/// Solved by singular value decomposition; singular values below
/// 1e-10 * (largest singular value) are treated as zero, in which case the
/// minimum-norm solution is returned and rank_deficient is set.
/// Throws ContractViolation on an empty subset or an index out of range.
LsSolution ls_fit(const Dataset& data, std::span<const int> subset);

}  // namespace lstreg
