#pragma once

#include <Eigen/Core>

#include "lstreg/errors.hpp"

namespace lstreg {

/// Each entry is finite and non-negative.
using OutlyingnessVector = Eigen::VectorXd;

/// Sample median. Even length averages the two central order statistics.
/// Throws ContractViolation on empty input.
double median(const Eigen::VectorXd& values);

/// True when at least floor((n+1)/2) entries share one exact value.
bool majority_identical(const Eigen::VectorXd& values);

/// Median absolute deviation about the median, without any consistency
/// factor. When a majority of entries are pairwise identical the result is
/// defined to be 1 (those entries sit at the deepest position, so the usual
/// formula would degenerate). Throws ContractViolation on empty input.
double mad(const Eigen::VectorXd& values);

/// o_i = |v_i - median(v)| / mad(v). Throws DegenerateScaleError if the scale
/// is zero and the majority-identical rule did not fire.
OutlyingnessVector outlyingness(const Eigen::VectorXd& values);

}  // namespace lstreg
