#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "lstreg/dataset.hpp"

namespace lstreg {

/// Tuning for the trimmed-squares concentration search.
struct LtsConfig {
  int h = 0;          // coverage; 0 selects floor((n+p+1)/2)
  int starts = 500;   // random p-subset starts
  int csteps = 10;    // concentration steps per start
  std::uint64_t seed = 0;
};

/// Maximal-breakdown default coverage, floor((n+p+1)/2).
int default_coverage(int n, int p);

/// Sum of the h smallest squared residuals at beta.
/// Throws ContractViolation unless ceil(n/2) <= h <= n.
double lts_objective(const Dataset& data, const CoefficientVector& beta, int h);

/// One concentration step: retain the h rows with the smallest squared
/// residuals at `beta` (ties broken by row index), then refit least squares
/// on them. Never increases the trimmed objective.
struct ConcentrationStep {
  CoefficientVector beta;
  std::vector<int> subset;  // ascending row indices
  double subset_ss = 0.0;
};
ConcentrationStep concentration_step(const Dataset& data, const CoefficientVector& beta, int h);

/// Multi-start trimmed least squares: each start fits a random p-subset and
/// concentrates until the retained set stabilizes or csteps is exhausted; the
/// best final fit by lts_objective wins (ties by earliest start).
/// Throws DegenerateDesignError when rank-deficient start subsets persist
/// through bounded redraws, ContractViolation unless n > p.
TrimmedFit lts_fit(const Dataset& data, const LtsConfig& config);

}  // namespace lstreg
