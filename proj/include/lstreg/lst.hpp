#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "lstreg/dataset.hpp"
#include "lstreg/rng.hpp"

namespace lstreg {

/// Tuning for the depth-trimmed least-squares search.
struct LstConfig {
  double alpha = 2.5;      // outlyingness cutoff, >= 1
  double delta = 0.5;      // perturbation applied to each candidate coordinate
  int restarts = 1;        // pair redraws; 1 <= restarts <= n(n-1)/2
  std::uint64_t seed = 0;
  bool iterate_refit = false;  // optional refit-to-fixpoint variant, off by default
};

/// Rows whose residual outlyingness at `beta` is at most `alpha`.
/// Never empty: at least half the residuals have outlyingness <= 1.
/// Throws ContractViolation for alpha < 1; propagates DegenerateScaleError.
std::vector<int> index_set(const Dataset& data, const CoefficientVector& beta, double alpha);

/// Sum of squared residuals over index_set(data, beta, alpha).
double objective_q(const Dataset& data, const CoefficientVector& beta, double alpha);

/// The 2 + 4p candidate coefficient vectors built from one sampled row pair:
/// two base vectors that equalize the pair's residuals, plus +/-delta
/// perturbations of every coordinate of each.
struct CandidateSet {
  std::vector<CoefficientVector> betas;
  int row_i = -1;      // sampled pair
  int row_j = -1;
  int component = -1;  // 0-based predictor column whose values differ
};

/// Samples row pairs uniformly without replacement until one has a differing
/// predictor component (the smallest such column is used), then builds the
/// candidate set. Throws UnsampleableDesignError when every pair of predictor
/// rows is identical, ContractViolation for n <= 2 or delta <= 0.
CandidateSet candidate_betas(const Dataset& data, Rng& rng, double delta);

/// Depth-trimmed least squares: for each restart, draw a candidate set; for
/// each candidate, trim by outlyingness and refit least squares on the
/// retained rows, skipping candidates whose sorted retained outlyingness
/// values contain ties; keep the refit with the smallest subset sum of
/// squares across all candidates and restarts.
/// Throws AllCandidatesSkippedError when no candidate anywhere was evaluated.
TrimmedFit lst_fit(const Dataset& data, const LstConfig& config);

}  // namespace lstreg
