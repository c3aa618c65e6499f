#include "lstreg/lst.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <unordered_map>

#include "lstreg/ols.hpp"
#include "lstreg/robust_stats.hpp"

namespace lstreg {

namespace {

void check_alpha(double alpha) {
  if (!(alpha >= 1.0)) throw ContractViolation("alpha must be >= 1");
}

std::vector<int> index_set_from(const Eigen::VectorXd& outly, double alpha) {
  std::vector<int> retained;
  retained.reserve(outly.size());
  for (Eigen::Index i = 0; i < outly.size(); ++i)
    if (outly[i] <= alpha) retained.push_back(static_cast<int>(i));
  return retained;
}

// Draws linear pair indices from {0, ..., total-1} uniformly without
// replacement, storing only the displaced entries of the virtual pool.
class PairSampler {
 public:
  explicit PairSampler(std::int64_t total) : total_(total) {}

  bool exhausted() const { return next_ >= total_; }

  std::int64_t draw(Rng& rng) {
    const std::int64_t j =
        next_ + static_cast<std::int64_t>(rng.uniform_below(
                    static_cast<std::uint64_t>(total_ - next_)));
    const std::int64_t value = lookup(j);
    displaced_[j] = lookup(next_);
    ++next_;
    return value;
  }

 private:
  std::int64_t lookup(std::int64_t index) const {
    auto it = displaced_.find(index);
    return it == displaced_.end() ? index : it->second;
  }

  std::int64_t total_;
  std::int64_t next_ = 0;
  std::unordered_map<std::int64_t, std::int64_t> displaced_;
};

// Linear index -> (i, j) with 0 <= i < j < n, ordered by i then j.
std::pair<int, int> decode_pair(std::int64_t linear, int n) {
  int i = 0;
  std::int64_t remaining = linear;
  while (remaining >= n - 1 - i) {
    remaining -= n - 1 - i;
    ++i;
  }
  return {i, i + 1 + static_cast<int>(remaining)};
}

}  // namespace

std::vector<int> index_set(const Dataset& data, const CoefficientVector& beta, double alpha) {
  check_alpha(alpha);
  Eigen::VectorXd outly;
  try {
    outly = outlyingness(residuals(data, beta));
  } catch (const DegenerateScaleError& err) {
    throw DegenerateScaleError(err.what(), beta);
  }
  return index_set_from(outly, alpha);
}

double objective_q(const Dataset& data, const CoefficientVector& beta, double alpha) {
  check_alpha(alpha);
  const ResidualVector r = residuals(data, beta);
  Eigen::VectorXd outly;
  try {
    outly = outlyingness(r);
  } catch (const DegenerateScaleError& err) {
    throw DegenerateScaleError(err.what(), beta);
  }
  double total = 0.0;
  for (Eigen::Index i = 0; i < r.size(); ++i)
    if (outly[i] <= alpha) total += r[i] * r[i];
  return total;
}

CandidateSet candidate_betas(const Dataset& data, Rng& rng, double delta) {
  if (data.n() <= 2) throw ContractViolation("candidate_betas: need n > 2");
  if (!(delta > 0.0)) throw ContractViolation("candidate_betas: delta must be > 0");

  const int n = data.n();
  const int p = data.p();
  const auto x = data.predictors();

  // Hunt for a pair with a differing predictor component, uniformly without
  // replacement over all n(n-1)/2 row pairs.
  PairSampler sampler(static_cast<std::int64_t>(n) * (n - 1) / 2);
  int row_i = -1;
  int row_j = -1;
  int component = -1;
  while (!sampler.exhausted()) {
    const auto [i, j] = decode_pair(sampler.draw(rng), n);
    for (int k = 0; k < p - 1; ++k) {
      if (x(i, k) != x(j, k)) {
        row_i = i;
        row_j = j;
        component = k;
        break;
      }
    }
    if (component >= 0) break;
  }
  if (component < 0)
    throw UnsampleableDesignError("candidate_betas: all predictor rows are identical");

  // Two base vectors equalizing the pair's residuals: slope through the pair
  // on the differing component, intercept 0 and 1.
  const double slope = (data.response()[row_i] - data.response()[row_j]) /
                       (x(row_i, component) - x(row_j, component));
  CandidateSet out;
  out.row_i = row_i;
  out.row_j = row_j;
  out.component = component;
  out.betas.reserve(2 + 4 * p);

  CoefficientVector base0 = CoefficientVector::Zero(p);
  base0[component + 1] = slope;
  CoefficientVector base1 = base0;
  base1[0] = 1.0;
  out.betas.push_back(base0);
  out.betas.push_back(base1);

  for (const CoefficientVector& base : {base0, base1}) {
    for (int l = 0; l < p; ++l) {
      for (const double sign : {1.0, -1.0}) {
        CoefficientVector perturbed = base;
        perturbed[l] += sign * delta;
        out.betas.push_back(perturbed);
      }
    }
  }
  return out;
}

TrimmedFit lst_fit(const Dataset& data, const LstConfig& config) {
  if (data.n() <= 2) throw ContractViolation("lst_fit: need n > 2");
  check_alpha(config.alpha);
  if (!(config.delta > 0.0)) throw ContractViolation("lst_fit: delta must be > 0");
  const std::int64_t max_restarts = static_cast<std::int64_t>(data.n()) * (data.n() - 1) / 2;
  if (config.restarts < 1 || config.restarts > max_restarts)
    throw ContractViolation("lst_fit: restarts must be in [1, n(n-1)/2]");

  Rng rng(config.seed);
  TrimmedFit best;
  double best_ss = std::numeric_limits<double>::infinity();
  bool found = false;
  std::vector<double> retained_outly;

  for (int restart = 0; restart < config.restarts; ++restart) {
    const CandidateSet candidates = candidate_betas(data, rng, config.delta);
    for (const CoefficientVector& candidate : candidates.betas) {
      Eigen::VectorXd outly;
      try {
        outly = outlyingness(residuals(data, candidate));
      } catch (const DegenerateScaleError&) {
        continue;  // no usable scale at this candidate
      }
      std::vector<int> retained = index_set_from(outly, config.alpha);

      // Ties among the retained outlyingness values disqualify the candidate.
      retained_outly.clear();
      for (const int row : retained) retained_outly.push_back(outly[row]);
      std::sort(retained_outly.begin(), retained_outly.end());
      if (std::adjacent_find(retained_outly.begin(), retained_outly.end()) !=
          retained_outly.end())
        continue;

      LsSolution refit = ls_fit(data, retained);

      if (config.iterate_refit) {
        // Re-trim at the refitted coefficients until the retained set repeats.
        for (int pass = 0; pass < data.n(); ++pass) {
          Eigen::VectorXd next_outly;
          try {
            next_outly = outlyingness(residuals(data, refit.beta));
          } catch (const DegenerateScaleError&) {
            break;
          }
          std::vector<int> next = index_set_from(next_outly, config.alpha);
          if (next == retained) break;
          retained = std::move(next);
          refit = ls_fit(data, retained);
        }
      }

      if (refit.ss < best_ss) {
        best_ss = refit.ss;
        best.beta = refit.beta;
        best.retained = std::move(retained);
        best.objective = refit.ss;
        best.method = Method::LST;
        found = true;
      }
    }
  }

  if (!found)
    throw AllCandidatesSkippedError(
        "lst_fit: every candidate was skipped (tied outlyingness or degenerate scale) across " +
        std::to_string(config.restarts) + " restart(s)");
  return best;
}

}  // namespace lstreg
