#include "lstreg/lts.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "lstreg/ols.hpp"
#include "lstreg/rng.hpp"

namespace lstreg {

namespace {

void check_coverage(int h, int n) {
  const int lo = (n + 1) / 2;  // ceil(n/2)
  if (h < lo || h > n)
    throw ContractViolation("coverage h must satisfy ceil(n/2) <= h <= n");
}

// Indices of the h smallest squared residuals, ties broken by row index so the
// retained set is deterministic. Returned ascending.
std::vector<int> smallest_h(const Eigen::VectorXd& r, int h) {
  std::vector<int> order(r.size());
  std::iota(order.begin(), order.end(), 0);
  std::nth_element(order.begin(), order.begin() + (h - 1), order.end(),
                   [&r](int a, int b) {
                     const double ra = r[a] * r[a];
                     const double rb = r[b] * r[b];
                     return ra < rb || (ra == rb && a < b);
                   });
  order.resize(h);
  std::sort(order.begin(), order.end());
  return order;
}

}  // namespace

int default_coverage(int n, int p) { return (n + p + 1) / 2; }

double lts_objective(const Dataset& data, const CoefficientVector& beta, int h) {
  check_coverage(h, data.n());
  const ResidualVector r = residuals(data, beta);
  std::vector<double> squares(r.size());
  for (Eigen::Index i = 0; i < r.size(); ++i) squares[i] = r[i] * r[i];
  // Canonical evaluation: ascending partial sort, then left-to-right sum.
  std::partial_sort(squares.begin(), squares.begin() + h, squares.end());
  double total = 0.0;
  for (int i = 0; i < h; ++i) total += squares[i];
  return total;
}

ConcentrationStep concentration_step(const Dataset& data, const CoefficientVector& beta, int h) {
  check_coverage(h, data.n());
  const ResidualVector r = residuals(data, beta);
  ConcentrationStep step;
  step.subset = smallest_h(r, h);
  LsSolution refit = ls_fit(data, step.subset);
  step.beta = std::move(refit.beta);
  step.subset_ss = refit.ss;
  return step;
}

TrimmedFit lts_fit(const Dataset& data, const LtsConfig& config) {
  const int n = data.n();
  const int p = data.p();
  if (n <= p) throw ContractViolation("lts_fit: need n > p");
  const int h = config.h == 0 ? default_coverage(n, p) : config.h;
  check_coverage(h, n);
  if (config.starts < 1 || config.csteps < 1)
    throw ContractViolation("lts_fit: starts and csteps must be >= 1");

  constexpr int kMaxRedraws = 100;
  Rng rng(config.seed);

  TrimmedFit best;
  best.method = Method::LTS;
  double best_objective = std::numeric_limits<double>::infinity();
  bool found = false;

  for (int start = 0; start < config.starts; ++start) {
    // Elemental start: LS through a random p-subset; redraw while singular.
    CoefficientVector beta;
    bool usable = false;
    for (int attempt = 0; attempt < kMaxRedraws; ++attempt) {
      std::vector<int> rows = rng.sample_without_replacement(n, p);
      std::sort(rows.begin(), rows.end());
      LsSolution elemental = ls_fit(data, rows);
      if (!elemental.rank_deficient) {
        beta = std::move(elemental.beta);
        usable = true;
        break;
      }
    }
    if (!usable)
      throw DegenerateDesignError(
          "lts_fit: could not draw a full-rank start subset after bounded retries");

    std::vector<int> subset;
    for (int step = 0; step < config.csteps; ++step) {
      ConcentrationStep next = concentration_step(data, beta, h);
      beta = std::move(next.beta);
      if (next.subset == subset) break;  // retained set stabilized
      subset = std::move(next.subset);
    }

    // Final retained set and objective are evaluated at the final beta, so the
    // reported objective always equals the trimmed objective of the returned fit.
    const ResidualVector r = residuals(data, beta);
    std::vector<int> retained = smallest_h(r, h);
    double objective = 0.0;
    {
      std::vector<double> squares(h);
      for (int i = 0; i < h; ++i) squares[i] = r[retained[i]] * r[retained[i]];
      std::sort(squares.begin(), squares.end());
      for (int i = 0; i < h; ++i) objective += squares[i];
    }

    if (objective < best_objective) {
      best_objective = objective;
      best.beta = beta;
      best.retained = std::move(retained);
      best.objective = objective;
      found = true;
    }
  }

  if (!found) throw DegenerateDesignError("lts_fit: no start produced a fit");
  return best;
}

}  // namespace lstreg
