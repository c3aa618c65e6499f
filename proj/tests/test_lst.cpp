#include "lstreg/lst.hpp"

#include <algorithm>
#include <cstring>
#include <set>
#include <vector>

#include "doctest.h"
#include "lstreg/ols.hpp"
#include "lstreg/robust_stats.hpp"
#include "test_helpers.hpp"

using namespace lstreg;
using testing::make_dataset;

namespace {

// Dataset whose residuals at beta are exactly the requested vector: x fixed
// ramp, y = x + r so that beta = (0, 1) reproduces r.
Dataset dataset_with_residuals(const std::vector<double>& r) {
  std::vector<std::vector<double>> x;
  std::vector<double> y;
  for (std::size_t i = 0; i < r.size(); ++i) {
    x.push_back({static_cast<double>(i + 1)});
    y.push_back(static_cast<double>(i + 1) + r[i]);
  }
  return make_dataset(x, y);
}

const Eigen::VectorXd kUnitSlope = [] {
  Eigen::VectorXd b(2);
  b << 0.0, 1.0;
  return b;
}();

}  // namespace

TEST_CASE("index_set keeps rows with outlyingness at most alpha") {
  // Residuals (1,2,3,4,100): outlyingness (2,1,0,1,97); alpha 2 keeps the
  // first four rows (the boundary value 2 is included).
  const Dataset d = dataset_with_residuals({1, 2, 3, 4, 100});
  const std::vector<int> retained = index_set(d, kUnitSlope, 2.0);
  CHECK(retained == std::vector<int>{0, 1, 2, 3});

  // A perfect fit has all-zero residuals, so everything is retained.
  const Dataset exact = dataset_with_residuals({0, 0, 0, 0, 0});
  CHECK(index_set(exact, kUnitSlope, 1.0).size() == 5);

  // A huge alpha dominates every finite outlyingness.
  CHECK(index_set(d, kUnitSlope, 1e18).size() == 5);

  CHECK_THROWS_AS(index_set(d, kUnitSlope, 0.99), ContractViolation);
}

TEST_CASE("objective_q sums squared residuals over the retained set") {
  const Dataset d = dataset_with_residuals({1, 2, 3, 4, 100});
  // Retained rows have residuals 1,2,3,4.
  CHECK(objective_q(d, kUnitSlope, 2.0) == doctest::Approx(30.0));
  const Dataset exact = dataset_with_residuals({0, 0, 0, 0, 0});
  CHECK(objective_q(exact, kUnitSlope, 2.5) == 0.0);
  // No trimming recovers the full sum of squares.
  CHECK(objective_q(d, kUnitSlope, 1e18) == doctest::Approx(1 + 4 + 9 + 16 + 10000));
}

TEST_CASE("index_set is monotone in alpha") {
  Rng rng(17001);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 5 + static_cast<int>(rng.uniform_below(40));
    const int p = 2 + static_cast<int>(rng.uniform_below(4));
    const Dataset d = testing::random_dataset(rng, n, p, testing::random_coefficients(rng, p));
    const Eigen::VectorXd beta = testing::random_coefficients(rng, p);
    const double a1 = 1.0 + rng.uniform01() * 3.0;
    const double a2 = a1 + rng.uniform01() * 3.0;
    const std::vector<int> small = index_set(d, beta, a1);
    const std::vector<int> large = index_set(d, beta, a2);
    CHECK(std::includes(large.begin(), large.end(), small.begin(), small.end()));
    CHECK_FALSE(small.empty());
    // Q never exceeds the untrimmed sum of squares.
    const double full = residuals(d, beta).squaredNorm();
    CHECK(objective_q(d, beta, a1) <= full + 1e-9 * full);
  }
}

TEST_CASE("candidate count is 2 + 4p and the pair residuals are equalized") {
  Rng rng(17002);
  const Dataset d = testing::random_dataset(rng, 12, 3, testing::random_coefficients(rng, 3));
  const CandidateSet candidates = candidate_betas(d, rng, 0.5);
  CHECK(candidates.betas.size() == 2 + 4 * 3);
  for (int which = 0; which < 2; ++which) {
    const ResidualVector r = residuals(d, candidates.betas[which]);
    CHECK(r[candidates.row_i] == doctest::Approx(r[candidates.row_j]).epsilon(1e-10));
  }
}

TEST_CASE("candidate construction matches the two-point slope") {
  // Rows (x=1, y=2) and (x=3, y=6): slope (2-6)/(1-3) = 2.
  const Dataset d = make_dataset({{1.0}, {3.0}, {1.0}}, {2.0, 6.0, 0.0});
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Rng rng(seed);
    const CandidateSet candidates = candidate_betas(d, rng, 0.5);
    const std::set<int> pair = {candidates.row_i, candidates.row_j};
    if (pair != std::set<int>{0, 1}) continue;
    CHECK(candidates.betas.size() == 10);  // p = 2
    CHECK(candidates.betas[0][0] == 0.0);
    CHECK(candidates.betas[0][1] == doctest::Approx(2.0));
    CHECK(candidates.betas[1][0] == 1.0);
    CHECK(candidates.betas[1][1] == doctest::Approx(2.0));
    return;
  }
  FAIL("pair (0,1) never sampled across ten seeds");
}

TEST_CASE("identical predictor rows are unsampleable") {
  const Dataset d = make_dataset({{2.0}, {2.0}, {2.0}, {2.0}}, {1.0, 2.0, 3.0, 4.0});
  Rng rng(4);
  CHECK_THROWS_AS(candidate_betas(d, rng, 0.5), UnsampleableDesignError);
}

TEST_CASE("pair sampling covers every pair before giving up") {
  // Two identical-x clusters: only cross-cluster pairs are usable. With the
  // sampler drawing without replacement, every seed must find one.
  const Dataset d = make_dataset({{1.0}, {1.0}, {1.0}, {2.0}}, {1.0, 1.0, 1.0, 5.0});
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    Rng rng(seed);
    const CandidateSet candidates = candidate_betas(d, rng, 0.5);
    CHECK(((candidates.row_i == 3) != (candidates.row_j == 3)));
  }
}

TEST_CASE("lst_fit validates its configuration") {
  Rng rng(17003);
  const Dataset d = testing::random_dataset(rng, 10, 2, testing::random_coefficients(rng, 2));
  LstConfig config;
  config.alpha = 0.5;
  CHECK_THROWS_AS(lst_fit(d, config), ContractViolation);
  config = LstConfig{};
  config.delta = 0.0;
  CHECK_THROWS_AS(lst_fit(d, config), ContractViolation);
  config = LstConfig{};
  config.restarts = 0;
  CHECK_THROWS_AS(lst_fit(d, config), ContractViolation);
  config.restarts = 46;  // n(n-1)/2 = 45
  CHECK_THROWS_AS(lst_fit(d, config), ContractViolation);
}

TEST_CASE("all-tied candidates raise the all-degenerate error") {
  // Two x-levels with duplicated points: every candidate produces residual
  // vectors whose retained outlyingness values are all equal.
  const Dataset d = make_dataset({{0.0}, {0.0}, {1.0}, {1.0}}, {0.0, 0.0, 1.0, 1.0});
  LstConfig config;
  config.restarts = 3;
  CHECK_THROWS_AS(lst_fit(d, config), AllCandidatesSkippedError);
}

TEST_CASE("trimmed fit is a genuine subset least-squares solution") {
  Rng rng(17004);
  int checked = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 10 + static_cast<int>(rng.uniform_below(40));
    const int p = 2 + static_cast<int>(rng.uniform_below(4));
    const Dataset d =
        testing::random_dataset(rng, n, p, testing::random_coefficients(rng, p), 0.8);
    LstConfig config;
    config.seed = rng.raw();
    TrimmedFit fit;
    try {
      fit = lst_fit(d, config);
      ++checked;
    } catch (const AllCandidatesSkippedError&) {
      continue;  // even-n tie cascades can wipe out a whole candidate set
    }
    CHECK(fit.method == Method::LST);
    const LsSolution refit = ls_fit(d, fit.retained);
    CHECK(fit.objective ==
          doctest::Approx(refit.ss).epsilon(1e-9));
    CHECK((fit.beta - refit.beta).lpNorm<Eigen::Infinity>() < 1e-9);
    // Objective recomputed from scratch agrees.
    double ss = 0.0;
    for (const int i : fit.retained) {
      const double r = d.response()[i] - d.design().row(i).dot(fit.beta);
      ss += r * r;
    }
    CHECK(fit.objective == doctest::Approx(ss).epsilon(1e-10));
  }
  CHECK(checked >= 90);
}

TEST_CASE("lst_fit is deterministic under a fixed seed") {
  Rng rng(17005);
  const Dataset d = testing::random_dataset(rng, 30, 3, testing::random_coefficients(rng, 3));
  LstConfig config;
  config.seed = 99;
  config.restarts = 4;
  const TrimmedFit a = lst_fit(d, config);
  const TrimmedFit b = lst_fit(d, config);
  CHECK(a.retained == b.retained);
  REQUIRE(a.beta.size() == b.beta.size());
  CHECK(std::memcmp(a.beta.data(), b.beta.data(), sizeof(double) * a.beta.size()) == 0);
  CHECK(a.objective == b.objective);
}

TEST_CASE("huge alpha reduces to full-data least squares") {
  Rng rng(17006);
  for (int trial = 0; trial < 30; ++trial) {
    // Odd sizes: with an even count the averaged median makes the two central
    // deviations bitwise equal so often that whole candidate sets get skipped.
    const int n = 11 + 2 * static_cast<int>(rng.uniform_below(10));
    const Dataset d = testing::random_dataset(rng, n, 2, testing::random_coefficients(rng, 2));
    LstConfig config;
    config.alpha = 1e18;
    config.seed = trial;
    const TrimmedFit fit = lst_fit(d, config);
    const LsSolution full = ls_fit(d);
    CHECK(static_cast<int>(fit.retained.size()) == n);
    CHECK((fit.beta - full.beta).lpNorm<Eigen::Infinity>() < 1e-8);
  }
}

// Exact-arithmetic equivariance instances: binary predictors make the
// candidate slopes exact quotients and dyadic responses keep every residual,
// median and deviation on a lattice where double arithmetic is exact. Tie
// patterns are then identical between the original and the shifted run, which
// is what the mathematical statement assumes.
namespace {

Dataset dyadic_dataset(Rng& rng, int n, int p) {
  while (true) {
    Eigen::MatrixXd x(n, p - 1);
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < p - 1; ++k) x(i, k) = static_cast<double>(rng.uniform_below(2));
    bool sampleable = false;
    for (int i = 1; i < n && !sampleable; ++i)
      sampleable = (x.row(i).array() != x.row(0).array()).any();
    if (!sampleable) continue;
    Eigen::VectorXd y(n);
    for (int i = 0; i < n; ++i)
      y[i] = static_cast<double>(static_cast<std::int64_t>(rng.uniform_below(16385)) - 8192) /
             1024.0;
    return Dataset(std::move(x), std::move(y));
  }
}

double dyadic_value(Rng& rng) {
  return static_cast<double>(static_cast<std::int64_t>(rng.uniform_below(8193)) - 4096) / 1024.0;
}

}  // namespace

TEST_CASE("regression equivariance: shifted responses shift the fit") {
  Rng rng(17007);
  int checked = 0;
  for (int trial = 0; trial < 400; ++trial) {
    const int p = 2 + static_cast<int>(rng.uniform_below(4));
    const int n = 13 + 2 * static_cast<int>(rng.uniform_below(14));
    const Dataset d = dyadic_dataset(rng, n, p);

    LstConfig config;
    config.seed = 1000 + trial;

    // Replicate the fit's pair draw to learn which predictor component the
    // candidates run through; shifts aligned with it move every candidate by
    // the same vector.
    int component = -1;
    {
      Rng peek(config.seed);
      component = candidate_betas(d, peek, config.delta).component;
    }
    Eigen::VectorXd shift = Eigen::VectorXd::Zero(p);
    shift[0] = dyadic_value(rng);
    shift[component + 1] = dyadic_value(rng);

    const Dataset shifted(d.predictors(), d.response() + d.design() * shift);
    TrimmedFit base;
    try {
      base = lst_fit(d, config);
    } catch (const AllCandidatesSkippedError&) {
      CHECK_THROWS_AS(lst_fit(shifted, config), AllCandidatesSkippedError);
      continue;
    }
    if (ls_fit(d, base.retained).rank_deficient) continue;  // shift of min-norm fits differs
    const TrimmedFit moved = lst_fit(shifted, config);
    ++checked;
    CHECK(moved.retained == base.retained);
    CHECK((moved.beta - (base.beta + shift)).lpNorm<Eigen::Infinity>() < 1e-8);
  }
  CHECK(checked >= 300);
}

TEST_CASE("equivariance on continuous data holds at the fit level") {
  // With continuous data the exact-tie skip pattern itself is not shift
  // invariant in floating point, so candidate sets can differ between runs;
  // the fitted coefficients still shift correctly in the bulk of instances.
  Rng rng(17017);
  int match = 0;
  int total = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const int p = 2 + static_cast<int>(rng.uniform_below(4));
    const int n = 13 + 2 * static_cast<int>(rng.uniform_below(15));
    const Dataset d =
        testing::random_dataset(rng, n, p, testing::random_coefficients(rng, p), 0.6);
    Eigen::VectorXd shift = Eigen::VectorXd::Zero(p);
    shift[0] = rng.normal() * 3.0;
    shift[1] = rng.normal() * 3.0;
    const Dataset shifted(d.predictors(), d.response() + d.design() * shift);
    LstConfig config;
    config.seed = 2000 + trial;
    TrimmedFit base;
    try {
      base = lst_fit(d, config);
    } catch (const AllCandidatesSkippedError&) {
      continue;
    }
    const TrimmedFit moved = lst_fit(shifted, config);
    ++total;
    if (moved.retained == base.retained &&
        (moved.beta - (base.beta + shift)).lpNorm<Eigen::Infinity>() < 1e-6)
      ++match;
  }
  CHECK(total >= 190);
  CHECK(match * 10 >= total * 9);
}

TEST_CASE("collinear data with outliers: trimmed objective beats full least squares") {
  // Sixteen points on y = 1 + 2x plus three arbitrary outliers. Irregular x
  // spacing: an arithmetic grid would pair the deviations symmetrically
  // around the median and every candidate would be tie-skipped.
  Rng xrng(909);
  std::vector<std::vector<double>> x;
  std::vector<double> y;
  for (int i = 0; i < 16; ++i) {
    const double xi = 4.0 * xrng.uniform01();
    x.push_back({xi});
    y.push_back(1.0 + 2.0 * xi);
  }
  x.push_back({1.0});
  y.push_back(40.0);
  x.push_back({2.0});
  y.push_back(-35.0);
  x.push_back({3.5});
  y.push_back(60.0);
  const Dataset d = make_dataset(x, y);

  LstConfig config;
  config.seed = 5;
  config.restarts = 6;
  const TrimmedFit fit = lst_fit(d, config);
  const LsSolution full = ls_fit(d);
  CHECK(fit.objective <= full.ss);
  // The trimmed fit recovers the clean line.
  CHECK(fit.beta[0] == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(fit.beta[1] == doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("clean seven-point data: trimmed and plain fits agree on the pattern") {
  Rng rng(333);
  int usable = 0;
  int positive_slope = 0;
  std::vector<double> distances;
  for (int trial = 0; trial < 100; ++trial) {
    Eigen::MatrixXd x(7, 1);
    Eigen::VectorXd y(7);
    for (int i = 0; i < 7; ++i) {
      const double u = rng.normal();
      const double v = rng.normal();
      x(i, 0) = u;
      y[i] = 0.88 * u + std::sqrt(1.0 - 0.88 * 0.88) * v;
    }
    const Dataset d(x, y);
    LstConfig config;
    config.seed = 50 + trial;
    config.restarts = 5;
    try {
      const TrimmedFit fit = lst_fit(d, config);
      ++usable;
      if (fit.beta[1] > 0.0) ++positive_slope;
      distances.push_back((fit.beta - ls_fit(d).beta).norm());
    } catch (const AllCandidatesSkippedError&) {
    }
  }
  std::sort(distances.begin(), distances.end());
  CHECK(usable >= 95);
  CHECK(positive_slope >= 85);                      // the linear pattern is caught
  CHECK(distances[distances.size() / 2] < 1.0);     // and tracks the plain fit
}

TEST_CASE("tiny samples are rejected up front") {
  const Dataset pair = make_dataset({{1.0}, {2.0}}, {1.0, 2.0});
  Rng rng(1);
  CHECK_THROWS_AS(candidate_betas(pair, rng, 0.5), ContractViolation);
  CHECK_THROWS_AS(lst_fit(pair, LstConfig{}), ContractViolation);
}

TEST_CASE("fig-1 style contamination: trimmed fit resists, least squares moves") {
  // Seven highly correlated points; two adversarially replaced. The trimmed
  // line should stay near the clean fit while plain least squares is dragged.
  Rng rng(17008);
  int wins = 0;
  int total = 0;
  for (int trial = 0; trial < 60; ++trial) {
    Eigen::MatrixXd x(7, 1);
    Eigen::VectorXd y(7);
    for (int i = 0; i < 7; ++i) {
      const double u = rng.normal();
      const double v = rng.normal();
      x(i, 0) = u;
      y[i] = 0.88 * u + std::sqrt(1.0 - 0.88 * 0.88) * v;
    }
    const Dataset clean(x, y);
    const Eigen::VectorXd clean_ls = ls_fit(clean).beta;

    Eigen::MatrixXd cx = x;
    Eigen::VectorXd cy = y;
    const std::vector<int> rows = rng.sample_without_replacement(7, 2);
    for (const int row : rows) {
      cx(row, 0) = 7.0;
      cy[row] = -7.0;
    }
    const Dataset contaminated(cx, cy);

    LstConfig config;
    config.seed = 17100 + trial;
    config.restarts = 5;
    TrimmedFit fit;
    try {
      fit = lst_fit(contaminated, config);
    } catch (const AllCandidatesSkippedError&) {
      continue;
    }
    ++total;
    const Eigen::VectorXd dirty_ls = ls_fit(contaminated).beta;
    if ((fit.beta - clean_ls).norm() < (dirty_ls - clean_ls).norm()) ++wins;
  }
  // The paper's qualitative claim: the trimmed line resists the outliers.
  CHECK(total >= 55);
  CHECK(wins * 10 >= total * 8);
}

TEST_CASE("iterated refit variant stays consistent") {
  Rng rng(17009);
  const Dataset d = testing::random_dataset(rng, 40, 3, testing::random_coefficients(rng, 3));
  LstConfig config;
  config.seed = 3;
  config.iterate_refit = true;
  const TrimmedFit fit = lst_fit(d, config);
  const LsSolution refit = ls_fit(d, fit.retained);
  CHECK(fit.objective == doctest::Approx(refit.ss).epsilon(1e-9));
}
