#include "lstreg/dataset.hpp"

#include <limits>

#include "doctest.h"
#include "test_helpers.hpp"

using namespace lstreg;
using testing::make_dataset;

TEST_CASE("dataset rejects invalid construction") {
  CHECK_THROWS_AS(Dataset(Eigen::MatrixXd(0, 1), Eigen::VectorXd(0)), ContractViolation);
  CHECK_THROWS_AS(Dataset(Eigen::MatrixXd::Zero(3, 0), Eigen::VectorXd::Zero(3)),
                  ContractViolation);
  CHECK_THROWS_AS(Dataset(Eigen::MatrixXd::Zero(3, 1), Eigen::VectorXd::Zero(2)),
                  ContractViolation);

  Eigen::MatrixXd bad = Eigen::MatrixXd::Zero(2, 1);
  bad(1, 0) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(Dataset(bad, Eigen::VectorXd::Zero(2)), ContractViolation);

  Eigen::VectorXd bad_y(2);
  bad_y << 1.0, std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(Dataset(Eigen::MatrixXd::Zero(2, 1), bad_y), ContractViolation);
}

TEST_CASE("design matrix carries the intercept column") {
  const Dataset d = make_dataset({{2.0}, {5.0}}, {1.0, -1.0});
  CHECK(d.n() == 2);
  CHECK(d.p() == 2);
  CHECK(d.design()(0, 0) == 1.0);
  CHECK(d.design()(1, 0) == 1.0);
  CHECK(d.design()(0, 1) == 2.0);
  CHECK(d.predictors()(1, 0) == 5.0);
}

TEST_CASE("residuals match hand evaluation") {
  // Exact fit: y = 1 + 2x.
  const Dataset exact = make_dataset({{1.0}, {2.0}}, {3.0, 5.0});
  Eigen::VectorXd beta(2);
  beta << 1.0, 2.0;
  const ResidualVector r = residuals(exact, beta);
  CHECK(r[0] == doctest::Approx(0.0));
  CHECK(r[1] == doctest::Approx(0.0));

  // Zero coefficients leave the responses untouched.
  const ResidualVector r0 = residuals(exact, Eigen::VectorXd::Zero(2));
  CHECK(r0[0] == 3.0);
  CHECK(r0[1] == 5.0);

  const Dataset two = make_dataset({{0.0}, {1.0}}, {1.0, 0.0});
  Eigen::VectorXd slope_only(2);
  slope_only << 0.0, 1.0;
  const ResidualVector r2 = residuals(two, slope_only);
  CHECK(r2[0] == doctest::Approx(1.0));
  CHECK(r2[1] == doctest::Approx(-1.0));
}

TEST_CASE("residuals check coefficient length") {
  const Dataset d = make_dataset({{1.0}}, {1.0});
  CHECK_THROWS_AS(residuals(d, Eigen::VectorXd::Zero(3)), ContractViolation);
}

TEST_CASE("residuals are affine in the coefficients") {
  Rng rng(7001);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 3 + static_cast<int>(rng.uniform_below(20));
    const int p = 2 + static_cast<int>(rng.uniform_below(4));
    const Dataset d =
        testing::random_dataset(rng, n, p, testing::random_coefficients(rng, p));
    const Eigen::VectorXd b1 = testing::random_coefficients(rng, p);
    const Eigen::VectorXd b2 = testing::random_coefficients(rng, p);
    const ResidualVector lhs = residuals(d, b1 + b2);
    const ResidualVector rhs = residuals(d, b1) + residuals(d, b2) - d.response();
    CHECK((lhs - rhs).lpNorm<Eigen::Infinity>() < 1e-10);
  }
}

TEST_CASE("duplicated row duplicates its residual") {
  Rng rng(7002);
  const Dataset base = make_dataset({{1.0}, {4.0}, {-2.0}}, {0.5, 2.0, 1.5});
  Eigen::MatrixXd x(4, 1);
  x << 1.0, 4.0, -2.0, 4.0;  // row 1 duplicated at the end
  Eigen::VectorXd y(4);
  y << 0.5, 2.0, 1.5, 2.0;
  const Dataset extended(x, y);
  const Eigen::VectorXd beta = testing::random_coefficients(rng, 2);
  const ResidualVector r_base = residuals(base, beta);
  const ResidualVector r_ext = residuals(extended, beta);
  CHECK(r_ext[3] == r_ext[1]);
  CHECK(r_ext[1] == r_base[1]);
}

TEST_CASE("method tags round-trip") {
  for (const Method m : {Method::LS, Method::LST, Method::LTS})
    CHECK(parse_method(to_string(m)) == m);
  CHECK_THROWS_AS(parse_method("OLS"), ConfigError);
}
