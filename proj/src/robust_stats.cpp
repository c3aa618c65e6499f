#include "lstreg/robust_stats.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace lstreg {

namespace {

// Median by selection; the caller's buffer is reordered in place.
double median_inplace(std::vector<double>& buf) {
  const std::size_t n = buf.size();
  const std::size_t mid = n / 2;
  std::nth_element(buf.begin(), buf.begin() + mid, buf.end());
  const double upper = buf[mid];
  if (n % 2 == 1) return upper;
  const double lower = *std::max_element(buf.begin(), buf.begin() + mid);
  return 0.5 * (lower + upper);
}

std::vector<double> to_buffer(const Eigen::VectorXd& values) {
  return std::vector<double>(values.data(), values.data() + values.size());
}

}  // namespace

double median(const Eigen::VectorXd& values) {
  if (values.size() == 0) throw ContractViolation("median: empty input");
  std::vector<double> buf = to_buffer(values);
  return median_inplace(buf);
}

bool majority_identical(const Eigen::VectorXd& values) {
  const Eigen::Index n = values.size();
  if (n == 0) return false;
  std::vector<double> buf = to_buffer(values);
  std::sort(buf.begin(), buf.end());
  const Eigen::Index threshold = (n + 1) / 2;
  Eigen::Index run = 1;
  for (Eigen::Index i = 1; i < n; ++i) {
    run = (buf[i] == buf[i - 1]) ? run + 1 : 1;
    if (run >= threshold) return true;
  }
  return threshold <= 1;
}

double mad(const Eigen::VectorXd& values) {
  if (values.size() == 0) throw ContractViolation("mad: empty input");
  // Exact-equality grouping on purpose: the rule exists for exact-fit residual
  // degeneracies, which produce bitwise-identical values.
  if (majority_identical(values)) return 1.0;
  const double center = median(values);
  std::vector<double> deviations(values.size());
  for (Eigen::Index i = 0; i < values.size(); ++i)
    deviations[i] = std::abs(values[i] - center);
  return median_inplace(deviations);
}

OutlyingnessVector outlyingness(const Eigen::VectorXd& values) {
  if (values.size() == 0) throw ContractViolation("outlyingness: empty input");
  const double scale = mad(values);
  if (scale == 0.0)
    throw DegenerateScaleError(
        "outlyingness: zero residual scale without a majority of identical values");
  const double center = median(values);
  return (values.array() - center).abs() / scale;
}

}  // namespace lstreg
