#include "lstreg/simulate.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <thread>

#include <Eigen/Cholesky>

#include "lstreg/ols.hpp"

namespace lstreg {

namespace {

// Stream tags keeping generation, contamination and per-method randomness
// independent of each other and of the method list order.
constexpr std::uint64_t kStreamGenerate = 1;
constexpr std::uint64_t kStreamContaminate = 2;
constexpr std::uint64_t kStreamMethodBase = 16;

std::uint64_t method_stream(Method method) {
  return kStreamMethodBase + static_cast<std::uint64_t>(method);
}

Eigen::MatrixXd equicorrelated_cholesky(int p, double rho) {
  Eigen::MatrixXd sigma = Eigen::MatrixXd::Constant(p, p, rho);
  sigma.diagonal().setOnes();
  Eigen::LLT<Eigen::MatrixXd> llt(sigma);
  if (llt.info() != Eigen::Success)
    throw ConfigError("equicorrelated covariance is not positive definite (rho=" +
                      std::to_string(rho) + ", p=" + std::to_string(p) + ")");
  return llt.matrixL();
}

int contamination_count(int n, double rate) {
  // ceil(n * rate) with a guard against excess from the decimal representation
  // of the rate (e.g. 100 * 0.1 evaluating just above 10).
  return static_cast<int>(std::ceil(static_cast<double>(n) * rate - 1e-9));
}

}  // namespace

Dataset generate_sample(const SimulationScenario& scenario, int rep_index) {
  const int n = scenario.n;
  const int p = scenario.p;
  if (n < 1 || p < 2) throw ConfigError("scenario requires n >= 1 and p >= 2");
  Rng rng(scenario.seed, static_cast<std::uint64_t>(rep_index), kStreamGenerate);

  if (scenario.beta0.has_value() && scenario.beta0->size() != p)
    throw ConfigError("beta0 length does not match model dimension p");

  if (scenario.design == DesignKind::Equicorrelated && !scenario.beta0.has_value()) {
    // Equivariant mode: the whole z = (x', y) vector is drawn jointly.
    const Eigen::MatrixXd chol = equicorrelated_cholesky(p, scenario.rho);
    Eigen::MatrixXd x(n, p - 1);
    Eigen::VectorXd y(n);
    Eigen::VectorXd unit(p);
    for (int i = 0; i < n; ++i) {
      for (int k = 0; k < p; ++k) unit[k] = rng.normal();
      const Eigen::VectorXd z = chol * unit;
      x.row(i) = z.head(p - 1);
      y[i] = z[p - 1];
    }
    return Dataset(std::move(x), std::move(y));
  }

  // Fixed-coefficient mode: draw the predictors (standard or equicorrelated),
  // then build y = (1, x') beta0 + e with standard normal errors.
  Eigen::MatrixXd x(n, p - 1);
  if (scenario.design == DesignKind::Equicorrelated) {
    const Eigen::MatrixXd chol = equicorrelated_cholesky(p - 1, scenario.rho);
    Eigen::VectorXd unit(p - 1);
    for (int i = 0; i < n; ++i) {
      for (int k = 0; k < p - 1; ++k) unit[k] = rng.normal();
      x.row(i) = chol * unit;
    }
  } else {
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < p - 1; ++k) x(i, k) = rng.normal();
  }
  Eigen::VectorXd y(n);
  for (int i = 0; i < n; ++i) y[i] = rng.normal();  // the error term
  if (scenario.beta0.has_value()) {
    const Eigen::VectorXd& beta0 = *scenario.beta0;
    y.array() += beta0[0];
    y += x * beta0.tail(p - 1);
  }
  return Dataset(std::move(x), std::move(y));
}

Dataset contaminate(const Dataset& data, double rate, const Eigen::VectorXd& point, Rng& rng) {
  if (rate < 0.0 || rate >= 1.0) throw ConfigError("contamination rate must be in [0, 1)");
  if (point.size() != data.p())
    throw ConfigError("contamination point length must equal the model dimension p");
  const int m = contamination_count(data.n(), rate);
  Eigen::MatrixXd x = data.predictors();
  Eigen::VectorXd y = data.response();
  for (const int row : rng.sample_without_replacement(data.n(), m)) {
    x.row(row) = point.head(data.p() - 1);
    y[row] = point[data.p() - 1];
  }
  return Dataset(std::move(x), std::move(y));
}

std::vector<MetricsRow> aggregate_metrics(const std::vector<ReplicationRecord>& records,
                                          const std::vector<Method>& methods,
                                          const std::optional<Eigen::VectorXd>& beta0) {
  constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
  std::vector<MetricsRow> rows;
  rows.reserve(methods.size());

  for (const Method method : methods) {
    MetricsRow row;
    row.method = method;

    std::vector<const ReplicationRecord*> ok_records;
    for (const ReplicationRecord& record : records) {
      if (record.method != method) continue;
      row.total_time_seconds += record.seconds;
      if (record.ok)
        ok_records.push_back(&record);
      else
        ++row.failures;
    }
    const int used = static_cast<int>(ok_records.size());
    if (used == 0) {
      row.emse = kNaN;
      row.svar = kNaN;
      row.re = kNaN;
      rows.push_back(row);
      continue;
    }

    const int p = static_cast<int>(ok_records.front()->estimate.size());
    const Eigen::VectorXd target =
        beta0.has_value() ? *beta0 : Eigen::VectorXd::Zero(p).eval();
    Eigen::VectorXd mean = Eigen::VectorXd::Zero(p);
    for (const auto* record : ok_records) mean += record->estimate;
    mean /= used;

    double emse = 0.0;
    double svar = 0.0;
    for (const auto* record : ok_records) {
      emse += (record->estimate - target).squaredNorm();
      svar += (record->estimate - mean).squaredNorm();
    }
    row.emse = emse / used;
    row.svar = used >= 2 ? svar / (used - 1) : kNaN;
    rows.push_back(row);
  }

  // Relative efficiency against LS: sample-variance ratio under the
  // equivariant (beta0 unset) convention, EMSE ratio otherwise; 0/0 is 1.
  const MetricsRow* ls_row = nullptr;
  for (const MetricsRow& row : rows)
    if (row.method == Method::LS) ls_row = &row;
  for (MetricsRow& row : rows) {
    if (ls_row == nullptr) {
      row.re = kNaN;
      continue;
    }
    const double numerator = beta0.has_value() ? ls_row->emse : ls_row->svar;
    const double denominator = beta0.has_value() ? row.emse : row.svar;
    if (numerator == 0.0 && denominator == 0.0)
      row.re = 1.0;
    else
      row.re = numerator / denominator;
  }
  return rows;
}

MetricsTable run_study(const SimulationScenario& scenario, const std::vector<Method>& methods,
                       const MethodSettings& settings, int threads) {
  const int reps = scenario.replications;
  if (reps < 1) throw ConfigError("scenario requires at least one replication");
  if (methods.empty()) throw ConfigError("run_study: no methods selected");
  if (scenario.n < 1 || scenario.p < 2) throw ConfigError("scenario requires n >= 1 and p >= 2");
  if (scenario.contamination.rate < 0.0 || scenario.contamination.rate >= 1.0)
    throw ConfigError("contamination rate must be in [0, 1)");
  if (scenario.contamination.rate > 0.0 && scenario.contamination.point.size() != scenario.p)
    throw ConfigError("contamination point length must equal the model dimension p");
  if (scenario.beta0.has_value() && scenario.beta0->size() != scenario.p)
    throw ConfigError("beta0 length does not match model dimension p");
  if (scenario.design == DesignKind::Equicorrelated) {
    const int dim = scenario.beta0.has_value() ? scenario.p - 1 : scenario.p;
    equicorrelated_cholesky(dim, scenario.rho);  // fail fast on a bad rho
  }

  MetricsTable table;
  table.records.resize(static_cast<std::size_t>(reps) * methods.size());

  const auto run_replication = [&](int rep) {
    Dataset data = generate_sample(scenario, rep);
    if (scenario.contamination.rate > 0.0) {
      Rng crng(scenario.seed, static_cast<std::uint64_t>(rep), kStreamContaminate);
      data = contaminate(data, scenario.contamination.rate, scenario.contamination.point, crng);
    }
    for (std::size_t m = 0; m < methods.size(); ++m) {
      const Method method = methods[m];
      ReplicationRecord& record = table.records[rep * methods.size() + m];
      record.replication = rep;
      record.method = method;
      const auto started = std::chrono::steady_clock::now();
      try {
        switch (method) {
          case Method::LS:
            record.estimate = ls_fit(data).beta;
            break;
          case Method::LST: {
            LstConfig config = settings.lst;
            config.seed = mix_seed(scenario.seed, static_cast<std::uint64_t>(rep),
                                   method_stream(method));
            record.estimate = lst_fit(data, config).beta;
            break;
          }
          case Method::LTS: {
            LtsConfig config = settings.lts;
            config.seed = mix_seed(scenario.seed, static_cast<std::uint64_t>(rep),
                                   method_stream(method));
            record.estimate = lts_fit(data, config).beta;
            break;
          }
        }
      } catch (const std::exception& err) {
        record.ok = false;
        record.error = err.what();
      }
      record.seconds =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    }
  };

  int workers = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
  workers = std::max(1, std::min(workers, reps));
  if (workers == 1) {
    for (int rep = 0; rep < reps; ++rep) run_replication(rep);
  } else {
    std::atomic<int> next_rep{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (int rep = next_rep.fetch_add(1); rep < reps; rep = next_rep.fetch_add(1))
          run_replication(rep);
      });
    }
    for (std::thread& worker : pool) worker.join();
  }

  table.rows = aggregate_metrics(table.records, methods, scenario.beta0);
  for (const MetricsRow& row : table.rows) {
    if (row.failures * 100 > reps)
      throw StudyError(to_string(row.method) + " failed on " + std::to_string(row.failures) +
                       " of " + std::to_string(reps) + " replications (over 1%)");
  }
  return table;
}

}  // namespace lstreg
