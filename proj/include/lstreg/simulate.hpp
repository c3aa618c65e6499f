#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "lstreg/dataset.hpp"
#include "lstreg/lst.hpp"
#include "lstreg/lts.hpp"
#include "lstreg/rng.hpp"

namespace lstreg {

enum class DesignKind {
  IidStandard,     // x ~ N(0, I)
  Equicorrelated,  // equicorrelated normal, unit variances, off-diagonal rho
};

struct Contamination {
  double rate = 0.0;       // fraction of rows replaced, in [0, 1)
  Eigen::VectorXd point;   // replacement row, length p: first p-1 are x, last is y
};

/// One cell of the benchmark: data law, dimensions, contamination and
/// replication control. `beta0` disengaged means the equivariant convention:
/// with the equicorrelated design the whole (x', y) vector is drawn jointly,
/// estimates are judged against the zero vector, and efficiency uses sample
/// variances. Engaged, the responses are built as y = (1, x') beta0 + e with
/// the design field describing the predictor law, and efficiency uses mean
/// squared errors.
struct SimulationScenario {
  int n = 100;
  int p = 5;
  DesignKind design = DesignKind::Equicorrelated;
  double rho = 0.9;
  std::optional<Eigen::VectorXd> beta0;
  Contamination contamination;
  int replications = 1000;
  std::uint64_t seed = 0;
};

/// Per-method knobs used by a study.
struct MethodSettings {
  LstConfig lst;
  LtsConfig lts;
};

struct MetricsRow {
  Method method = Method::LS;
  double emse = 0.0;
  double svar = 0.0;                // NaN when fewer than 2 usable replications
  double total_time_seconds = 0.0;
  double re = 1.0;                  // NaN when LS is absent from the study
  int failures = 0;
};

struct ReplicationRecord {
  int replication = 0;
  Method method = Method::LS;
  CoefficientVector estimate;
  double seconds = 0.0;
  bool ok = true;
  std::string error;
};

struct MetricsTable {
  std::vector<MetricsRow> rows;               // one per method, input order
  std::vector<ReplicationRecord> records;     // replication-major, method order within
};

/// Draws the scenario's sample for one replication; deterministic in
/// (scenario.seed, rep_index). Throws ConfigError when the equicorrelated
/// covariance is not positive definite or beta0/design settings clash.
Dataset generate_sample(const SimulationScenario& scenario, int rep_index);

/// Replaces ceil(n * rate) uniformly chosen rows (without replacement) by
/// `point`. Throws ConfigError for rate outside [0, 1) or a point of wrong length.
Dataset contaminate(const Dataset& data, double rate, const Eigen::VectorXd& point, Rng& rng);

/// Aggregates replication records into per-method metrics. Exposed separately
/// so the estimators' aggregation can be tested on synthetic records.
std::vector<MetricsRow> aggregate_metrics(const std::vector<ReplicationRecord>& records,
                                          const std::vector<Method>& methods,
                                          const std::optional<Eigen::VectorXd>& beta0);

/// Runs the full study: generate, contaminate, fit every method, aggregate.
/// Replications run on `threads` workers (0 = hardware concurrency); results
/// are a pure function of (scenario, methods, settings).
/// Throws StudyError when any method fails on more than 1% of replications.
MetricsTable run_study(const SimulationScenario& scenario, const std::vector<Method>& methods,
                       const MethodSettings& settings, int threads = 0);

}  // namespace lstreg
