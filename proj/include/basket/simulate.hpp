#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "basket/estimators.hpp"
#include "basket/mcmc.hpp"
#include "basket/rng.hpp"
#include "basket/trial.hpp"

namespace basket {

// A full simulation request. Replications are addressed by RngStream path
// (scenario index, sample-size index, replication), and every method within a
// replication analyzes the identical generated trial, so results are
// deterministic given master_seed regardless of worker count or execution
// order.
struct SimPlan {
  std::vector<std::string> scenario_ids;  // defaults to the whole table
  std::vector<int> sample_sizes{10, 20, 30, 100};
  std::vector<MethodId> methods{kAllMethods,
                                kAllMethods + std::size(kAllMethods)};
  int n_reps = 1000;
  std::uint64_t master_seed = 20240601;
  double prior_mean = 0.5;
  McmcConfig mcmc;
  MethodConfigs configs;
  int workers = 1;
};

// Table-2 style summary for one (scenario, method, sample size) cell.
// Shrinkage is absent for homogeneous scenarios, whose true-rate range is
// zero.
struct MetricsRecord {
  std::string scenario_id;
  MethodId method;
  int n_per_cohort = 0;
  double mean_abs_bias = 0.0;
  double mean_mse = 0.0;
  std::optional<double> shrinkage;
};

// Raw per-replication estimates for one cell; rows are replications, columns
// cohorts. ok[rep] is 0 when the estimator failed for that replication (the
// row is then excluded from metrics).
struct CellResult {
  std::string scenario_id;
  MethodId method;
  int n_per_cohort = 0;
  Eigen::MatrixXd estimates;
  std::vector<std::uint8_t> ok;

  int failures() const;
};

struct SimResults {
  std::vector<CellResult> cells;
  std::vector<MetricsRecord> metrics;
  // FNV digest of all generated trials per (scenario, n), for pairing and
  // determinism checks.
  std::vector<std::pair<std::string, std::uint64_t>> trial_digests;
};

// One simulated trial: r_i ~ Binomial(n_per_cohort, p_i) independently.
TrialData generate_trial(const Scenario& scenario, int n_per_cohort,
                         RngStream& rng);

// Per-cohort replication mean and unbiased variance over successful
// replications, summed in replication order.
std::pair<Eigen::VectorXd, Eigen::VectorXd> cohort_moments(
    const CellResult& cell);

// Replication means, (1/K) sum |E(p_hat) - p|, (1/K) sum [bias^2 + var]
// with the unbiased sample variance, and the range-compression shrinkage.
MetricsRecord compute_metrics(const CellResult& cell,
                              const Scenario& scenario);

// Runs the whole grid. Throws if more than 1% of replications fail for any
// method in any cell.
SimResults run_plan(const SimPlan& plan);

}  // namespace basket
