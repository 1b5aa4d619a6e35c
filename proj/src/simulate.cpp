#include "basket/simulate.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "basket/scenarios.hpp"

namespace basket {

int CellResult::failures() const {
  int count = 0;
  for (std::uint8_t flag : ok) {
    count += flag ? 0 : 1;
  }
  return count;
}

TrialData generate_trial(const Scenario& scenario, int n_per_cohort,
                         RngStream& rng) {
  if (n_per_cohort < 1) {
    throw std::invalid_argument("generate_trial requires n_per_cohort >= 1");
  }
  TrialData trial;
  trial.cohorts.resize(scenario.num_cohorts());
  for (int i = 0; i < scenario.num_cohorts(); ++i) {
    trial.cohorts[i].n = n_per_cohort;
    trial.cohorts[i].r = draw_binomial(n_per_cohort, scenario.true_rates[i], rng);
  }
  return trial;
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> cohort_moments(
    const CellResult& cell) {
  const int k = static_cast<int>(cell.estimates.cols());
  const int reps = static_cast<int>(cell.estimates.rows());
  int used = 0;
  for (std::uint8_t flag : cell.ok) {
    used += flag ? 1 : 0;
  }
  if (used < 2) {
    throw std::invalid_argument(
        "metrics require at least 2 successful replications");
  }

  // Plain index-order loops keep the floating-point sums deterministic.
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(k);
  for (int rep = 0; rep < reps; ++rep) {
    if (!cell.ok[rep]) {
      continue;
    }
    mean += cell.estimates.row(rep).transpose();
  }
  mean /= used;

  Eigen::VectorXd variance = Eigen::VectorXd::Zero(k);
  for (int rep = 0; rep < reps; ++rep) {
    if (!cell.ok[rep]) {
      continue;
    }
    const Eigen::VectorXd d = cell.estimates.row(rep).transpose() - mean;
    variance += d.cwiseProduct(d);
  }
  variance /= (used - 1);
  return {std::move(mean), std::move(variance)};
}

MetricsRecord compute_metrics(const CellResult& cell,
                              const Scenario& scenario) {
  const int k = scenario.num_cohorts();
  const auto [mean, variance] = cohort_moments(cell);

  MetricsRecord record;
  record.scenario_id = cell.scenario_id;
  record.method = cell.method;
  record.n_per_cohort = cell.n_per_cohort;
  double abs_bias = 0.0;
  double mse = 0.0;
  for (int i = 0; i < k; ++i) {
    const double bias = mean[i] - scenario.true_rates[i];
    abs_bias += std::abs(bias);
    mse += bias * bias + variance[i];
  }
  record.mean_abs_bias = abs_bias / k;
  record.mean_mse = mse / k;

  const double rate_range =
      scenario.true_rates.maxCoeff() - scenario.true_rates.minCoeff();
  if (rate_range > 0.0) {
    record.shrinkage =
        1.0 - (mean.maxCoeff() - mean.minCoeff()) / rate_range;
  }
  return record;
}

namespace {

std::vector<const Scenario*> resolve_scenarios(const SimPlan& plan) {
  std::vector<const Scenario*> scenarios;
  if (plan.scenario_ids.empty()) {
    for (const Scenario& s : scenario_table()) {
      scenarios.push_back(&s);
    }
    return scenarios;
  }
  for (const std::string& id : plan.scenario_ids) {
    const Scenario* s = find_scenario(id);
    if (s == nullptr) {
      throw std::invalid_argument("unknown scenario id '" + id + "'");
    }
    scenarios.push_back(s);
  }
  return scenarios;
}

void validate_plan(const SimPlan& plan) {
  if (plan.n_reps < 1) {
    throw std::invalid_argument("plan: n_reps must be >= 1");
  }
  for (int n : plan.sample_sizes) {
    if (n < 1) {
      throw std::invalid_argument("plan: sample sizes must be positive");
    }
  }
  if (plan.sample_sizes.empty() || plan.methods.empty()) {
    throw std::invalid_argument("plan: sample sizes and methods must be "
                                "non-empty");
  }
  check_mcmc_config(plan.mcmc);
}

std::uint64_t fold_digest(std::uint64_t h, std::uint64_t v) {
  for (int byte = 0; byte < 8; ++byte) {
    h ^= (v >> (8 * byte)) & 0xffU;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

SimResults run_plan(const SimPlan& plan) {
  validate_plan(plan);
  const std::vector<const Scenario*> scenarios = resolve_scenarios(plan);
  const RngStream root(plan.master_seed);
  const int n_methods = static_cast<int>(plan.methods.size());
  const int workers = std::max(1, plan.workers);

  SimResults results;
  for (std::size_t s_idx = 0; s_idx < scenarios.size(); ++s_idx) {
    const Scenario& scenario = *scenarios[s_idx];
    for (std::size_t n_idx = 0; n_idx < plan.sample_sizes.size(); ++n_idx) {
      const int n = plan.sample_sizes[n_idx];
      const auto start = std::chrono::steady_clock::now();

      std::vector<CellResult> cells(n_methods);
      for (int m = 0; m < n_methods; ++m) {
        cells[m].scenario_id = scenario.id;
        cells[m].method = plan.methods[m];
        cells[m].n_per_cohort = n;
        cells[m].estimates.setConstant(
            plan.n_reps, scenario.num_cohorts(),
            std::numeric_limits<double>::quiet_NaN());
        cells[m].ok.assign(plan.n_reps, 0);
      }
      std::vector<std::uint64_t> hashes(plan.n_reps, 0);
      std::vector<std::string> first_error(n_methods);
      std::mutex error_mutex;

      RngStream cell_rng = root.child(s_idx).child(n_idx);
      std::atomic<int> next_rep{0};
      auto run_reps = [&]() {
        for (;;) {
          const int rep = next_rep.fetch_add(1);
          if (rep >= plan.n_reps) {
            return;
          }
          RngStream trial_rng = cell_rng.child(rep);
          const TrialData trial = generate_trial(scenario, n, trial_rng);
          hashes[rep] = hash_trial(trial);
          for (int m = 0; m < n_methods; ++m) {
            // Method streams are addressed by the stable method id so an
            // estimate does not depend on which other methods were requested.
            RngStream method_rng = trial_rng.child(
                static_cast<std::uint64_t>(plan.methods[m]));
            try {
              cells[m].estimates.row(rep) =
                  run_estimator(plan.methods[m], trial, plan.configs,
                                plan.mcmc, method_rng)
                      .transpose();
              cells[m].ok[rep] = 1;
            } catch (const std::exception& e) {
              const std::scoped_lock lock(error_mutex);
              if (first_error[m].empty()) {
                first_error[m] = e.what();
              }
            }
          }
        }
      };

      std::vector<std::thread> pool;
      for (int w = 1; w < workers; ++w) {
        pool.emplace_back(run_reps);
      }
      run_reps();
      for (std::thread& t : pool) {
        t.join();
      }

      for (int m = 0; m < n_methods; ++m) {
        const int failures = cells[m].failures();
        if (failures > 0) {
          std::fprintf(stderr, "%s n=%d %s: %d/%d replications failed (%s)\n",
                       scenario.id.c_str(), n,
                       std::string(method_name(plan.methods[m])).c_str(),
                       failures, plan.n_reps, first_error[m].c_str());
        }
        if (failures > 0.01 * plan.n_reps) {
          throw std::runtime_error(
              "aborting: more than 1% of replications failed for method '" +
              std::string(method_name(plan.methods[m])) + "' on scenario " +
              scenario.id + " (first error: " + first_error[m] + ")");
        }
        results.metrics.push_back(compute_metrics(cells[m], scenario));
        results.cells.push_back(std::move(cells[m]));
      }

      std::uint64_t digest = 0xcbf29ce484222325ULL;
      for (std::uint64_t h : hashes) {
        digest = fold_digest(digest, h);
      }
      results.trial_digests.emplace_back(
          scenario.id + "|" + std::to_string(n), digest);

      const auto elapsed = std::chrono::duration<double>(
                               std::chrono::steady_clock::now() - start)
                               .count();
      std::fprintf(stderr, "%s n=%d: %d reps, %d methods, %.1f s\n",
                   scenario.id.c_str(), n, plan.n_reps, n_methods, elapsed);
    }
  }
  return results;
}

}  // namespace basket
