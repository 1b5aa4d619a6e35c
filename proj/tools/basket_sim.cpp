#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "basket/report.hpp"
#include "basket/run_config.hpp"
#include "basket/simulate.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot read config file '" + path + "'");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    out += (i == 0 ? "" : ",") + items[i];
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Monte-Carlo simulator for basket-trial response-rate "
               "estimators"};
  app.set_version_flag("--version",
                       "basket_sim " + std::string(basket::kVersion));

  std::string config_path;
  std::vector<std::string> scenarios;
  std::vector<std::string> methods;
  std::vector<std::string> sample_sizes;
  int reps = -1;
  long long seed = -1;
  double prior_mean = -1.0;
  std::string out_dir;
  int workers = -1;
  int mcmc_iters = -1;
  int mcmc_burnin = -1;

  app.add_option("--config", config_path, "run configuration file");
  app.add_option("--scenarios", scenarios,
                 "scenario ids (comma or space separated)")
      ->delimiter(',');
  app.add_option("--methods", methods, "estimation methods")->delimiter(',');
  app.add_option("--sample-sizes", sample_sizes, "patients per cohort")
      ->delimiter(',');
  app.add_option("--reps", reps, "replications per scenario/sample size");
  app.add_option("--seed", seed, "master seed");
  app.add_option("--prior-mean", prior_mean,
                 "prior mean applied to every method (0, 1)");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--workers", workers, "worker thread count");
  app.add_option("--mcmc-iters", mcmc_iters, "retained MCMC sweeps");
  app.add_option("--mcmc-burnin", mcmc_burnin, "burn-in MCMC sweeps");

  CLI11_PARSE(app, argc, argv);

  try {
    std::string text;
    if (!config_path.empty()) {
      text = read_file(config_path);
    }

    std::map<std::string, std::string> overrides;
    if (!scenarios.empty()) {
      overrides["scenarios"] = join(scenarios);
    }
    if (!methods.empty()) {
      overrides["methods"] = join(methods);
    }
    if (!sample_sizes.empty()) {
      overrides["sample_sizes"] = join(sample_sizes);
    }
    if (reps >= 0) {
      overrides["reps"] = std::to_string(reps);
    }
    if (seed >= 0) {
      overrides["seed"] = std::to_string(seed);
    }
    if (prior_mean >= 0.0) {
      overrides["prior_mean"] = std::to_string(prior_mean);
    }
    if (!out_dir.empty()) {
      overrides["out"] = out_dir;
    }
    if (workers >= 0) {
      overrides["workers"] = std::to_string(workers);
    }
    if (mcmc_iters >= 0) {
      overrides["mcmc.n_keep"] = std::to_string(mcmc_iters);
    }
    if (mcmc_burnin >= 0) {
      overrides["mcmc.n_burn"] = std::to_string(mcmc_burnin);
    }

    const basket::RunConfig config = basket::parse_config(text, overrides);
    const basket::SimResults results = basket::run_plan(config.plan);
    basket::emit_results(results, config, config.out_dir);
    std::fprintf(stderr, "results written to %s\n", config.out_dir.c_str());
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
