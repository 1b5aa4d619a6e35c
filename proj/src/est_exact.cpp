#include <cmath>
#include <stdexcept>

#include "basket/divergence.hpp"
#include "basket/estimators.hpp"
#include "basket/partition.hpp"

namespace basket {

MethodConfigs apply_prior_mean(const MethodConfigs& configs,
                               double prior_mean) {
  if (!(prior_mean > 0.0) || !(prior_mean < 1.0)) {
    throw std::domain_error("prior_mean must lie in the open interval (0, 1)");
  }
  MethodConfigs out = configs;
  const BetaParams rate_prior{2.0 * prior_mean, 2.0 * (1.0 - prior_mean)};
  out.psioda.rate_prior = rate_prior;
  out.fujikawa.rate_prior = rate_prior;
  out.liu.rate_prior = rate_prior;
  const double location = logit(prior_mean);
  out.berry.mu0 = location;
  out.exnex.mu0_mean = location;
  out.exnex.nex_mean = location;
  out.jin.theta0_mean = location;
  out.chen_lee.mu2 = location;
  return out;
}

EstimateVector estimate_sample_proportion(const TrialData& data) {
  validate_trial(data);
  EstimateVector estimates(data.num_cohorts());
  for (int i = 0; i < data.num_cohorts(); ++i) {
    if (data.cohorts[i].n == 0) {
      throw std::invalid_argument(
          "sample proportion is undefined for an empty cohort");
    }
    estimates[i] = static_cast<double>(data.cohorts[i].r) / data.cohorts[i].n;
  }
  return estimates;
}

EstimateVector estimate_psioda_bma(const TrialData& data,
                                   const PsiodaConfig& cfg) {
  validate_trial(data);
  check_beta_params(cfg.rate_prior);
  const PartitionPosterior post =
      partition_posterior(data, cfg.rate_prior, cfg.model_prior_exponent);

  const int k = data.num_cohorts();
  EstimateVector estimates = EstimateVector::Zero(k);
  const double a = cfg.rate_prior.alpha;
  const double b = cfg.rate_prior.beta;
  for (std::size_t m = 0; m < post.partitions.size(); ++m) {
    const Partition& part = post.partitions[m];
    std::vector<int> block_r(part.num_blocks, 0);
    std::vector<int> block_n(part.num_blocks, 0);
    for (int i = 0; i < k; ++i) {
      block_r[part.assignment[i]] += data.cohorts[i].r;
      block_n[part.assignment[i]] += data.cohorts[i].n;
    }
    const double weight = post.posterior_prob[static_cast<int>(m)];
    for (int i = 0; i < k; ++i) {
      const int block = part.assignment[i];
      estimates[i] +=
          weight * (a + block_r[block]) / (a + b + block_n[block]);
    }
  }
  return estimates;
}

EstimateVector estimate_fujikawa(const TrialData& data,
                                 const FujikawaConfig& cfg) {
  validate_trial(data);
  check_beta_params(cfg.rate_prior);
  if (!(cfg.tau >= 0.0) || !(cfg.tau <= 1.0)) {
    throw std::invalid_argument("fujikawa: tau must lie in [0, 1]");
  }
  if (!(cfg.epsilon >= 0.0)) {
    throw std::invalid_argument("fujikawa: epsilon must be >= 0");
  }

  const int k = data.num_cohorts();
  std::vector<BetaParams> posteriors(k);
  for (int i = 0; i < k; ++i) {
    posteriors[i] = {cfg.rate_prior.alpha + data.cohorts[i].r,
                     cfg.rate_prior.beta + data.cohorts[i].n -
                         data.cohorts[i].r};
  }

  Eigen::MatrixXd weights = Eigen::MatrixXd::Identity(k, k);
  for (int i = 0; i < k; ++i) {
    for (int j = i + 1; j < k; ++j) {
      const double similarity = 1.0 - jsd_beta(posteriors[i], posteriors[j]);
      const double w =
          similarity > cfg.tau ? std::pow(similarity, cfg.epsilon) : 0.0;
      weights(i, j) = w;
      weights(j, i) = w;
    }
  }

  EstimateVector estimates(k);
  for (int i = 0; i < k; ++i) {
    double a_tilde = 0.0;
    double b_tilde = 0.0;
    for (int j = 0; j < k; ++j) {
      a_tilde += weights(i, j) * posteriors[j].alpha;
      b_tilde += weights(i, j) * posteriors[j].beta;
    }
    estimates[i] = a_tilde / (a_tilde + b_tilde);
  }
  return estimates;
}

EstimateVector estimate_liu_local_mem(const TrialData& data,
                                      const LiuConfig& cfg) {
  validate_trial(data);
  check_beta_params(cfg.rate_prior);
  const PartitionPosterior post =
      partition_posterior(data, cfg.rate_prior, cfg.delta);
  const Partition& map = map_partition(post);

  const int k = data.num_cohorts();
  std::vector<int> block_r(map.num_blocks, 0);
  std::vector<int> block_n(map.num_blocks, 0);
  for (int i = 0; i < k; ++i) {
    block_r[map.assignment[i]] += data.cohorts[i].r;
    block_n[map.assignment[i]] += data.cohorts[i].n;
  }
  const double a = cfg.rate_prior.alpha;
  const double b = cfg.rate_prior.beta;
  EstimateVector estimates(k);
  for (int i = 0; i < k; ++i) {
    const int block = map.assignment[i];
    estimates[i] = (a + block_r[block]) / (a + b + block_n[block]);
  }
  return estimates;
}

EstimateVector run_estimator(MethodId method, const TrialData& data,
                             const MethodConfigs& configs,
                             const McmcConfig& mcmc, RngStream& rng) {
  switch (method) {
    case MethodId::SampleProportion:
      return estimate_sample_proportion(data);
    case MethodId::BerryBhm:
      return estimate_berry_bhm(data, configs.berry, mcmc, rng);
    case MethodId::Exnex:
      return estimate_exnex(data, configs.exnex, mcmc, rng);
    case MethodId::PsiodaBma:
      return estimate_psioda_bma(data, configs.psioda);
    case MethodId::Fujikawa:
      return estimate_fujikawa(data, configs.fujikawa);
    case MethodId::JinCbhm:
      return estimate_jin_cbhm(data, configs.jin, mcmc, rng);
    case MethodId::ChenLeeBchm:
      return estimate_chen_lee_bchm(data, configs.chen_lee, mcmc, rng);
    case MethodId::LiuLocalMem:
      return estimate_liu_local_mem(data, configs.liu);
  }
  throw std::logic_error("unknown MethodId");
}

}  // namespace basket
