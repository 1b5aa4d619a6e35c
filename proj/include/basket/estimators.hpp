#pragma once

#include <Eigen/Dense>

#include "basket/mcmc.hpp"
#include "basket/rng.hpp"
#include "basket/special.hpp"
#include "basket/trial.hpp"

namespace basket {

struct GammaPrior {
  double shape = 1.0;
  double rate = 1.0;
};

struct InverseGammaPrior {
  double shape = 1.0;
  double scale = 1.0;
};

// Hierarchical logit model with exchangeable cohort log odds:
// theta_i ~ N(mu, sigma^2), mu ~ N(mu0, sigma0_sq), sigma^2 ~ IG(l1, l2).
struct BerryConfig {
  double mu0 = 0.0;
  double sigma0_sq = 100.0;
  double lambda1 = 0.0005;
  double lambda2 = 0.00005;
};

// Two-component mixture: with prior weight ex_weight the cohort log odds is
// exchangeable, theta_i ~ N(mu0, sigma0_sq) with sampled hyper-parameters;
// otherwise it keeps a fixed cohort-specific prior N(nex_mean, nex_var).
struct ExnexConfig {
  double ex_weight = 0.5;
  double mu0_mean = 0.0;
  double mu0_var = 10.0;
  double sigma0_halfnormal_scale = 1.0;
  double nex_mean = 0.0;
  double nex_var = 10.0;
};

// Exact Bayesian model averaging over all set partitions of the cohorts.
struct PsiodaConfig {
  BetaParams rate_prior{1.0, 1.0};
  double model_prior_exponent = 1.0;
};

// Divergence-weighted pooling of per-cohort Beta posteriors.
struct FujikawaConfig {
  BetaParams rate_prior{1.0, 1.0};
  double tau = 0.5;      // similarity threshold in [0, 1]
  double epsilon = 2.0;  // weight-sharpening exponent >= 0
};

// Hierarchical logit model with a distance-derived correlated cohort effect:
// theta_i = theta0 + eta_i + eps_i, eta ~ MVN(0, sigma^2 Omega),
// Omega_ij = exp(-phi d_ij^2) with d_ij the Hellinger distance between the
// standalone Beta(1 + r, 1 + n - r) posteriors.
struct JinConfig {
  double theta0_mean = 0.0;
  InverseGammaPrior sigma0_sq_prior{0.1, 0.1};
  InverseGammaPrior sigma_sq_prior{0.01, 0.01};
  InverseGammaPrior tau_sq_prior{0.01, 0.01};
  GammaPrior phi_prior{1.5, 1.0};
};

// Two-step cluster-then-borrow model: a Dirichlet-process mixture over the
// observed rates yields a co-clustering matrix C; each cohort is then
// estimated from a hierarchical fit whose per-cohort prior precision is
// tau1 * C(target, j).
struct ChenLeeConfig {
  double crp_alpha = 1e-60;
  double cluster_obs_var = 0.001;  // sigma_d^2 of rates within a cluster
  double base_mean = 0.2;
  double base_var = 10.0;
  double mu2 = 0.0;
  double tau2 = 0.1;  // precision of the mu1 hyper-prior
  GammaPrior tau1_prior{50.0, 10.0};
  int crp_iterations = 5000;
};

// Exact local borrowing within the highest-posterior partition.
struct LiuConfig {
  BetaParams rate_prior{1.0, 1.0};
  double delta = 0.0;  // model-prior exponent
};

struct MethodConfigs {
  BerryConfig berry;
  ExnexConfig exnex;
  PsiodaConfig psioda;
  FujikawaConfig fujikawa;
  JinConfig jin;
  ChenLeeConfig chen_lee;
  LiuConfig liu;
};

// Re-centers every method's prior on the given mean: Beta(1,1)-based methods
// move to Beta(2m, 2(1-m)) (total prior weight 2 preserved), logit-scale
// location parameters move to logit(m). All other parameters are unchanged.
MethodConfigs apply_prior_mean(const MethodConfigs& configs,
                               double prior_mean);

EstimateVector estimate_sample_proportion(const TrialData& data);

EstimateVector estimate_berry_bhm(const TrialData& data,
                                  const BerryConfig& cfg,
                                  const McmcConfig& mcmc, RngStream& rng);

EstimateVector estimate_exnex(const TrialData& data, const ExnexConfig& cfg,
                              const McmcConfig& mcmc, RngStream& rng);

EstimateVector estimate_psioda_bma(const TrialData& data,
                                   const PsiodaConfig& cfg);

EstimateVector estimate_fujikawa(const TrialData& data,
                                 const FujikawaConfig& cfg);

EstimateVector estimate_jin_cbhm(const TrialData& data, const JinConfig& cfg,
                                 const McmcConfig& mcmc, RngStream& rng);

// Pairwise co-clustering frequencies from the Dirichlet-process Gibbs scan;
// symmetric with unit diagonal, entries in [0, 1].
Eigen::MatrixXd crp_cocluster_matrix(const TrialData& data,
                                     const ChenLeeConfig& cfg, RngStream& rng);

EstimateVector estimate_chen_lee_bchm(const TrialData& data,
                                      const ChenLeeConfig& cfg,
                                      const McmcConfig& mcmc, RngStream& rng);

EstimateVector estimate_liu_local_mem(const TrialData& data,
                                      const LiuConfig& cfg);

// Dispatch by method id; MCMC-free methods ignore the chain config and rng.
EstimateVector run_estimator(MethodId method, const TrialData& data,
                             const MethodConfigs& configs,
                             const McmcConfig& mcmc, RngStream& rng);

}  // namespace basket
