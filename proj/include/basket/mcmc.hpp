#pragma once

#include <cmath>
#include <stdexcept>
#include <utility>

#include <Eigen/Dense>

#include "basket/rng.hpp"
#include "basket/sampling.hpp"

namespace basket {

struct McmcConfig {
  int n_burn = 2000;
  int n_keep = 8000;
  int thin = 1;
  // Proposal scales are re-tuned once per window during burn-in only.
  int adapt_window = 50;
  double target_accept = 0.44;
};

void check_mcmc_config(const McmcConfig& config);

struct ChainSummary {
  Eigen::VectorXd posterior_mean;  // of the model's report vector
  Eigen::VectorXd posterior_sd;
  Eigen::VectorXd accept_rate;     // per proposal scale, post burn-in
  Eigen::MatrixXd kept_draws;      // one row per retained draw when requested
};

// One symmetric normal-proposal Metropolis step; satisfies detailed balance
// with respect to exp(log_target). Named for its primary use on logit-scale
// parameters but valid for any real-valued target.
template <typename LogTarget>
std::pair<double, bool> mh_logit_step(double value, LogTarget&& log_target,
                                      double scale, RngStream& rng) {
  const double lp_value = log_target(value);
  if (!std::isfinite(lp_value)) {
    throw std::runtime_error(
        "mh_logit_step: log target is not finite at the current state");
  }
  const double proposal = value + scale * draw_standard_normal(rng);
  const double lp_proposal = log_target(proposal);
  const double log_u = std::log(rng.next_double());
  if (log_u < lp_proposal - lp_value) {
    return {proposal, true};
  }
  return {value, false};
}

// Exact conjugate draw of a normal mean with known likelihood variance.
double gibbs_normal_mean(const Eigen::Ref<const Eigen::VectorXd>& values,
                         double likelihood_var, double prior_mean,
                         double prior_var, RngStream& rng);

// As above with a per-value precision (heteroscedastic likelihood).
double gibbs_normal_mean_weighted(
    const Eigen::Ref<const Eigen::VectorXd>& values,
    const Eigen::Ref<const Eigen::VectorXd>& precisions, double prior_mean,
    double prior_var, RngStream& rng);

// Exact conjugate draw of a normal variance with known mean:
// IG(prior_shape + m/2, prior_scale + sum(residuals^2)/2).
double gibbs_inverse_gamma_var(
    const Eigen::Ref<const Eigen::VectorXd>& residuals, double prior_shape,
    double prior_scale, RngStream& rng);

// A full-conditional update specification. The state vector belongs to the
// model; run_chain owns proposal scales, adaptation and summaries.
class GibbsModel {
 public:
  virtual ~GibbsModel() = default;

  virtual int state_dim() const = 0;
  virtual int scale_count() const = 0;
  virtual Eigen::VectorXd initial_state() const = 0;

  // One sweep of conditional updates in place. Metropolis moves must use
  // scales[k] for their k-th proposal scale and count attempts/accepts there.
  virtual void sweep(Eigen::VectorXd& state, const Eigen::VectorXd& scales,
                     Eigen::ArrayXi& accepts, Eigen::ArrayXi& attempts,
                     RngStream& rng) const = 0;

  // Monitored functionals of the state; summaries are over this vector.
  virtual Eigen::VectorXd report(const Eigen::VectorXd& state) const {
    return state;
  }
  virtual int report_dim() const { return state_dim(); }
};

// Runs n_burn + n_keep sweeps, adapting proposal scales toward target_accept
// during burn-in only (Robbins-Monro on the log scale) and retaining every
// thin-th post-burn-in state. Throws on a non-finite state, naming the sweep.
ChainSummary run_chain(const GibbsModel& model, const McmcConfig& config,
                       RngStream& rng, bool keep_draws = false);

}  // namespace basket
