#include <stdexcept>

#include "basket/estimators.hpp"
#include "est_common.hpp"

namespace basket {

namespace {

class BerryModel final : public GibbsModel {
 public:
  BerryModel(const TrialData& data, const BerryConfig& cfg)
      : data_(data), cfg_(cfg), k_(data.num_cohorts()) {}

  int state_dim() const override { return k_ + 2; }
  int scale_count() const override { return k_; }

  // State layout: [theta_1..theta_K, mu, sigma_sq].
  Eigen::VectorXd initial_state() const override {
    Eigen::VectorXd state(k_ + 2);
    for (int i = 0; i < k_; ++i) {
      state[i] = detail::smoothed_logit(data_.cohorts[i]);
    }
    state[k_] = cfg_.mu0;
    state[k_ + 1] = 1.0;  // IG(lambda1, lambda2) has no mean at these shapes
    return state;
  }

  void sweep(Eigen::VectorXd& state, const Eigen::VectorXd& scales,
             Eigen::ArrayXi& accepts, Eigen::ArrayXi& attempts,
             RngStream& rng) const override {
    const double mu = state[k_];
    const double sigma_sq = state[k_ + 1];
    for (int i = 0; i < k_; ++i) {
      const CohortData& c = data_.cohorts[i];
      auto log_target = [&](double theta) {
        return detail::binom_logit_loglik(c.r, c.n, theta) +
               detail::normal_logpdf(theta, mu, sigma_sq);
      };
      const auto [theta, accepted] =
          mh_logit_step(state[i], log_target, scales[i], rng);
      state[i] = theta;
      ++attempts[i];
      accepts[i] += accepted ? 1 : 0;
    }
    state[k_] = gibbs_normal_mean(state.head(k_), sigma_sq, cfg_.mu0,
                                  cfg_.sigma0_sq, rng);
    const Eigen::VectorXd residuals = state.head(k_).array() - state[k_];
    state[k_ + 1] =
        gibbs_inverse_gamma_var(residuals, cfg_.lambda1, cfg_.lambda2, rng);
  }

  Eigen::VectorXd report(const Eigen::VectorXd& state) const override {
    Eigen::VectorXd rates(k_);
    for (int i = 0; i < k_; ++i) {
      rates[i] = expit(state[i]);
    }
    return rates;
  }
  int report_dim() const override { return k_; }

 private:
  const TrialData& data_;
  const BerryConfig& cfg_;
  int k_;
};

void check_config(const BerryConfig& cfg) {
  if (!(cfg.sigma0_sq > 0.0) || !(cfg.lambda1 > 0.0) || !(cfg.lambda2 > 0.0)) {
    throw std::invalid_argument(
        "berry: sigma0_sq, lambda1 and lambda2 must be positive");
  }
}

}  // namespace

EstimateVector estimate_berry_bhm(const TrialData& data,
                                  const BerryConfig& cfg,
                                  const McmcConfig& mcmc, RngStream& rng) {
  validate_trial(data);
  check_config(cfg);
  BerryModel model(data, cfg);
  return run_chain(model, mcmc, rng).posterior_mean;
}

}  // namespace basket
