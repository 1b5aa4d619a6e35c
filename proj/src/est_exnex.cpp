#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "basket/estimators.hpp"
#include "est_common.hpp"

namespace basket {

namespace {

double half_normal_logpdf(double x, double scale) {
  if (x <= 0.0) {
    return -std::numeric_limits<double>::infinity();
  }
  return 0.5 * std::log(2.0 / std::numbers::pi) - std::log(scale) -
         0.5 * x * x / (scale * scale);
}

class ExnexModel final : public GibbsModel {
 public:
  ExnexModel(const TrialData& data, const ExnexConfig& cfg)
      : data_(data), cfg_(cfg), k_(data.num_cohorts()) {}

  int state_dim() const override { return 2 * k_ + 2; }
  // One scale per theta plus one for the log-scale sigma0_sq move.
  int scale_count() const override { return k_ + 1; }

  // State layout: [theta_1..theta_K, mu0, sigma0_sq, z_1..z_K] where z_i = 1
  // marks the exchangeable component.
  Eigen::VectorXd initial_state() const override {
    Eigen::VectorXd state(2 * k_ + 2);
    for (int i = 0; i < k_; ++i) {
      state[i] = detail::smoothed_logit(data_.cohorts[i]);
      state[k_ + 2 + i] = cfg_.ex_weight >= 0.5 ? 1.0 : 0.0;
    }
    state[k_] = cfg_.mu0_mean;
    // Half-normal prior mean.
    state[k_ + 1] =
        cfg_.sigma0_halfnormal_scale * std::sqrt(2.0 / std::numbers::pi);
    return state;
  }

  void sweep(Eigen::VectorXd& state, const Eigen::VectorXd& scales,
             Eigen::ArrayXi& accepts, Eigen::ArrayXi& attempts,
             RngStream& rng) const override {
    double mu0 = state[k_];
    double sigma0_sq = state[k_ + 1];

    // Component indicators: exact conditional Bernoulli.
    for (int i = 0; i < k_; ++i) {
      double& z = state[k_ + 2 + i];
      if (cfg_.ex_weight >= 1.0) {
        z = 1.0;
      } else if (cfg_.ex_weight <= 0.0) {
        z = 0.0;
      } else {
        const double log_ex =
            std::log(cfg_.ex_weight) +
            detail::normal_logpdf(state[i], mu0, sigma0_sq);
        const double log_nex =
            std::log1p(-cfg_.ex_weight) +
            detail::normal_logpdf(state[i], cfg_.nex_mean, cfg_.nex_var);
        const double p_ex = expit(log_ex - log_nex);
        z = rng.next_double() < p_ex ? 1.0 : 0.0;
      }
    }

    for (int i = 0; i < k_; ++i) {
      const CohortData& c = data_.cohorts[i];
      const bool exchangeable = state[k_ + 2 + i] > 0.5;
      const double prior_mean = exchangeable ? mu0 : cfg_.nex_mean;
      const double prior_var = exchangeable ? sigma0_sq : cfg_.nex_var;
      auto log_target = [&](double theta) {
        return detail::binom_logit_loglik(c.r, c.n, theta) +
               detail::normal_logpdf(theta, prior_mean, prior_var);
      };
      const auto [theta, accepted] =
          mh_logit_step(state[i], log_target, scales[i], rng);
      state[i] = theta;
      ++attempts[i];
      accepts[i] += accepted ? 1 : 0;
    }

    std::vector<double> ex_thetas;
    ex_thetas.reserve(k_);
    for (int i = 0; i < k_; ++i) {
      if (state[k_ + 2 + i] > 0.5) {
        ex_thetas.push_back(state[i]);
      }
    }

    if (ex_thetas.empty()) {
      // No exchangeable members: the conditionals are the priors.
      state[k_] = draw_normal(cfg_.mu0_mean, cfg_.mu0_var, rng);
      state[k_ + 1] = draw_half_normal(cfg_.sigma0_halfnormal_scale, rng);
      return;
    }

    const Eigen::Map<const Eigen::VectorXd> ex(ex_thetas.data(),
                                               ex_thetas.size());
    mu0 = gibbs_normal_mean(ex, sigma0_sq, cfg_.mu0_mean, cfg_.mu0_var, rng);
    state[k_] = mu0;

    // sigma0_sq carries a half-normal prior, so it moves by Metropolis on the
    // log scale (the +s term is the Jacobian).
    auto log_target = [&](double s) {
      const double var = std::exp(s);
      double lp = half_normal_logpdf(var, cfg_.sigma0_halfnormal_scale) + s;
      for (double theta : ex_thetas) {
        lp += detail::normal_logpdf(theta, mu0, var);
      }
      return lp;
    };
    const auto [log_var, accepted] =
        mh_logit_step(std::log(sigma0_sq), log_target, scales[k_], rng);
    state[k_ + 1] = std::exp(log_var);
    ++attempts[k_];
    accepts[k_] += accepted ? 1 : 0;
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
  const ExnexConfig& cfg_;
  int k_;
};

void check_config(const ExnexConfig& cfg) {
  if (!(cfg.ex_weight >= 0.0) || !(cfg.ex_weight <= 1.0)) {
    throw std::invalid_argument("exnex: ex_weight must lie in [0, 1]");
  }
  if (!(cfg.mu0_var > 0.0) || !(cfg.nex_var > 0.0) ||
      !(cfg.sigma0_halfnormal_scale > 0.0)) {
    throw std::invalid_argument("exnex: variances and the half-normal scale "
                                "must be positive");
  }
}

}  // namespace

EstimateVector estimate_exnex(const TrialData& data, const ExnexConfig& cfg,
                              const McmcConfig& mcmc, RngStream& rng) {
  validate_trial(data);
  check_config(cfg);
  ExnexModel model(data, cfg);
  return run_chain(model, mcmc, rng).posterior_mean;
}

}  // namespace basket
