#include "basket/mcmc.hpp"

#include <algorithm>
#include <string>

namespace basket {

void check_mcmc_config(const McmcConfig& config) {
  if (config.n_burn < 0) {
    throw std::invalid_argument("mcmc: n_burn must be >= 0");
  }
  if (config.n_keep < 1) {
    throw std::invalid_argument("mcmc: n_keep must be >= 1");
  }
  if (config.thin < 1) {
    throw std::invalid_argument("mcmc: thin must be >= 1");
  }
  if (config.adapt_window < 1) {
    throw std::invalid_argument("mcmc: adapt_window must be >= 1");
  }
  if (!(config.target_accept > 0.0) || !(config.target_accept < 1.0)) {
    throw std::invalid_argument("mcmc: target_accept must lie in (0, 1)");
  }
}

double gibbs_normal_mean(const Eigen::Ref<const Eigen::VectorXd>& values,
                         double likelihood_var, double prior_mean,
                         double prior_var, RngStream& rng) {
  if (values.size() == 0) {
    throw std::invalid_argument("gibbs_normal_mean requires values");
  }
  if (!(likelihood_var > 0.0) || !(prior_var > 0.0)) {
    throw std::invalid_argument("gibbs_normal_mean requires positive variances");
  }
  const double precision =
      1.0 / prior_var + static_cast<double>(values.size()) / likelihood_var;
  const double v = 1.0 / precision;
  const double mean = v * (prior_mean / prior_var + values.sum() / likelihood_var);
  return draw_normal(mean, v, rng);
}

double gibbs_normal_mean_weighted(
    const Eigen::Ref<const Eigen::VectorXd>& values,
    const Eigen::Ref<const Eigen::VectorXd>& precisions, double prior_mean,
    double prior_var, RngStream& rng) {
  if (values.size() == 0 || values.size() != precisions.size()) {
    throw std::invalid_argument(
        "gibbs_normal_mean_weighted requires matching values and precisions");
  }
  if (!(prior_var > 0.0) || (precisions.array() < 0.0).any()) {
    throw std::invalid_argument(
        "gibbs_normal_mean_weighted requires positive prior variance and "
        "nonnegative precisions");
  }
  const double precision = 1.0 / prior_var + precisions.sum();
  const double v = 1.0 / precision;
  const double mean =
      v * (prior_mean / prior_var + precisions.dot(values));
  return draw_normal(mean, v, rng);
}

double gibbs_inverse_gamma_var(
    const Eigen::Ref<const Eigen::VectorXd>& residuals, double prior_shape,
    double prior_scale, RngStream& rng) {
  if (residuals.size() == 0) {
    throw std::invalid_argument("gibbs_inverse_gamma_var requires residuals");
  }
  if (!(prior_shape > 0.0) || !(prior_scale > 0.0)) {
    throw std::invalid_argument(
        "gibbs_inverse_gamma_var requires positive prior parameters");
  }
  const double shape = prior_shape + 0.5 * static_cast<double>(residuals.size());
  const double scale = prior_scale + 0.5 * residuals.squaredNorm();
  return draw_inverse_gamma(shape, scale, rng);
}

ChainSummary run_chain(const GibbsModel& model, const McmcConfig& config,
                       RngStream& rng, bool keep_draws) {
  check_mcmc_config(config);

  Eigen::VectorXd state = model.initial_state();
  Eigen::VectorXd scales = Eigen::VectorXd::Ones(model.scale_count());
  Eigen::ArrayXi accepts = Eigen::ArrayXi::Zero(model.scale_count());
  Eigen::ArrayXi attempts = Eigen::ArrayXi::Zero(model.scale_count());

  const int retained_count = config.n_keep / config.thin;
  const int report_dim = model.report_dim();

  ChainSummary summary;
  summary.posterior_mean = Eigen::VectorXd::Zero(report_dim);
  summary.posterior_sd = Eigen::VectorXd::Zero(report_dim);
  if (keep_draws) {
    summary.kept_draws.resize(retained_count, report_dim);
  }

  Eigen::VectorXd mean = Eigen::VectorXd::Zero(report_dim);
  Eigen::VectorXd m2 = Eigen::VectorXd::Zero(report_dim);

  auto check_state = [&](int sweep_index) {
    if (!state.allFinite()) {
      int bad = 0;
      for (int j = 0; j < state.size(); ++j) {
        if (!std::isfinite(state[j])) {
          bad = j;
          break;
        }
      }
      throw std::runtime_error("mcmc: non-finite state at sweep " +
                               std::to_string(sweep_index) + ", parameter " +
                               std::to_string(bad));
    }
  };

  int adapt_round = 0;
  for (int sweep = 0; sweep < config.n_burn; ++sweep) {
    model.sweep(state, scales, accepts, attempts, rng);
    check_state(sweep);
    if ((sweep + 1) % config.adapt_window == 0) {
      ++adapt_round;
      const double gain = 1.0 / std::sqrt(static_cast<double>(adapt_round));
      for (int k = 0; k < scales.size(); ++k) {
        if (attempts[k] > 0) {
          const double rate =
              static_cast<double>(accepts[k]) / attempts[k];
          const double log_scale =
              std::log(scales[k]) + gain * (rate - config.target_accept);
          scales[k] = std::clamp(std::exp(log_scale), 1e-6, 1e3);
        }
      }
      accepts.setZero();
      attempts.setZero();
    }
  }

  // Adaptation freezes here; acceptance counters restart for reporting.
  accepts.setZero();
  attempts.setZero();

  int retained = 0;
  for (int sweep = 0; sweep < config.n_keep; ++sweep) {
    model.sweep(state, scales, accepts, attempts, rng);
    check_state(config.n_burn + sweep);
    if ((sweep + 1) % config.thin == 0 && retained < retained_count) {
      const Eigen::VectorXd report = model.report(state);
      ++retained;
      const Eigen::VectorXd delta = report - mean;
      mean += delta / retained;
      m2.array() += delta.array() * (report - mean).array();
      if (keep_draws) {
        summary.kept_draws.row(retained - 1) = report.transpose();
      }
    }
  }

  summary.posterior_mean = mean;
  if (retained > 1) {
    summary.posterior_sd = (m2 / (retained - 1)).cwiseSqrt();
  }
  summary.accept_rate = Eigen::VectorXd::Zero(model.scale_count());
  for (int k = 0; k < scales.size(); ++k) {
    if (attempts[k] > 0) {
      summary.accept_rate[k] =
          static_cast<double>(accepts[k]) / attempts[k];
    }
  }
  return summary;
}

}  // namespace basket
