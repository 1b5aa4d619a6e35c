#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "basket/estimators.hpp"
#include "est_common.hpp"

namespace basket {

namespace {

// Similarities below this floor still enter the second-stage fit with a tiny
// positive precision; a zero precision would make the cohort's prior
// improper.
constexpr double kSimilarityFloor = 1e-4;

void check_config(const ChenLeeConfig& cfg) {
  if (!(cfg.crp_alpha > 0.0) || !(cfg.cluster_obs_var > 0.0) ||
      !(cfg.base_var > 0.0) || !(cfg.tau2 > 0.0) ||
      !(cfg.tau1_prior.shape > 0.0) || !(cfg.tau1_prior.rate > 0.0)) {
    throw std::invalid_argument(
        "chen_lee: variances, precisions and alpha must be positive");
  }
  if (cfg.crp_iterations < 10) {
    throw std::invalid_argument("chen_lee: crp_iterations must be >= 10");
  }
}

// Second-stage hierarchical fit: cohort j's log odds carries prior
// N(mu1, 1 / (tau1 * m_j)) with m_j its mean co-clustering similarity to the
// other cohorts, so tightly clustered cohorts borrow strongly through the
// shared center while isolated ones keep a loose prior.
class ChenLeeFitModel final : public GibbsModel {
 public:
  ChenLeeFitModel(const TrialData& data, const ChenLeeConfig& cfg,
                  Eigen::VectorXd similarity)
      : data_(data),
        cfg_(cfg),
        similarity_(std::move(similarity)),
        k_(data.num_cohorts()) {}

  int state_dim() const override { return k_ + 2; }
  int scale_count() const override { return k_; }

  // State layout: [theta_1..theta_K, mu1, tau1].
  Eigen::VectorXd initial_state() const override {
    Eigen::VectorXd state(k_ + 2);
    for (int i = 0; i < k_; ++i) {
      state[i] = detail::smoothed_logit(data_.cohorts[i]);
    }
    state[k_] = cfg_.mu2;
    state[k_ + 1] = cfg_.tau1_prior.shape / cfg_.tau1_prior.rate;
    return state;
  }

  void sweep(Eigen::VectorXd& state, const Eigen::VectorXd& scales,
             Eigen::ArrayXi& accepts, Eigen::ArrayXi& attempts,
             RngStream& rng) const override {
    const double mu1 = state[k_];
    const double tau1 = state[k_ + 1];

    for (int i = 0; i < k_; ++i) {
      const CohortData& c = data_.cohorts[i];
      const double prior_var = 1.0 / (tau1 * similarity_[i]);
      auto log_target = [&](double theta) {
        return detail::binom_logit_loglik(c.r, c.n, theta) +
               detail::normal_logpdf(theta, mu1, prior_var);
      };
      const auto [theta, accepted] =
          mh_logit_step(state[i], log_target, scales[i], rng);
      state[i] = theta;
      ++attempts[i];
      accepts[i] += accepted ? 1 : 0;
    }

    const Eigen::VectorXd precisions = tau1 * similarity_;
    state[k_] = gibbs_normal_mean_weighted(state.head(k_), precisions,
                                           cfg_.mu2, 1.0 / cfg_.tau2, rng);

    const Eigen::ArrayXd residual_sq =
        (state.head(k_).array() - state[k_]).square() * similarity_.array();
    state[k_ + 1] = draw_gamma(cfg_.tau1_prior.shape + 0.5 * k_,
                               cfg_.tau1_prior.rate + 0.5 * residual_sq.sum(),
                               rng);
  }

  // Report the log odds; the point estimate back-transforms their posterior
  // mean, matching the reference estimator's center-of-log-odds convention.
  Eigen::VectorXd report(const Eigen::VectorXd& state) const override {
    return state.head(k_);
  }
  int report_dim() const override { return k_; }

 private:
  const TrialData& data_;
  const ChenLeeConfig& cfg_;
  Eigen::VectorXd similarity_;
  int k_;
};

}  // namespace

Eigen::MatrixXd crp_cocluster_matrix(const TrialData& data,
                                     const ChenLeeConfig& cfg,
                                     RngStream& rng) {
  validate_trial(data);
  check_config(cfg);
  const int k = data.num_cohorts();
  Eigen::VectorXd rates(k);
  for (int i = 0; i < k; ++i) {
    if (data.cohorts[i].n == 0) {
      throw std::invalid_argument(
          "chen_lee: clustering needs at least one patient per cohort");
    }
    rates[i] = static_cast<double>(data.cohorts[i].r) / data.cohorts[i].n;
  }

  // Start from singletons: with a near-zero concentration the scan is
  // agglomerative (opening a cluster is essentially forbidden), so clusters
  // can only form by merging where the data supports it. A merged start
  // could never split again at alpha ~ 1e-60.
  std::vector<int> assignment(k);
  for (int i = 0; i < k; ++i) {
    assignment[i] = i;
  }
  const int burn = cfg.crp_iterations / 5;
  const int total = burn + cfg.crp_iterations;

  Eigen::MatrixXd together = Eigen::MatrixXd::Zero(k, k);
  std::vector<double> log_weights;
  std::vector<int> labels;

  for (int sweep = 0; sweep < total; ++sweep) {
    for (int i = 0; i < k; ++i) {
      // Cluster statistics excluding cohort i.
      log_weights.clear();
      labels.clear();
      for (int j = 0; j < k; ++j) {
        if (j == i) {
          continue;
        }
        if (std::find(labels.begin(), labels.end(), assignment[j]) ==
            labels.end()) {
          labels.push_back(assignment[j]);
        }
      }
      for (int label : labels) {
        int count = 0;
        double sum = 0.0;
        for (int j = 0; j < k; ++j) {
          if (j != i && assignment[j] == label) {
            ++count;
            sum += rates[j];
          }
        }
        // Posterior predictive of the cluster mean under the normal base
        // measure with known observation variance.
        const double post_var =
            1.0 / (1.0 / cfg.base_var + count / cfg.cluster_obs_var);
        const double post_mean =
            post_var *
            (cfg.base_mean / cfg.base_var + sum / cfg.cluster_obs_var);
        log_weights.push_back(
            std::log(static_cast<double>(count)) +
            detail::normal_logpdf(rates[i], post_mean,
                                  cfg.cluster_obs_var + post_var));
      }
      // Opening a new cluster.
      int fresh = 0;
      while (std::find(labels.begin(), labels.end(), fresh) != labels.end()) {
        ++fresh;
      }
      labels.push_back(fresh);
      log_weights.push_back(
          std::log(cfg.crp_alpha) +
          detail::normal_logpdf(rates[i], cfg.base_mean,
                                cfg.cluster_obs_var + cfg.base_var));

      const double max_lw =
          *std::max_element(log_weights.begin(), log_weights.end());
      double norm = 0.0;
      for (double& lw : log_weights) {
        lw = std::exp(lw - max_lw);
        norm += lw;
      }
      double u = rng.next_double() * norm;
      std::size_t pick = 0;
      for (; pick + 1 < log_weights.size(); ++pick) {
        u -= log_weights[pick];
        if (u <= 0.0) {
          break;
        }
      }
      assignment[i] = labels[pick];
    }

    if (sweep >= burn) {
      for (int i = 0; i < k; ++i) {
        for (int j = i + 1; j < k; ++j) {
          if (assignment[i] == assignment[j]) {
            together(i, j) += 1.0;
          }
        }
      }
    }
  }

  Eigen::MatrixXd c = Eigen::MatrixXd::Identity(k, k);
  const double kept = static_cast<double>(total - burn);
  for (int i = 0; i < k; ++i) {
    for (int j = i + 1; j < k; ++j) {
      const double frequency = together(i, j) / kept;
      c(i, j) = frequency;
      c(j, i) = frequency;
    }
  }
  return c;
}

EstimateVector estimate_chen_lee_bchm(const TrialData& data,
                                      const ChenLeeConfig& cfg,
                                      const McmcConfig& mcmc, RngStream& rng) {
  validate_trial(data);
  check_config(cfg);
  RngStream crp_rng = rng.child(0);
  const Eigen::MatrixXd cocluster = crp_cocluster_matrix(data, cfg, crp_rng);

  Eigen::VectorXd similarity =
      cocluster.rowwise().mean().cwiseMax(kSimilarityFloor);
  ChenLeeFitModel model(data, cfg, std::move(similarity));
  RngStream fit_rng = rng.child(1);
  const Eigen::VectorXd log_odds_mean =
      run_chain(model, mcmc, fit_rng).posterior_mean;
  EstimateVector estimates(data.num_cohorts());
  for (int i = 0; i < data.num_cohorts(); ++i) {
    estimates[i] = expit(log_odds_mean[i]);
  }
  return estimates;
}

}  // namespace basket
