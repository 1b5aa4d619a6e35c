#include <atomic>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <stdexcept>

#include <Eigen/Dense>

#include "basket/divergence.hpp"
#include "basket/estimators.hpp"
#include "est_common.hpp"

namespace basket {

namespace {

// Spectral factorization of the correlation matrix: the eta conditional is
// diagonal in this basis, which stays stable even when tied cohorts make
// Omega exactly singular.
struct OmegaFactor {
  Eigen::MatrixXd vectors;
  Eigen::VectorXd values;
  double log_det = 0.0;

  double quad_form(const Eigen::Ref<const Eigen::VectorXd>& x) const {
    return (vectors.transpose() * x).array().square()
        .cwiseQuotient(values.array())
        .sum();
  }
};

class JinModel final : public GibbsModel {
 public:
  JinModel(const TrialData& data, const JinConfig& cfg)
      : data_(data), cfg_(cfg), k_(data.num_cohorts()) {
    // Pairwise squared Hellinger distances between the standalone
    // Beta(1 + r, 1 + n - r) posteriors drive the correlation matrix.
    dist_sq_.setZero(k_, k_);
    for (int i = 0; i < k_; ++i) {
      for (int j = i + 1; j < k_; ++j) {
        const BetaParams pi{1.0 + data.cohorts[i].r,
                            1.0 + data.cohorts[i].n - data.cohorts[i].r};
        const BetaParams pj{1.0 + data.cohorts[j].r,
                            1.0 + data.cohorts[j].n - data.cohorts[j].r};
        const double d = hellinger_beta(pi, pj);
        dist_sq_(i, j) = d * d;
        dist_sq_(j, i) = d * d;
      }
    }
  }

  int state_dim() const override { return 2 * k_ + 5; }
  int scale_count() const override { return k_ + 1; }

  // State layout: [theta(K), eta(K), theta0, sigma_sq, tau_sq, sigma0_sq,
  // phi].
  Eigen::VectorXd initial_state() const override {
    Eigen::VectorXd state = Eigen::VectorXd::Zero(2 * k_ + 5);
    for (int i = 0; i < k_; ++i) {
      state[i] = detail::smoothed_logit(data_.cohorts[i]);
    }
    state[2 * k_] = cfg_.theta0_mean;
    state[2 * k_ + 1] = 1.0;  // sigma_sq: IG(0.01, 0.01) has no mean
    state[2 * k_ + 2] = 1.0;  // tau_sq
    state[2 * k_ + 3] = 1.0;  // sigma0_sq
    state[2 * k_ + 4] = cfg_.phi_prior.shape / cfg_.phi_prior.rate;
    return state;
  }

  void sweep(Eigen::VectorXd& state, const Eigen::VectorXd& scales,
             Eigen::ArrayXi& accepts, Eigen::ArrayXi& attempts,
             RngStream& rng) const override {
    auto theta = state.head(k_);
    auto eta = state.segment(k_, k_);
    double& theta0 = state[2 * k_];
    double& sigma_sq = state[2 * k_ + 1];
    double& tau_sq = state[2 * k_ + 2];
    double& sigma0_sq = state[2 * k_ + 3];
    double& phi = state[2 * k_ + 4];

    for (int i = 0; i < k_; ++i) {
      const CohortData& c = data_.cohorts[i];
      const double prior_mean = theta0 + eta[i];
      auto log_target = [&](double t) {
        return detail::binom_logit_loglik(c.r, c.n, t) +
               detail::normal_logpdf(t, prior_mean, tau_sq);
      };
      const auto [value, accepted] =
          mh_logit_step(theta[i], log_target, scales[i], rng);
      theta[i] = value;
      ++attempts[i];
      accepts[i] += accepted ? 1 : 0;
    }

    OmegaFactor omega = factor_omega(phi);

    // eta | rest is multivariate normal with precision
    // Omega^-1 / sigma_sq + I / tau_sq, diagonal in Omega's eigenbasis.
    {
      const Eigen::VectorXd rhs = (theta.array() - theta0) / tau_sq;
      const Eigen::VectorXd rhs_rot = omega.vectors.transpose() * rhs;
      Eigen::VectorXd eta_rot(k_);
      for (int i = 0; i < k_; ++i) {
        const double precision =
            1.0 / (omega.values[i] * sigma_sq) + 1.0 / tau_sq;
        eta_rot[i] = rhs_rot[i] / precision +
                     draw_standard_normal(rng) / std::sqrt(precision);
      }
      eta = omega.vectors * eta_rot;
    }

    theta0 = gibbs_normal_mean(theta - eta, tau_sq, cfg_.theta0_mean,
                               sigma0_sq, rng);

    Eigen::VectorXd theta0_residual(1);
    theta0_residual[0] = theta0 - cfg_.theta0_mean;
    sigma0_sq = gibbs_inverse_gamma_var(theta0_residual,
                                        cfg_.sigma0_sq_prior.shape,
                                        cfg_.sigma0_sq_prior.scale, rng);

    const double eta_quad = omega.quad_form(eta);
    sigma_sq = draw_inverse_gamma(cfg_.sigma_sq_prior.shape + 0.5 * k_,
                                  cfg_.sigma_sq_prior.scale + 0.5 * eta_quad,
                                  rng);

    const Eigen::VectorXd eps = theta - eta - Eigen::VectorXd::Constant(
                                                  k_, theta0);
    tau_sq = gibbs_inverse_gamma_var(eps, cfg_.tau_sq_prior.shape,
                                     cfg_.tau_sq_prior.scale, rng);

    // phi moves on the log scale against the eta likelihood and its gamma
    // prior (the +l term is the Jacobian).
    {
      auto log_target = [&](double l) {
        const double value = std::exp(l);
        if (!std::isfinite(value) || value <= 0.0) {
          return -std::numeric_limits<double>::infinity();
        }
        const OmegaFactor f = factor_omega(value);
        const double quad = f.quad_form(eta);
        const double mvn =
            -0.5 * (k_ * std::log(2.0 * std::numbers::pi * sigma_sq) +
                    f.log_det + quad / sigma_sq);
        const double prior = (cfg_.phi_prior.shape - 1.0) * l -
                             cfg_.phi_prior.rate * value;
        return mvn + prior + l;
      };
      const auto [log_phi, accepted] =
          mh_logit_step(std::log(phi), log_target, scales[k_], rng);
      phi = std::exp(log_phi);
      ++attempts[k_];
      accepts[k_] += accepted ? 1 : 0;
    }
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
  OmegaFactor factor_omega(double phi) const {
    const Eigen::MatrixXd omega = (-phi * dist_sq_.array()).exp();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(omega);
    if (solver.info() != Eigen::Success) {
      throw std::runtime_error("jin: correlation matrix factorization failed");
    }
    OmegaFactor f;
    f.vectors = solver.eigenvectors();
    f.values = solver.eigenvalues();
    // Identical cohorts give a singular correlation matrix; repair with a
    // small diagonal jitter.
    if (f.values.minCoeff() <= 1e-10 * f.values.maxCoeff()) {
      f.values.array() += 1e-8;
      if (!warned_.exchange(true)) {
        std::fprintf(stderr,
                     "jin: correlation matrix repaired with 1e-8 jitter\n");
      }
    }
    f.log_det = f.values.array().log().sum();
    return f;
  }

  const TrialData& data_;
  const JinConfig& cfg_;
  int k_;
  Eigen::MatrixXd dist_sq_;
  mutable std::atomic<bool> warned_{false};
};

void check_config(const JinConfig& cfg) {
  if (!(cfg.sigma0_sq_prior.shape > 0.0) || !(cfg.sigma0_sq_prior.scale > 0.0) ||
      !(cfg.sigma_sq_prior.shape > 0.0) || !(cfg.sigma_sq_prior.scale > 0.0) ||
      !(cfg.tau_sq_prior.shape > 0.0) || !(cfg.tau_sq_prior.scale > 0.0) ||
      !(cfg.phi_prior.shape > 0.0) || !(cfg.phi_prior.rate > 0.0)) {
    throw std::invalid_argument("jin: prior hyper-parameters must be positive");
  }
}

}  // namespace

EstimateVector estimate_jin_cbhm(const TrialData& data, const JinConfig& cfg,
                                 const McmcConfig& mcmc, RngStream& rng) {
  validate_trial(data);
  check_config(cfg);
  JinModel model(data, cfg);
  return run_chain(model, mcmc, rng).posterior_mean;
}

}  // namespace basket
