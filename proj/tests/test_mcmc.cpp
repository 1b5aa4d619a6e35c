#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "basket/mcmc.hpp"

using namespace basket;

namespace {

double standard_normal_logpdf(double x) { return -0.5 * x * x; }

// Gibbs sampler over a correlated bivariate Gaussian with known marginals;
// exercises run_chain plumbing against analytic values.
class BivariateNormalModel final : public GibbsModel {
 public:
  BivariateNormalModel(double mean1, double mean2, double var1, double var2,
                       double rho)
      : mean1_(mean1), mean2_(mean2), var1_(var1), var2_(var2), rho_(rho) {}

  int state_dim() const override { return 2; }
  int scale_count() const override { return 0; }
  Eigen::VectorXd initial_state() const override {
    return Eigen::VectorXd::Zero(2);
  }

  void sweep(Eigen::VectorXd& state, const Eigen::VectorXd&, Eigen::ArrayXi&,
             Eigen::ArrayXi&, RngStream& rng) const override {
    const double sd1 = std::sqrt(var1_);
    const double sd2 = std::sqrt(var2_);
    const double cond_mean1 =
        mean1_ + rho_ * sd1 / sd2 * (state[1] - mean2_);
    state[0] = draw_normal(cond_mean1, var1_ * (1.0 - rho_ * rho_), rng);
    const double cond_mean2 =
        mean2_ + rho_ * sd2 / sd1 * (state[0] - mean1_);
    state[1] = draw_normal(cond_mean2, var2_ * (1.0 - rho_ * rho_), rng);
  }

 private:
  double mean1_, mean2_, var1_, var2_, rho_;
};

// Records the proposal scales seen by each sweep; used to verify that
// adaptation freezes after burn-in.
class ScaleProbeModel final : public GibbsModel {
 public:
  int state_dim() const override { return 1; }
  int scale_count() const override { return 1; }
  Eigen::VectorXd initial_state() const override {
    return Eigen::VectorXd::Zero(1);
  }
  void sweep(Eigen::VectorXd& state, const Eigen::VectorXd& scales,
             Eigen::ArrayXi& accepts, Eigen::ArrayXi& attempts,
             RngStream& rng) const override {
    seen.push_back(scales[0]);
    const auto [value, accepted] =
        mh_logit_step(state[0], standard_normal_logpdf, scales[0], rng);
    state[0] = value;
    ++attempts[0];
    accepts[0] += accepted ? 1 : 0;
  }
  mutable std::vector<double> seen;
};

}  // namespace

TEST_CASE("metropolis step accepts almost surely in the tiny-scale limit") {
  RngStream rng(11);
  double theta = 0.3;
  int accepted = 0;
  for (int i = 0; i < 2000; ++i) {
    const auto [value, ok] =
        mh_logit_step(theta, standard_normal_logpdf, 1e-9, rng);
    theta = value;
    accepted += ok ? 1 : 0;
  }
  CHECK(accepted == 2000);
}

TEST_CASE("metropolis chain reproduces standard normal moments") {
  RngStream rng(17);
  double theta = 0.0;
  double sum = 0.0;
  double sum_sq = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    theta = mh_logit_step(theta, standard_normal_logpdf, 2.4, rng).first;
    sum += theta;
    sum_sq += theta * theta;
  }
  const double mean = sum / n;
  CHECK(std::abs(mean) < 0.02);
  CHECK(sum_sq / n - mean * mean == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("metropolis step is deterministic and validates its target") {
  RngStream a(5);
  RngStream b(5);
  const auto r1 = mh_logit_step(0.7, standard_normal_logpdf, 1.0, a);
  const auto r2 = mh_logit_step(0.7, standard_normal_logpdf, 1.0, b);
  CHECK(r1.first == r2.first);
  CHECK(r1.second == r2.second);

  RngStream c(6);
  auto bad_target = [](double) {
    return std::numeric_limits<double>::infinity();
  };
  CHECK_THROWS_AS(mh_logit_step(0.0, bad_target, 1.0, c), std::runtime_error);
}

TEST_CASE("conjugate normal-mean update matches the analytic posterior") {
  RngStream rng(23);
  Eigen::VectorXd values(2);
  values << 4.0, 6.0;

  // Nearly flat prior: posterior is N(5, 0.5).
  double sum = 0.0;
  double sum_sq = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const double x = gibbs_normal_mean(values, 1.0, 0.0, 1e12, rng);
    sum += x;
    sum_sq += x * x;
  }
  const double mean = sum / n;
  const double var = sum_sq / n - mean * mean;
  CHECK(mean == doctest::Approx(5.0).epsilon(0.01));
  CHECK(var == doctest::Approx(0.5).epsilon(0.03));

  // Data at the prior mean leaves the posterior mean exactly there.
  Eigen::VectorXd agree = Eigen::VectorXd::Constant(5, 1.7);
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    total += gibbs_normal_mean(agree, 2.0, 1.7, 3.0, rng);
  }
  // Posterior sd is sqrt(1/(1/3 + 5/2)) ~ 0.594; 3 MC standard errors.
  CHECK(std::abs(total / n - 1.7) <
        3.0 * 0.594 / std::sqrt(static_cast<double>(n)));

  CHECK_THROWS_AS(gibbs_normal_mean(values, -1.0, 0.0, 1.0, rng),
                  std::invalid_argument);
  CHECK_THROWS_AS(gibbs_normal_mean(Eigen::VectorXd(), 1.0, 0.0, 1.0, rng),
                  std::invalid_argument);
}

TEST_CASE("weighted normal-mean update reduces to the equal-variance case") {
  RngStream a(29);
  RngStream b(29);
  Eigen::VectorXd values(3);
  values << 1.0, 2.0, 4.0;
  const Eigen::VectorXd precisions = Eigen::VectorXd::Constant(3, 1.0 / 2.5);
  const double x = gibbs_normal_mean(values, 2.5, 0.3, 4.0, a);
  const double y = gibbs_normal_mean_weighted(values, precisions, 0.3, 4.0, b);
  CHECK(x == doctest::Approx(y).epsilon(1e-12));
}

TEST_CASE("conjugate inverse-gamma update matches analytic moments") {
  RngStream rng(31);
  const int m = 4;
  const Eigen::VectorXd zeros = Eigen::VectorXd::Zero(m);
  // Posterior is IG(3 + m/2, 4): mean 4 / (2 + m/2).
  double sum = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    sum += gibbs_inverse_gamma_var(zeros, 3.0, 4.0, rng);
  }
  CHECK(sum / n == doctest::Approx(4.0 / (2.0 + 0.5 * m)).epsilon(0.02));

  Eigen::VectorXd residuals(2);
  residuals << 1.0, -2.0;
  // Posterior IG(3 + 1, 4 + 2.5): mean 6.5 / 3.
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    total += gibbs_inverse_gamma_var(residuals, 3.0, 4.0, rng);
  }
  CHECK(total / n == doctest::Approx(6.5 / 3.0).epsilon(0.02));

  CHECK_THROWS_AS(gibbs_inverse_gamma_var(residuals, 0.0, 1.0, rng),
                  std::invalid_argument);
}

TEST_CASE("run_chain recovers a known bivariate normal") {
  const BivariateNormalModel model(1.5, -0.5, 2.0, 0.5, 0.6);
  McmcConfig config;
  config.n_burn = 500;
  config.n_keep = 40000;
  RngStream rng(2027);
  const ChainSummary summary = run_chain(model, config, rng);

  // Gibbs over a rho=0.6 Gaussian has modest autocorrelation; 3 generous
  // Monte-Carlo standard errors.
  const double se1 = std::sqrt(2.0 / 40000.0) * 3.0 * 3.0;
  const double se2 = std::sqrt(0.5 / 40000.0) * 3.0 * 3.0;
  CHECK(std::abs(summary.posterior_mean[0] - 1.5) < se1);
  CHECK(std::abs(summary.posterior_mean[1] + 0.5) < se2);
  CHECK(summary.posterior_sd[0] == doctest::Approx(std::sqrt(2.0)).epsilon(0.05));
  CHECK(summary.posterior_sd[1] == doctest::Approx(std::sqrt(0.5)).epsilon(0.05));
}

TEST_CASE("run_chain handles a single retained draw") {
  const BivariateNormalModel model(0.0, 0.0, 1.0, 1.0, 0.0);
  McmcConfig config;
  config.n_burn = 10;
  config.n_keep = 1;
  RngStream rng(3);
  const ChainSummary summary = run_chain(model, config, rng, true);
  CHECK(summary.kept_draws.rows() == 1);
  CHECK(summary.posterior_mean[0] == summary.kept_draws(0, 0));
  CHECK(summary.posterior_sd[0] == 0.0);
}

TEST_CASE("run_chain is deterministic in the seed path") {
  const BivariateNormalModel model(1.0, 2.0, 1.0, 1.0, 0.3);
  McmcConfig config;
  config.n_burn = 100;
  config.n_keep = 500;
  RngStream a(88);
  RngStream b(88);
  const ChainSummary s1 = run_chain(model, config, a);
  const ChainSummary s2 = run_chain(model, config, b);
  CHECK(s1.posterior_mean == s2.posterior_mean);
  CHECK(s1.posterior_sd == s2.posterior_sd);
}

TEST_CASE("thinning retains every thin-th draw") {
  const BivariateNormalModel model(0.0, 0.0, 1.0, 1.0, 0.0);
  McmcConfig config;
  config.n_burn = 0;
  config.n_keep = 100;
  config.thin = 4;
  RngStream rng(12);
  const ChainSummary summary = run_chain(model, config, rng, true);
  CHECK(summary.kept_draws.rows() == 25);
}

TEST_CASE("proposal scales adapt during burn-in and freeze afterwards") {
  ScaleProbeModel model;
  McmcConfig config;
  config.n_burn = 400;
  config.n_keep = 300;
  config.adapt_window = 50;
  RngStream rng(404);
  run_chain(model, config, rng);
  REQUIRE(model.seen.size() == 700);
  // Initial scale 1.0 on a unit normal target accepts too often, so burn-in
  // must have moved the scale.
  CHECK(model.seen.front() == 1.0);
  CHECK(model.seen[399] != 1.0);
  for (std::size_t i = 400; i < model.seen.size(); ++i) {
    CHECK(model.seen[i] == model.seen[400]);
  }
}

TEST_CASE("invalid configurations are rejected") {
  const BivariateNormalModel model(0.0, 0.0, 1.0, 1.0, 0.0);
  RngStream rng(1);
  McmcConfig config;
  config.n_keep = 0;
  CHECK_THROWS_AS(run_chain(model, config, rng), std::invalid_argument);
  config = McmcConfig{};
  config.thin = 0;
  CHECK_THROWS_AS(run_chain(model, config, rng), std::invalid_argument);
  config = McmcConfig{};
  config.n_burn = -1;
  CHECK_THROWS_AS(run_chain(model, config, rng), std::invalid_argument);
}
