#include "basket/divergence.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace basket {

namespace {

constexpr int kNodesPerPanel = 16;
constexpr int kPanels = 32;

struct PanelRule {
  std::array<double, kNodesPerPanel> node;    // on (-1, 1)
  std::array<double, kNodesPerPanel> weight;
};

// Gauss-Legendre nodes/weights via Newton iteration on the Legendre
// recurrence; accurate to machine precision for this order.
PanelRule make_rule() {
  PanelRule rule{};
  const int n = kNodesPerPanel;
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) {
        break;
      }
    }
    rule.node[i] = -x;
    rule.node[n - 1 - i] = x;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.weight[i] = w;
    rule.weight[n - 1 - i] = w;
  }
  return rule;
}

// Panel breakpoints on (0, 1): per half, one tiny panel hugging the
// endpoint, a geometric ladder through the tail (Beta densities can be
// singular though integrable when a shape is below one), then uniform
// panels across the bulk so sharply concentrated densities stay resolved.
std::vector<double> make_breakpoints() {
  constexpr double kEdge = 1e-12;
  constexpr double kTail = 0.02;
  constexpr int kGeometric = 7;
  constexpr int kUniform = kPanels / 2 - kGeometric - 1;
  std::vector<double> b;
  b.push_back(0.0);
  const double ratio = std::pow(kTail / kEdge, 1.0 / kGeometric);
  double x = kEdge;
  for (int i = 0; i < kGeometric; ++i) {
    b.push_back(x);
    x *= ratio;
  }
  for (int i = 0; i < kUniform; ++i) {
    b.push_back(kTail + (0.5 - kTail) * i / kUniform);
  }
  b.push_back(0.5);
  const int left_count = static_cast<int>(b.size());
  for (int i = left_count - 2; i >= 0; --i) {
    b.push_back(1.0 - b[i]);
  }
  return b;
}

double log_beta_pdf(double x, const BetaParams& p, double log_norm) {
  return (p.alpha - 1.0) * std::log(x) + (p.beta - 1.0) * std::log1p(-x) -
         log_norm;
}

}  // namespace

double hellinger_beta(const BetaParams& p, const BetaParams& q) {
  check_beta_params(p);
  check_beta_params(q);
  const double log_bc =
      log_beta(0.5 * (p.alpha + q.alpha), 0.5 * (p.beta + q.beta)) -
      0.5 * (log_beta(p.alpha, p.beta) + log_beta(q.alpha, q.beta));
  const double h_sq = 1.0 - std::exp(log_bc);
  if (h_sq <= 0.0) {
    return 0.0;
  }
  return std::min(std::sqrt(h_sq), 1.0);
}

double jsd_beta(const BetaParams& p, const BetaParams& q) {
  check_beta_params(p);
  check_beta_params(q);

  static const PanelRule rule = make_rule();
  static const std::vector<double> breaks = make_breakpoints();

  const double log_norm_p = log_beta(p.alpha, p.beta);
  const double log_norm_q = log_beta(q.alpha, q.beta);
  const double log2e = 1.0 / std::numbers::ln2;

  double sum = 0.0;
  for (std::size_t panel = 0; panel + 1 < breaks.size(); ++panel) {
    const double lo = breaks[panel];
    const double hi = breaks[panel + 1];
    const double half = 0.5 * (hi - lo);
    const double mid = 0.5 * (hi + lo);
    for (int i = 0; i < kNodesPerPanel; ++i) {
      const double x = mid + half * rule.node[i];
      const double lf = log_beta_pdf(x, p, log_norm_p);
      const double lg = log_beta_pdf(x, q, log_norm_q);
      // log m = logaddexp(lf, lg) - log 2
      const double hi_l = std::max(lf, lg);
      const double lm =
          hi_l + std::log1p(std::exp(std::min(lf, lg) - hi_l)) -
          std::numbers::ln2;
      const double f = std::exp(lf);
      const double g = std::exp(lg);
      const double integrand =
          0.5 * log2e * (f * (lf - lm) + g * (lg - lm));
      sum += half * rule.weight[i] * integrand;
    }
  }

  if (!std::isfinite(sum)) {
    throw std::runtime_error(
        "jsd_beta: quadrature failed to converge for the given parameters");
  }
  return std::min(std::max(sum, 0.0), 1.0);
}

}  // namespace basket
