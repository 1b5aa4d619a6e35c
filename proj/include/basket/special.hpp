#pragma once

namespace basket {

// Shape parameters of a Beta distribution; both must be positive.
struct BetaParams {
  double alpha = 1.0;
  double beta = 1.0;

  double mean() const { return alpha / (alpha + beta); }
};

void check_beta_params(const BetaParams& p);

// log(p / (1 - p)); domain error outside the open interval (0, 1).
double logit(double p);

// 1 / (1 + exp(-theta)), stable for any finite theta.
double expit(double theta);

// log B(a, b) = lgamma(a) + lgamma(b) - lgamma(a + b), for a, b > 0.
double log_beta(double a, double b);

// Integrated binomial likelihood under a Beta(a, b) prior on the rate,
// without the binomial coefficient:
//
//   log [ B(a + r, b + n - r) / B(a, b) ]
//
// The coefficient is omitted because every use divides two such evidences for
// the same data, where it cancels.
double log_bb_marginal(int r, int n, const BetaParams& prior);

}  // namespace basket
