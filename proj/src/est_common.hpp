#pragma once

#include <cmath>
#include <numbers>

#include "basket/special.hpp"
#include "basket/trial.hpp"

namespace basket::detail {

inline double softplus(double x) {
  return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

// Binomial log likelihood on the log-odds scale, dropping the coefficient
// (constant in theta).
inline double binom_logit_loglik(int r, int n, double theta) {
  return r * theta - n * softplus(theta);
}

inline double normal_logpdf(double x, double mean, double variance) {
  const double d = x - mean;
  return -0.5 * (std::log(2.0 * std::numbers::pi * variance) +
                 d * d / variance);
}

// Data-adjacent chain start; the +0.5/+1 smoothing keeps the logit finite at
// r = 0 or r = n.
inline double smoothed_logit(const CohortData& c) {
  return logit((c.r + 0.5) / (c.n + 1.0));
}

}  // namespace basket::detail
