#include "basket/special.hpp"

#include <cmath>
#include <stdexcept>

namespace basket {

namespace {

double lgamma_pos(double x) {
#if defined(__GLIBC__)
  int sign = 0;
  return ::lgamma_r(x, &sign);
#else
  return std::lgamma(x);
#endif
}

}  // namespace

void check_beta_params(const BetaParams& p) {
  if (!(p.alpha > 0.0) || !(p.beta > 0.0)) {
    throw std::domain_error("Beta shape parameters must be positive");
  }
}

double logit(double p) {
  if (!(p > 0.0) || !(p < 1.0)) {
    throw std::domain_error("logit requires p in the open interval (0, 1)");
  }
  return std::log(p / (1.0 - p));
}

double expit(double theta) {
  if (theta >= 0.0) {
    return 1.0 / (1.0 + std::exp(-theta));
  }
  const double e = std::exp(theta);
  return e / (1.0 + e);
}

double log_beta(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) {
    throw std::domain_error("log_beta requires positive arguments");
  }
  return lgamma_pos(a) + lgamma_pos(b) - lgamma_pos(a + b);
}

double log_bb_marginal(int r, int n, const BetaParams& prior) {
  if (r < 0 || n < 0 || r > n) {
    throw std::domain_error("log_bb_marginal requires 0 <= r <= n");
  }
  check_beta_params(prior);
  if (n == 0) {
    return 0.0;
  }
  return log_beta(prior.alpha + r, prior.beta + (n - r)) -
         log_beta(prior.alpha, prior.beta);
}

}  // namespace basket
