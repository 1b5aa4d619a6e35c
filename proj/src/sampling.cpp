#include "basket/sampling.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace basket {

double draw_standard_normal(RngStream& rng) {
  // Box-Muller; one value per call so the draw count stays predictable.
  const double u1 = rng.next_double();
  const double u2 = rng.next_double();
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

double draw_normal(double mean, double variance, RngStream& rng) {
  if (!(variance > 0.0)) {
    throw std::domain_error("draw_normal requires positive variance");
  }
  return mean + std::sqrt(variance) * draw_standard_normal(rng);
}

double draw_gamma(double shape, double rate, RngStream& rng) {
  if (!(shape > 0.0) || !(rate > 0.0)) {
    throw std::domain_error("draw_gamma requires positive shape and rate");
  }
  if (shape < 1.0) {
    // Boost to shape + 1 and multiply by U^(1/shape); log space keeps the
    // factor finite for very small shapes.
    const double boosted = draw_gamma(shape + 1.0, 1.0, rng);
    const double log_u = std::log(rng.next_double());
    return boosted * std::exp(log_u / shape) / rate;
  }
  // Marsaglia-Tsang squeeze.
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double z = draw_standard_normal(rng);
    double v = 1.0 + c * z;
    if (v <= 0.0) {
      continue;
    }
    v = v * v * v;
    const double u = rng.next_double();
    if (u < 1.0 - 0.0331 * z * z * z * z) {
      return d * v / rate;
    }
    if (std::log(u) < 0.5 * z * z + d * (1.0 - v + std::log(v))) {
      return d * v / rate;
    }
  }
}

double draw_inverse_gamma(double shape, double scale, RngStream& rng) {
  if (!(shape > 0.0) || !(scale > 0.0)) {
    throw std::domain_error(
        "draw_inverse_gamma requires positive shape and scale");
  }
  return 1.0 / draw_gamma(shape, scale, rng);
}

double draw_half_normal(double scale, RngStream& rng) {
  if (!(scale > 0.0)) {
    throw std::domain_error("draw_half_normal requires positive scale");
  }
  return scale * std::abs(draw_standard_normal(rng));
}

double draw_beta(const BetaParams& params, RngStream& rng) {
  check_beta_params(params);
  const double x = draw_gamma(params.alpha, 1.0, rng);
  const double y = draw_gamma(params.beta, 1.0, rng);
  return x / (x + y);
}

int draw_binomial(int n, double p, RngStream& rng) {
  if (n < 0 || !(p >= 0.0) || !(p <= 1.0)) {
    throw std::domain_error("draw_binomial requires n >= 0 and p in [0, 1]");
  }
  int count = 0;
  for (int i = 0; i < n; ++i) {
    if (rng.next_double() < p) {
      ++count;
    }
  }
  return count;
}

}  // namespace basket
