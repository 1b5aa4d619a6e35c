#pragma once

#include "basket/rng.hpp"
#include "basket/special.hpp"

namespace basket {

// One draw from each distribution family the estimators need. Every sampler
// is a pure function of its parameters and the stream state.

double draw_standard_normal(RngStream& rng);

// Normal parameterized by mean and VARIANCE.
double draw_normal(double mean, double variance, RngStream& rng);

// Gamma with density proportional to x^(shape-1) exp(-rate x).
double draw_gamma(double shape, double rate, RngStream& rng);

// Inverse gamma with density proportional to x^(-shape-1) exp(-scale / x).
double draw_inverse_gamma(double shape, double scale, RngStream& rng);

// Half-normal: |Z| * scale for Z standard normal.
double draw_half_normal(double scale, RngStream& rng);

double draw_beta(const BetaParams& params, RngStream& rng);

int draw_binomial(int n, double p, RngStream& rng);

}  // namespace basket
