#pragma once

#include "basket/special.hpp"

namespace basket {

// Hellinger distance between two Beta distributions, in [0, 1]:
//
//   H^2 = 1 - B((a1+a2)/2, (b1+b2)/2) / sqrt(B(a1,b1) B(a2,b2))
//
// Round-off can push H^2 marginally negative for near-identical parameters;
// such values are clamped to 0.
double hellinger_beta(const BetaParams& p, const BetaParams& q);

// Jensen-Shannon divergence between two Beta densities,
// JSD = (KL(f||m) + KL(g||m)) / 2 with m = (f+g)/2, using base-2 logarithms
// so the value lies in [0, 1]. Evaluated by composite Gauss-Legendre
// quadrature with 512 nodes on (0, 1), panels graded toward the endpoints and
// densities computed in log space.
double jsd_beta(const BetaParams& p, const BetaParams& q);

}  // namespace basket
