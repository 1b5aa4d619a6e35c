// Reference computations used only by the test suites. Each oracle takes a
// route independent of the library code it checks: quadrature instead of
// closed forms, the Bell triangle instead of enumeration.
#pragma once

#include <functional>
#include <vector>

#include "basket/special.hpp"

namespace oracle {

// Adaptive Simpson quadrature on [a, b] to absolute tolerance tol.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol);

// Integral of g over (0, 1) via the p = sin^2(u) substitution, which removes
// the integrable endpoint singularities of Beta-type integrands.
double integrate_unit(const std::function<double(double)>& g, double tol);

// Bell numbers B(0)..B(max_k) by the Bell-triangle recurrence.
std::vector<unsigned long long> bell_numbers(int max_k);

// Beta density evaluated through std::lgamma directly.
double beta_pdf(double x, const basket::BetaParams& p);

// Hellinger distance by quadrature of (1/2) integral (sqrt f - sqrt g)^2.
double hellinger_quadrature(const basket::BetaParams& p,
                            const basket::BetaParams& q);

// Jensen-Shannon divergence (base 2) by adaptive quadrature.
double jsd_quadrature(const basket::BetaParams& p, const basket::BetaParams& q);

}  // namespace oracle
