#ifndef MAXKIN_SPECIAL_FUNCTIONS_HPP
#define MAXKIN_SPECIAL_FUNCTIONS_HPP

#include "maxkin/rng.hpp"

namespace maxkin {

// Regularized lower incomplete gamma P(a, x).
double gamma_p(double a, double x);

// Inverse of P(a, .) by bracketed Newton/bisection: returns x with P(a,x) = p.
double gamma_p_inverse(double a, double p);

// Inverse-gamma(shape mu, scale mu-1) density, evaluated in log space.
// This is the stationary wealth profile of the continuous-trading limit.
double inverse_gamma_pdf(double v, double mu);

// Quantile of the same inverse-gamma: V = (mu-1)/G with G ~ Gamma(mu, 1).
double inverse_gamma_quantile(double p, double mu);

double inverse_gamma_sample(double mu, Rng& rng);

} // namespace maxkin

#endif
