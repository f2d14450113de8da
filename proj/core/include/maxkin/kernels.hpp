#ifndef MAXKIN_KERNELS_HPP
#define MAXKIN_KERNELS_HPP

#include "maxkin/collision.hpp"
#include "maxkin/restitution.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace maxkin {

enum class EvalMethod { ClosedForm, Quadrature };

struct KernelEvaluation {
    double value = 0.0;
    EvalMethod method = EvalMethod::ClosedForm;
    double est_abs_error = 0.0;
};

// S(s) = <(lambda+eta)^s> + (1-lambda)^s - 1. Governs 1D metric contraction and
// moment growth; S(1) = 0 and S(2) = 2 lambda (lambda-1) + beta^2.
KernelEvaluation kernel_S(double s, const TradeRule1D& rule);

// 3D contraction/expansion constant of the d_{2+alpha} metric:
//   A(alpha) = 2/(4+alpha) < ((1+et)/2)^{2+alpha}
//              + (1 - |(1-et)/2|^{4+alpha}) / (1 - |(1-et)/2|^2) >,
// the closed form of the angular integral
//   1/2 < int_0^pi [ (a^2)^{(2+alpha)/2} + (b^2)^{(2+alpha)/2} ] sin t dt >.
// The inner fraction has a removable singularity at |(1-et)/2| = 1 with limit
// (4+alpha)/2; it is taken over when the denominator is within 1e-8 of zero.
KernelEvaluation kernel_A(double alpha, double e, const RestitutionLaw& law);

// Independent cross-check path: Gauss-Legendre in cos(theta) applied to the
// integral definition itself.
KernelEvaluation kernel_A_quadrature(double alpha, double e, const RestitutionLaw& law,
                                     int nodes = 96);

// C(alpha) = 1 - A(alpha); the exponential decay rate of d_{2+alpha}.
double contraction_rate_C(double alpha, double e, const RestitutionLaw& law);

// <zeta> with zeta = (1 + 4 eps - 7 eps^2 + 4 eps^3 - 2 eps^4)/3, eps = (1-et)/2;
// the fourth-moment relaxation rate. Evaluates the polynomial expectation and
// 1 - A(2) and insists they agree to 1e-10, since they are the same quantity.
double zeta_mean(double e, const RestitutionLaw& law);

struct ParetoIndexResult {
    std::optional<double> s_star;     // positive zero of S, if bracketed in (1, s_max]
    std::pair<double, double> bracket{0.0, 0.0};
    std::vector<std::pair<double, double>> s_grid_profile;
};

// Dense log-grid scan of S on (1, s_max], then bisection to |S| < 1e-9.
// Absent s_star means S stayed negative: all moments up to s_max stay bounded.
ParetoIndexResult pareto_index(const TradeRule1D& rule, double s_max, int grid_points = 400);

// Stationary wealth density of the continuous-trading limit:
//   M_lambda(v) = (mu-1)^mu / Gamma(mu) * exp(-(mu-1)/v) / v^{1+mu},
// mu = 1 + 2/lambda. Evaluated in log space.
double gamma_stationary_pdf(double v, double lambda);

// Companion quadrature: integrates mass and mean of M_lambda numerically.
std::pair<double, double> gamma_stationary_mass_mean(double lambda, double abs_tol = 1e-10);

} // namespace maxkin

#endif
