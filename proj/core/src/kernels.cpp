#include "maxkin/kernels.hpp"

#include "maxkin/quadrature.hpp"
#include "maxkin/special_functions.hpp"

#include <cmath>
#include <stdexcept>

namespace maxkin {

KernelEvaluation kernel_S(double s, const TradeRule1D& rule) {
    if (!(s >= 1.0)) throw std::invalid_argument("kernel_S: order must be >= 1");
    const double lead = rule.law.moment(s, MomentOf::EtildePower);
    const double q = 1.0 - rule.lambda;
    KernelEvaluation ev;
    ev.value = lead + std::pow(q, s) - 1.0;
    ev.method = rule.law.kind() == LawKind::UniformShifted ? EvalMethod::Quadrature
                                                           : EvalMethod::ClosedForm;
    ev.est_abs_error = ev.method == EvalMethod::Quadrature ? 1e-12 : 0.0;
    return ev;
}

namespace {

double a_alpha_integrand_closed(double et, double alpha) {
    const double eps = std::fabs((1.0 - et) / 2.0);
    const double first = std::pow((1.0 + et) / 2.0, 2.0 + alpha);
    double frac;
    if (std::fabs(1.0 - eps * eps) < 1e-8) {
        frac = (4.0 + alpha) / 2.0; // removable singularity at eps = 1
    } else {
        frac = (1.0 - std::pow(eps, 4.0 + alpha)) / (1.0 - eps * eps);
    }
    return 2.0 / (4.0 + alpha) * (first + frac);
}

} // namespace

KernelEvaluation kernel_A(double alpha, double e, const RestitutionLaw& law) {
    if (!(alpha >= 0.0)) throw std::invalid_argument("kernel_A: alpha must be nonnegative");
    if (law.e() != e) throw std::invalid_argument("kernel_A: coefficient mismatch with law");
    KernelEvaluation ev;
    ev.value = law.expect_etilde([&](double et) { return a_alpha_integrand_closed(et, alpha); });
    ev.method = law.kind() == LawKind::UniformShifted ? EvalMethod::Quadrature
                                                      : EvalMethod::ClosedForm;
    ev.est_abs_error = ev.method == EvalMethod::Quadrature ? 1e-12 : 0.0;
    return ev;
}

KernelEvaluation kernel_A_quadrature(double alpha, double e, const RestitutionLaw& law,
                                     int nodes) {
    if (!(alpha >= 0.0)) throw std::invalid_argument("kernel_A_quadrature: alpha >= 0 required");
    if (law.e() != e) throw std::invalid_argument("kernel_A_quadrature: coefficient mismatch");
    GaussLegendre gl(nodes);
    const double p2 = (2.0 + alpha) / 2.0;
    auto per_etilde = [&](double et) {
        const double r = (3.0 - et) / 4.0;
        const double m = (1.0 + et) / 4.0;
        double acc = 0.0;
        for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
            const double c = gl.nodes[i];
            const double asq = m * m * 2.0 * (1.0 - c);
            const double bsq = r * r + m * m + 2.0 * r * m * c;
            acc += gl.weights[i] * (std::pow(asq, p2) + std::pow(std::max(bsq, 0.0), p2));
        }
        return 0.5 * acc;
    };
    KernelEvaluation ev;
    ev.value = law.expect_etilde(per_etilde);
    ev.method = EvalMethod::Quadrature;
    // GL error on these smooth integrands is far below this bound for nodes >= 48
    ev.est_abs_error = 1e-10;
    return ev;
}

double contraction_rate_C(double alpha, double e, const RestitutionLaw& law) {
    if (!(alpha > 0.0)) throw std::invalid_argument("contraction_rate_C: alpha must be positive");
    return 1.0 - kernel_A(alpha, e, law).value;
}

double zeta_mean(double e, const RestitutionLaw& law) {
    const double direct = law.expect_etilde([](double et) {
        const double eps = (1.0 - et) / 2.0;
        return (1.0 + 4.0 * eps - 7.0 * eps * eps + 4.0 * eps * eps * eps -
                2.0 * eps * eps * eps * eps) / 3.0;
    });
    const double via_A = 1.0 - kernel_A(2.0, e, law).value;
    if (std::fabs(direct - via_A) > 1e-10)
        throw std::runtime_error("zeta_mean: polynomial path and 1-A(2) disagree by " +
                                 std::to_string(direct - via_A) +
                                 "; one of the kernel evaluations is broken");
    return direct;
}

ParetoIndexResult pareto_index(const TradeRule1D& rule, double s_max, int grid_points) {
    if (!(s_max > 1.0)) throw std::invalid_argument("pareto_index: s_max must exceed 1");
    ParetoIndexResult out;
    auto S = [&](double s) {
        const double v = kernel_S(s, rule).value;
        if (!std::isfinite(v)) throw std::runtime_error("pareto_index: S(s) not finite");
        return v;
    };
    // log-spaced scan of (1, s_max]
    const double lo = std::log(1.0 + 1e-6), hi = std::log(s_max);
    double prev_s = 1.0 + 1e-6, prev_v = S(prev_s);
    out.s_grid_profile.emplace_back(prev_s, prev_v);
    double bl = 0.0, bh = 0.0;
    bool found = false;
    for (int i = 1; i <= grid_points; ++i) {
        const double s = std::exp(lo + (hi - lo) * i / grid_points);
        const double v = S(s);
        out.s_grid_profile.emplace_back(s, v);
        // S starts at 0 with negative slope for contractive rules; take the first
        // upward sign change away from s = 1
        if (!found && prev_v < 0.0 && v >= 0.0) {
            bl = prev_s;
            bh = s;
            found = true;
        }
        prev_s = s;
        prev_v = v;
    }
    if (!found) return out;
    out.bracket = {bl, bh};
    while (bh - bl > 1e-13 * std::max(1.0, bh)) {
        const double mid = 0.5 * (bl + bh);
        const double v = S(mid);
        if (std::fabs(v) < 1e-9) {
            out.s_star = mid;
            return out;
        }
        (v < 0.0 ? bl : bh) = mid;
    }
    out.s_star = 0.5 * (bl + bh);
    return out;
}

double gamma_stationary_pdf(double v, double lambda) {
    if (!(lambda > 0.0 && lambda <= 1.0))
        throw std::invalid_argument("gamma_stationary_pdf: lambda in (0,1]");
    const double mu = 1.0 + 2.0 / lambda;
    return inverse_gamma_pdf(v, mu);
}

std::pair<double, double> gamma_stationary_mass_mean(double lambda, double abs_tol) {
    const double mu = 1.0 + 2.0 / lambda;
    // Substituting v = (mu-1)/g turns both integrals into gamma-type integrals
    // over g, which have no heavy tail and integrate cleanly:
    //   mass = int g^{mu-1} e^{-g} dg / Gamma(mu),
    //   mean = (mu-1) int g^{mu-2} e^{-g} dg / Gamma(mu).
    const double lg = std::lgamma(mu);
    auto mass_f = [&](double g) {
        return g <= 0.0 ? 0.0 : std::exp((mu - 1.0) * std::log(g) - g - lg);
    };
    auto mean_f = [&](double g) {
        return g <= 0.0 ? 0.0 : (mu - 1.0) * std::exp((mu - 2.0) * std::log(g) - g - lg);
    };
    const double g_hi = mu + 40.0 * std::sqrt(mu) + 40.0;
    auto qm = integrate_adaptive(mass_f, 0.0, g_hi, abs_tol);
    auto qe = integrate_adaptive(mean_f, 0.0, g_hi, abs_tol);
    if (!qm.converged || !qe.converged)
        throw std::runtime_error("gamma_stationary_mass_mean: quadrature did not converge");
    return {qm.value, qe.value};
}

} // namespace maxkin
