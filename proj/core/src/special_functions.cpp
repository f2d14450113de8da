#include "maxkin/special_functions.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace maxkin {

namespace {

// series expansion of P(a,x), good for x < a+1
double gamma_p_series(double a, double x) {
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    for (int n = 0; n < 500; ++n) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::fabs(del) < std::fabs(sum) * 1e-16) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// continued fraction for Q(a,x), good for x >= a+1
double gamma_q_cf(double a, double x) {
    const double tiny = std::numeric_limits<double>::min() / 1e-30;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 500; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < 1e-16) break;
    }
    return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

} // namespace

double gamma_p(double a, double x) {
    if (!(a > 0.0) || x < 0.0) throw std::invalid_argument("gamma_p: need a > 0 and x >= 0");
    if (x == 0.0) return 0.0;
    if (x < a + 1.0) return gamma_p_series(a, x);
    return 1.0 - gamma_q_cf(a, x);
}

double gamma_p_inverse(double a, double p) {
    if (!(a > 0.0) || !(p >= 0.0 && p < 1.0))
        throw std::invalid_argument("gamma_p_inverse: need a > 0, p in [0,1)");
    if (p == 0.0) return 0.0;
    // Wilson-Hilferty starting guess, then safeguarded Newton
    const double g = std::lgamma(a);
    double x;
    {
        // crude normal quantile for the start
        double t = std::sqrt(-2.0 * std::log(p < 0.5 ? p : 1.0 - p));
        double z = t - (2.30753 + 0.27061 * t) / (1.0 + t * (0.99229 + 0.04481 * t));
        if (p < 0.5) z = -z;
        const double c = 2.0 / (9.0 * a);
        double w = 1.0 - c + z * std::sqrt(c);
        x = a * w * w * w;
        if (!(x > 0.0)) x = a * std::exp((std::log(p) + g + std::log(a)) / a);
    }
    double lo = 0.0, hi = std::numeric_limits<double>::infinity();
    for (int it = 0; it < 200; ++it) {
        const double f = gamma_p(a, x) - p;
        if (f > 0.0) hi = x; else lo = x;
        const double logpdf = (a - 1.0) * std::log(x) - x - g;
        const double pdf = std::exp(logpdf);
        double step = pdf > 0.0 ? f / pdf : 0.0;
        double xn = x - step;
        if (!(xn > lo && xn < hi)) xn = std::isfinite(hi) ? 0.5 * (lo + hi) : 2.0 * x;
        if (std::fabs(xn - x) <= 1e-14 * std::max(1.0, x)) return xn;
        x = xn;
    }
    return x;
}

double inverse_gamma_pdf(double v, double mu) {
    if (!(v > 0.0)) throw std::invalid_argument("inverse_gamma_pdf: v must be positive");
    if (!(mu > 1.0)) throw std::invalid_argument("inverse_gamma_pdf: mu must exceed 1");
    const double logp =
        mu * std::log(mu - 1.0) - std::lgamma(mu) - (mu - 1.0) / v - (1.0 + mu) * std::log(v);
    return std::exp(logp);
}

double inverse_gamma_quantile(double p, double mu) {
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("inverse_gamma_quantile: p in (0,1)");
    // P(V <= v) = Q(mu, (mu-1)/v)  =>  (mu-1)/v = P^{-1}(mu, 1-p)
    const double g = gamma_p_inverse(mu, 1.0 - p);
    return (mu - 1.0) / g;
}

double inverse_gamma_sample(double mu, Rng& rng) {
    return (mu - 1.0) / rng.gamma(mu);
}

} // namespace maxkin
