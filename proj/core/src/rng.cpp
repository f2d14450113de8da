#include "maxkin/rng.hpp"

#include <stdexcept>

namespace maxkin {

std::uint64_t Rng::poisson(double mean) {
    if (!(mean >= 0.0)) throw std::invalid_argument("poisson: mean must be nonnegative");
    if (mean == 0.0) return 0;
    if (mean < 30.0) {
        const double L = std::exp(-mean);
        std::uint64_t k = 0;
        double p = 1.0;
        do {
            ++k;
            p *= uniform01();
        } while (p > L);
        return k - 1;
    }
    // PTRS (Hormann 1993)
    const double b = 0.931 + 2.53 * std::sqrt(mean);
    const double a = -0.059 + 0.02483 * b;
    const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    const double v_r = 0.9277 - 3.6224 / (b - 2.0);
    for (;;) {
        double u = uniform01() - 0.5;
        double v = uniform01();
        double us = 0.5 - std::fabs(u);
        double k = std::floor((2.0 * a / us + b) * u + mean + 0.43);
        if (us >= 0.07 && v <= v_r) return static_cast<std::uint64_t>(k);
        if (k < 0.0 || (us < 0.013 && v > us)) continue;
        if (std::log(v * inv_alpha / (a / (us * us) + b)) <=
            k * std::log(mean) - mean - std::lgamma(k + 1.0)) {
            return static_cast<std::uint64_t>(k);
        }
    }
}

double Rng::gamma(double shape) {
    if (!(shape >= 1.0)) throw std::invalid_argument("gamma: shape must be >= 1");
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x, w;
        do {
            x = normal();
            w = 1.0 + c * x;
        } while (w <= 0.0);
        w = w * w * w;
        const double u = uniform01();
        if (u < 1.0 - 0.0331 * (x * x) * (x * x)) return d * w;
        if (std::log(u) < 0.5 * x * x + d * (1.0 - w + std::log(w))) return d * w;
    }
}

} // namespace maxkin
