#include "maxkin/interpolation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace maxkin {

namespace {

// derivative at xq of the Lagrange cubic through (xs[0..3], ys[0..3])
double lagrange3_derivative(const double* xs, const double* ys, double xq) {
    double s = 0.0;
    for (int k = 0; k < 4; ++k) {
        double num = 0.0;
        for (int m = 0; m < 4; ++m) {
            if (m == k) continue;
            double prod = 1.0;
            for (int l = 0; l < 4; ++l) {
                if (l == k || l == m) continue;
                prod *= xq - xs[l];
            }
            num += prod;
        }
        double den = 1.0;
        for (int l = 0; l < 4; ++l) {
            if (l == k) continue;
            den *= xs[k] - xs[l];
        }
        s += ys[k] * num / den;
    }
    return s;
}

} // namespace

MonotoneCubic::MonotoneCubic(std::vector<double> x, std::vector<double> y, bool enforce_monotone)
    : x_(std::move(x)), y_(std::move(y)) {
    const std::size_t n = x_.size();
    if (n < 4 || y_.size() != n) throw std::invalid_argument("MonotoneCubic: need >= 4 nodes");
    for (std::size_t i = 0; i + 1 < n; ++i)
        if (!(x_[i + 1] > x_[i])) throw std::invalid_argument("MonotoneCubic: grid must increase");

    d_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t lo = i == 0 ? 0 : i - 1;
        lo = std::min(lo, n - 4);
        d_[i] = lagrange3_derivative(&x_[lo], &y_[lo], x_[i]);
    }
    if (enforce_monotone) {
        for (std::size_t i = 0; i < n; ++i) {
            const double sl = i > 0 ? (y_[i] - y_[i - 1]) / (x_[i] - x_[i - 1]) : 0.0;
            const double sr = i + 1 < n ? (y_[i + 1] - y_[i]) / (x_[i + 1] - x_[i]) : 0.0;
            double lo_s, hi_s;
            if (i == 0) {
                lo_s = std::min(0.0, 3.0 * sr);
                hi_s = std::max(0.0, 3.0 * sr);
            } else if (i + 1 == n) {
                lo_s = std::min(0.0, 3.0 * sl);
                hi_s = std::max(0.0, 3.0 * sl);
            } else if (sl * sr <= 0.0) {
                lo_s = hi_s = 0.0;
            } else {
                lo_s = std::min({0.0, 3.0 * sl, 3.0 * sr});
                hi_s = std::max({0.0, 3.0 * sl, 3.0 * sr});
            }
            d_[i] = std::clamp(d_[i], lo_s, hi_s);
        }
    }
}

std::size_t MonotoneCubic::interval(double q) const {
    auto it = std::upper_bound(x_.begin(), x_.end(), q);
    std::size_t i = static_cast<std::size_t>(it - x_.begin());
    if (i == 0) return 0;
    if (i >= x_.size()) return x_.size() - 2;
    return i - 1;
}

double MonotoneCubic::operator()(double q) const {
    const std::size_t i = interval(q);
    const double h = x_[i + 1] - x_[i];
    const double t = (q - x_[i]) / h;
    const double t2 = t * t;
    const double t3 = t2 * t;
    const double h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
    const double h10 = t3 - 2.0 * t2 + t;
    const double h01 = -2.0 * t3 + 3.0 * t2;
    const double h11 = t3 - t2;
    return h00 * y_[i] + h10 * h * d_[i] + h01 * y_[i + 1] + h11 * h * d_[i + 1];
}

double MonotoneCubic::derivative(double q) const {
    const std::size_t i = interval(q);
    const double h = x_[i + 1] - x_[i];
    const double t = (q - x_[i]) / h;
    const double dh00 = (6.0 * t * t - 6.0 * t) / h;
    const double dh10 = 3.0 * t * t - 4.0 * t + 1.0;
    const double dh01 = (-6.0 * t * t + 6.0 * t) / h;
    const double dh11 = 3.0 * t * t - 2.0 * t;
    return dh00 * y_[i] + dh10 * d_[i] + dh01 * y_[i + 1] + dh11 * d_[i + 1];
}

} // namespace maxkin
