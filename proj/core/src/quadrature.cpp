#include "maxkin/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace maxkin {

GaussLegendre::GaussLegendre(int n) {
    if (n < 2) throw std::invalid_argument("GaussLegendre: need n >= 2");
    nodes.resize(n);
    weights.resize(n);
    // Newton iteration from Chebyshev initial guesses.
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (x * p0 - p1) / (x * x - 1.0);
            double dx = p0 / pp;
            x -= dx;
            if (std::fabs(dx) < 1e-15) break;
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = 2.0 / ((1.0 - x * x) * pp * pp);
        weights[n - 1 - i] = weights[i];
    }
}

namespace {

// Kronrod 15 / Gauss 7 pair on [-1,1]
constexpr double kXgk[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728};
constexpr double kWg[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469};

struct PanelResult {
    double kronrod;
    double err;
};

PanelResult gk15(const std::function<double(double)>& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const double fc = f(c);
    double resg = fc * kWg[3];
    double resk = fc * kWgk[7];
    for (int j = 0; j < 7; ++j) {
        const double x = h * kXgk[j];
        const double f1 = f(c - x);
        const double f2 = f(c + x);
        resk += kWgk[j] * (f1 + f2);
        if (j % 2 == 1) resg += kWg[j / 2] * (f1 + f2);
    }
    return {resk * h, std::fabs((resk - resg) * h)};
}

void adapt(const std::function<double(double)>& f, double a, double b, double tol, int depth,
           int max_depth, double& acc, double& err_acc, bool& ok) {
    PanelResult r = gk15(f, a, b);
    if (r.err <= tol || depth >= max_depth) {
        acc += r.kronrod;
        err_acc += r.err;
        if (r.err > tol && depth >= max_depth) ok = false;
        return;
    }
    const double m = 0.5 * (a + b);
    adapt(f, a, m, 0.5 * tol, depth + 1, max_depth, acc, err_acc, ok);
    adapt(f, m, b, 0.5 * tol, depth + 1, max_depth, acc, err_acc, ok);
}

} // namespace

QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                    double abs_tol, int max_depth) {
    QuadratureResult out;
    bool ok = true;
    adapt(f, a, b, abs_tol, 0, max_depth, out.value, out.est_abs_error, ok);
    out.converged = ok;
    return out;
}

double simpson_uniform(const std::vector<double>& y, double h) {
    const std::size_t n = y.size();
    if (n < 3 || n % 2 == 0) throw std::invalid_argument("simpson_uniform: need odd point count >= 3");
    double s = y.front() + y.back();
    for (std::size_t i = 1; i + 1 < n; ++i) s += y[i] * (i % 2 == 1 ? 4.0 : 2.0);
    return s * h / 3.0;
}

double trapezoid(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("trapezoid: bad input");
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < x.size(); ++i) s += 0.5 * (y[i] + y[i + 1]) * (x[i + 1] - x[i]);
    return s;
}

} // namespace maxkin
