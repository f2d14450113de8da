#ifndef MAXKIN_QUADRATURE_HPP
#define MAXKIN_QUADRATURE_HPP

#include <functional>
#include <vector>

namespace maxkin {

struct QuadratureResult {
    double value = 0.0;
    double est_abs_error = 0.0;
    bool converged = false;
};

// Gauss-Legendre nodes/weights on [-1, 1]; weights sum to 2.
struct GaussLegendre {
    std::vector<double> nodes;
    std::vector<double> weights;
    explicit GaussLegendre(int n);
};

// Adaptive Gauss-Kronrod 15(7) on [a, b] to an absolute tolerance.
QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                    double abs_tol, int max_depth = 48);

// Composite Simpson on samples with uniform spacing h (n odd number of points).
double simpson_uniform(const std::vector<double>& y, double h);

// Trapezoid on an arbitrary grid.
double trapezoid(const std::vector<double>& x, const std::vector<double>& y);

} // namespace maxkin

#endif
