#ifndef MAXKIN_METRICS_HPP
#define MAXKIN_METRICS_HPP

#include "maxkin/collision.hpp"

#include <complex>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace maxkin {

// Exact 1D Wasserstein-2 between equally weighted samples: sorted pairing.
// Unequal sizes are resampled onto common quantile midpoints first.
double w2_1d(std::span<const double> a, std::span<const double> b);

// Exact 1D W2 between a sample and an analytic quantile function.
double w2_1d_quantile(std::span<const double> a, const std::function<double(double)>& quantile);

struct SlicedOptions {
    int n_directions = 64;
    // Multiply the direction-averaged 1D W2^2 by the dimension so translations
    // and isotropic dilations are reproduced exactly. The result is an
    // estimator, neither an upper nor a lower bound of W2 in general.
    bool dimension_scaling = true;
};

// Exact small-N optimal coupling (squared Euclidean cost) via the assignment
// solver; capped at n <= 2048.
double w2_3d_exact(std::span<const Vec3> a, std::span<const Vec3> b, std::size_t cap = 2048);

double w2_3d_sliced(std::span<const Vec3> a, std::span<const Vec3> b,
                    const SlicedOptions& opt = {});

// Characteristic function estimate f(k) = mean of exp(-i v.k) on a grid of wave
// numbers. 3D grids are magnitude x direction products over a fixed
// quasi-uniform (Fibonacci) direction set; 1D grids are scalar.
struct EmpiricalCF {
    std::vector<double> kmag;                 // magnitudes (shared axis)
    int n_directions = 1;                     // 1 for 1D
    std::vector<std::complex<double>> values; // size kmag.size() * n_directions
    std::size_t sample_count = 0;

    std::complex<double> at(std::size_t ik, int dir) const {
        return values[ik * static_cast<std::size_t>(n_directions) + static_cast<std::size_t>(dir)];
    }
};

struct CFOptions {
    // Standardize samples (center, unit second moment) before estimating; the
    // d_s theory compares laws with matched moments, and standardizing removes
    // the O(N^{-1/2}) moment drift of finite ensembles.
    bool standardize = false;
    int threads = 1;
};

std::vector<double> geometric_grid(double kmin, double kmax, int n);

EmpiricalCF estimate_cf_1d(std::span<const double> samples, const std::vector<double>& kmag,
                           const CFOptions& opt = {});
EmpiricalCF estimate_cf_3d(std::span<const Vec3> samples, const std::vector<double>& kmag,
                           int n_directions, const CFOptions& opt = {});

// Average CF estimates from replicas (equal weights; equivalent to pooling).
EmpiricalCF average_cf(const std::vector<EmpiricalCF>& cfs);

// d_s(f,g) = sup over the shared grid of |f(k)-g(k)| / |k|^s.
double ds_metric(const EmpiricalCF& fa, const EmpiricalCF& fb, double s);

// Analytic-CF variant with grid refinement until the sup changes by < rel_tol.
double ds_metric_adaptive(const std::function<std::complex<double>(double)>& fa,
                          const std::function<std::complex<double>(double)>& fb, double s,
                          double kmin = 1e-3, double kmax = 20.0, int n0 = 200,
                          double rel_tol = 0.01);

struct HillResult {
    double index = 0.0;
    std::size_t order_statistics = 0;
    // index recomputed on the top quarter fraction; a strong upward drift
    // flags a distribution without a stable power tail
    double quarter_fraction_index = 0.0;
    bool diverging = false;
};

// Standard Hill estimator over the top k_fraction order statistics.
HillResult hill_tail_index(std::span<const double> samples, double k_fraction);

// Fibonacci sphere; deterministic quasi-uniform direction set.
std::vector<Vec3> fibonacci_directions(int n);

} // namespace maxkin

#endif
