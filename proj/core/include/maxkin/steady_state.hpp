#ifndef MAXKIN_STEADY_STATE_HPP
#define MAXKIN_STEADY_STATE_HPP

#include "maxkin/interpolation.hpp"
#include "maxkin/quadrature.hpp"
#include "maxkin/restitution.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace maxkin {

// Isotropic characteristic function psi(x), x = |k|, sampled on an increasing
// grid with x0 = 0. psi(0) = 1 and 0 <= psi <= 1.
struct RadialFourierProfile {
    std::vector<double> xgrid;
    std::vector<double> psi;
    double argument_scale = 1.0; // dilation applied to reach unit second moment

    // monotone-preserving cubic evaluation with exponential tail continuation
    double eval(double x) const;
    // second moment from the curvature at 0: m2 = -3 psi''(0), extracted from a
    // quartic fit of 1 - psi on the near-origin window
    double second_moment() const;
    bool is_nonincreasing(double slack = 1e-12) const;
};

// Angular factors of the Fourier collision kernel:
//   a^2 = ((1+et)/4)^2 2(1-cos t),  b^2 = ((3-et)/4)^2 + ((1+et)/4)^2
//         + 2 ((3-et)/4)((1+et)/4) cos t.
// a+b >= 1 everywhere (|k+| + |k-| >= |k|) and the normalization
// (1/2) < int (a^2+b^2) sin t dt > = 1 holds exactly for conservative laws.
struct ABKernel {
    double e = 1.0;
    RestitutionLaw law = RestitutionLaw::deterministic(1.0);
    std::vector<double> nodes;    // cos(theta) Gauss-Legendre nodes
    std::vector<double> weights;  // weights sum to 2; kernel measure is w/2 * prob
    struct AtomTable {
        double prob;
        std::vector<double> a, b;
    };
    std::vector<AtomTable> tables;
    double etilde_max = 1.0;
};

// Tabulates a, b on n_nodes Gauss-Legendre nodes (>= 32); verifies both kernel
// invariants and throws if either fails. Continuous laws are discretized onto
// a fine Gauss-Legendre grid in eta for the angular tables.
ABKernel build_ab_kernel(double e, const RestitutionLaw& law, int n_nodes = 64);

// R[psi](x) = 1/2 < int psi(ax) psi(bx) sin t dt >, evaluated on the profile's
// grid. Clips into [0,1] and restores psi(0) = 1.
RadialFourierProfile apply_R(const RadialFourierProfile& psi, const ABKernel& kern);

// Same operator applied to an analytic profile at given points; used for exact
// fixed-point checks (e.g. Gaussians under the elastic kernel).
std::vector<double> apply_R_values(const ABKernel& kern, const std::function<double(double)>& psi,
                                   const std::vector<double>& xs);

struct SteadyGridSpec {
    double x_max = 40.0;
    int n = 801;
    double stretch = 4.0; // x_i = x_max (e^{s t}-1)/(e^s - 1), dense near 0
    std::vector<double> make() const;
};

struct SteadySolveOptions {
    SteadyGridSpec grid{};
    double tol = 1e-10;            // sup-norm change between iterations
    int max_iter = 2000;
    double mono_slack = 1e-12;     // allowed pointwise decrease per iteration
    int quadrature_nodes = 64;
    bool rescale_to_unit_energy = true;
    int polish_iterations = 5;     // after the exact dilation
};

struct SteadyStateResult {
    RadialFourierProfile profile;  // rescaled to unit second moment by default
    int iterations = 0;
    double final_change = 0.0;
    double max_monotonicity_violation = 0.0;
    double raw_second_moment = 0.0; // before rescaling (3 for the Gaussian start)
};

// Monotone fixed-point iteration from psi0 = exp(-x^2/2). Internally iterates
// on w = (1-psi)/x^2, which pins the conserved curvature at the origin exactly
// and removes the numerically unstable sub-quadratic perturbation modes (their
// linearized gain approaches 2 in psi form; in w form every mode carries the
// factor A(alpha) <= 1). Requires a conservative law. Fails loudly if the
// iteration is non-monotone beyond mono_slack or lands on the trivial limit.
SteadyStateResult solve_steady_state(const ABKernel& kern, const SteadySolveOptions& opt = {});

struct ConddEntry {
    double delta;
    double p_a;   // P(a < delta) under the atom-and-angle product measure
    double p_b;   // P(b < delta)
    double sum() const { return p_a + p_b; }
};

struct ConddReport {
    std::vector<ConddEntry> entries;
    // eta-mass with etilde = 1, where min over angles of b vanishes; positive
    // mass on a genuinely random law is the pathological case in which the
    // lower-envelope argument for the steady state fails
    double b_degenerate_mass = 0.0;
    bool flagged = false;
};

ConddReport condd_check(double e, const RestitutionLaw& law, const std::vector<double>& deltas);

struct GevreyEnvelope {
    double kappa = 0.0;
    double mu = 0.0;
    double R = 4.0;
};

struct GevreyReport {
    bool feasible = false;
    GevreyEnvelope largest; // largest feasible (kappa, mu) at the requested R
    double psi_floor = 1e-13;
};

// Verifies |psi(x)| <= exp(-kappa x^2) for x < R and <= exp(-mu x) for x >= R;
// reports the largest feasible pair found by direct envelope minimization.
// Grid values below psi_floor are treated as converged-to-zero and skipped.
GevreyReport gevrey_check(const RadialFourierProfile& psi, double R,
                          const std::optional<GevreyEnvelope>& candidate = std::nullopt);

struct RadialDensity {
    std::vector<double> v;
    std::vector<double> f;
    double mass = 0.0;           // 4 pi int v^2 f dv
    double second_moment = 0.0;  // 4 pi int v^4 f dv
};

// 3D isotropic inverse transform f(v) = (2 pi^2 v)^{-1} int x psi(x) sin(xv) dx,
// evaluated with the small-v-stable sinc form.
RadialDensity invert_radial(const RadialFourierProfile& psi, const std::vector<double>& vgrid);

} // namespace maxkin

#endif
