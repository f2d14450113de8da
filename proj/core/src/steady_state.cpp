#include "maxkin/steady_state.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace maxkin {

namespace {

// exponential continuation fitted to the last decade of positive values
struct TailExtension {
    double x_last = 0.0;
    double y_last = 0.0;
    double slope = -1.0;
};

TailExtension fit_tail(const std::vector<double>& x, const std::vector<double>& y) {
    TailExtension t;
    int last = -1;
    for (int i = static_cast<int>(y.size()) - 1; i >= 0; --i) {
        if (y[static_cast<std::size_t>(i)] > 0.0) {
            last = i;
            break;
        }
    }
    if (last < 2) return t;
    const std::size_t ul = static_cast<std::size_t>(last);
    t.x_last = x[ul];
    t.y_last = y[ul];
    const double target = y[ul] * 10.0; // one decade
    std::size_t first = ul;
    while (first > 0 && y[first - 1] > 0.0 && y[first - 1] < target) --first;
    if (ul - first < 3) first = ul >= 3 ? ul - 3 : 0;
    // least-squares slope of log y
    double st = 0.0, sl = 0.0, n = 0.0;
    for (std::size_t i = first; i <= ul; ++i) {
        if (!(y[i] > 0.0)) continue;
        st += x[i];
        sl += std::log(y[i]);
        n += 1.0;
    }
    if (n < 2.0) return t;
    const double mt = st / n, ml = sl / n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = first; i <= ul; ++i) {
        if (!(y[i] > 0.0)) continue;
        sxx += (x[i] - mt) * (x[i] - mt);
        sxy += (x[i] - mt) * (std::log(y[i]) - ml);
    }
    t.slope = sxx > 0.0 ? std::min(-1e-12, sxy / sxx) : -1.0;
    return t;
}

} // namespace

double RadialFourierProfile::eval(double x) const {
    if (x <= 0.0) return 1.0;
    if (x <= xgrid.back()) {
        MonotoneCubic interp(xgrid, psi);
        return std::clamp(interp(x), 0.0, 1.0);
    }
    const TailExtension t = fit_tail(xgrid, psi);
    if (t.y_last <= 0.0) return 0.0;
    return t.y_last * std::exp(t.slope * (x - t.x_last));
}

double RadialFourierProfile::second_moment() const {
    // least squares fit of 1 - psi = c2 x^2 + c4 x^4 on the window where the
    // deficit is resolved but still quadratic-dominated
    double s22 = 0.0, s24 = 0.0, s44 = 0.0, b2 = 0.0, b4 = 0.0;
    std::size_t used = 0;
    for (std::size_t i = 1; i < xgrid.size(); ++i) {
        const double d = 1.0 - psi[i];
        if (d < 1e-4) continue;
        if (d > 0.02) break;
        const double x2 = xgrid[i] * xgrid[i];
        const double x4 = x2 * x2;
        s22 += x4;
        s24 += x4 * x2;
        s44 += x4 * x4;
        b2 += x2 * d;
        b4 += x4 * d;
        ++used;
    }
    if (used < 4) throw std::runtime_error("second_moment: too few resolved near-origin nodes");
    const double det = s22 * s44 - s24 * s24;
    const double c2 = (b2 * s44 - b4 * s24) / det;
    return 6.0 * c2; // psi''(0) = -2 c2, m2 = -3 psi''(0)
}

bool RadialFourierProfile::is_nonincreasing(double slack) const {
    for (std::size_t i = 0; i + 1 < psi.size(); ++i)
        if (psi[i + 1] > psi[i] + slack) return false;
    return true;
}

ABKernel build_ab_kernel(double e, const RestitutionLaw& law, int n_nodes) {
    if (n_nodes < 32) throw std::invalid_argument("build_ab_kernel: need >= 32 nodes");
    if (law.e() != e) throw std::invalid_argument("build_ab_kernel: coefficient mismatch");
    ABKernel kern;
    kern.e = e;
    kern.law = law;
    GaussLegendre gl(n_nodes);
    kern.nodes = gl.nodes;
    kern.weights = gl.weights;
    kern.etilde_max = law.etilde_max();

    std::vector<std::pair<double, double>> etilde_weights;
    if (law.kind() == LawKind::UniformShifted) {
        // discretize the continuous eta law on its own Gauss-Legendre grid
        GaussLegendre glEta(64);
        const double h = law.beta2() > 0.0 ? std::sqrt(3.0 * law.beta2()) : 0.0;
        for (std::size_t i = 0; i < glEta.nodes.size(); ++i)
            etilde_weights.emplace_back(e + h * glEta.nodes[i], glEta.weights[i] / 2.0);
    } else {
        for (const auto& a : law.atoms()) etilde_weights.emplace_back(e + a.value, a.prob);
    }

    double norm = 0.0;
    for (const auto& [et, prob] : etilde_weights) {
        ABKernel::AtomTable tab;
        tab.prob = prob;
        tab.a.resize(kern.nodes.size());
        tab.b.resize(kern.nodes.size());
        const double r = (3.0 - et) / 4.0;
        const double m = (1.0 + et) / 4.0;
        for (std::size_t i = 0; i < kern.nodes.size(); ++i) {
            const double c = kern.nodes[i];
            const double a2 = m * m * 2.0 * (1.0 - c);
            const double b2 = std::max(0.0, r * r + m * m + 2.0 * r * m * c);
            tab.a[i] = std::sqrt(a2);
            tab.b[i] = std::sqrt(b2);
            if (tab.a[i] + tab.b[i] < 1.0 - 1e-12)
                throw std::runtime_error("build_ab_kernel: a+b >= 1 violated; kernel is inconsistent");
            norm += prob * 0.5 * kern.weights[i] * (a2 + b2);
        }
        kern.tables.push_back(std::move(tab));
    }
    const double expected = (3.0 + e * e + law.beta2()) / 4.0; // equals 1 iff conservative
    if (std::fabs(norm - expected) > 1e-10)
        throw std::runtime_error("build_ab_kernel: kernel normalization off by " +
                                 std::to_string(norm - expected));
    return kern;
}

std::vector<double> apply_R_values(const ABKernel& kern, const std::function<double(double)>& psi,
                                   const std::vector<double>& xs) {
    std::vector<double> out(xs.size());
    for (std::size_t ix = 0; ix < xs.size(); ++ix) {
        const double x = xs[ix];
        double acc = 0.0;
        for (const auto& tab : kern.tables) {
            double inner = 0.0;
            for (std::size_t i = 0; i < kern.nodes.size(); ++i)
                inner += kern.weights[i] * psi(tab.a[i] * x) * psi(tab.b[i] * x);
            acc += tab.prob * 0.5 * inner;
        }
        out[ix] = acc;
    }
    return out;
}

RadialFourierProfile apply_R(const RadialFourierProfile& psi, const ABKernel& kern) {
    MonotoneCubic interp(psi.xgrid, psi.psi);
    const TailExtension tail = fit_tail(psi.xgrid, psi.psi);
    const double x_max = psi.xgrid.back();
    auto ev = [&](double q) {
        if (q <= x_max) return std::clamp(interp(q), 0.0, 1.0);
        if (tail.y_last <= 0.0) return 0.0;
        return tail.y_last * std::exp(tail.slope * (q - tail.x_last));
    };
    RadialFourierProfile out;
    out.xgrid = psi.xgrid;
    out.argument_scale = psi.argument_scale;
    out.psi = apply_R_values(kern, ev, psi.xgrid);
    for (auto& v : out.psi) v = std::clamp(v, 0.0, 1.0);
    out.psi[0] = 1.0;
    return out;
}

std::vector<double> SteadyGridSpec::make() const {
    if (n < 16 || !(x_max > 0.0) || !(stretch > 0.0))
        throw std::invalid_argument("SteadyGridSpec: bad parameters");
    std::vector<double> x(static_cast<std::size_t>(n));
    const double denom = std::expm1(stretch);
    for (int i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) / (n - 1.0);
        x[static_cast<std::size_t>(i)] = x_max * std::expm1(stretch * t) / denom;
    }
    x.front() = 0.0;
    x.back() = x_max;
    return x;
}

namespace {

// w-representation helpers: psi = 1 - x^2 w(x)
double w_of_gaussian(double x, double curvature_half) {
    // (1 - exp(-c x^2)) / x^2 with c = curvature_half
    if (x < 1e-4) return curvature_half - curvature_half * curvature_half * x * x / 2.0;
    return -std::expm1(-curvature_half * x * x) / (x * x);
}

struct WEvaluator {
    const MonotoneCubic* interp;
    double x_max;
    TailExtension tail; // of psi
    // evaluate w at q; beyond the grid, recover from the psi tail extension
    double w(double q) const {
        if (q <= x_max) return (*interp)(q);
        const double psi_q =
            tail.y_last > 0.0 ? tail.y_last * std::exp(tail.slope * (q - tail.x_last)) : 0.0;
        return (1.0 - psi_q) / (q * q);
    }
};

std::vector<double> psi_from_w(const std::vector<double>& x, const std::vector<double>& w) {
    std::vector<double> psi(x.size());
    psi[0] = 1.0;
    for (std::size_t i = 1; i < x.size(); ++i)
        psi[i] = std::clamp(1.0 - x[i] * x[i] * w[i], 0.0, 1.0);
    return psi;
}

// w_{n+1}(x) = <a^2 w(ax) + b^2 w(bx)> - x^2 <a^2 w(ax) b^2 w(bx)>
std::vector<double> apply_R_w(const ABKernel& kern, const std::vector<double>& x,
                              const std::vector<double>& w) {
    MonotoneCubic interp(x, w, /*enforce_monotone=*/false);
    WEvaluator ev{&interp, x.back(), fit_tail(x, psi_from_w(x, w))};
    std::vector<double> out(x.size());
    for (std::size_t ix = 0; ix < x.size(); ++ix) {
        const double xx = x[ix];
        double lin = 0.0, quad = 0.0;
        for (const auto& tab : kern.tables) {
            double lin_i = 0.0, quad_i = 0.0;
            for (std::size_t i = 0; i < kern.nodes.size(); ++i) {
                const double a = tab.a[i], b = tab.b[i];
                const double wa = ev.w(a * xx);
                const double wb = ev.w(b * xx);
                const double ta = a * a * wa;
                const double tb = b * b * wb;
                lin_i += kern.weights[i] * (ta + tb);
                quad_i += kern.weights[i] * ta * tb;
            }
            lin += tab.prob * 0.5 * lin_i;
            quad += tab.prob * 0.5 * quad_i;
        }
        out[ix] = lin - xx * xx * quad;
    }
    return out;
}

} // namespace

SteadyStateResult solve_steady_state(const ABKernel& kern, const SteadySolveOptions& opt) {
    if (!kern.law.conservative())
        throw std::invalid_argument(
            "solve_steady_state: requires a conservative law (beta^2 = 1 - e^2)");
    const auto x = opt.grid.make();
    const ABKernel kern_fine =
        kern.nodes.size() >= static_cast<std::size_t>(opt.quadrature_nodes)
            ? kern
            : build_ab_kernel(kern.e, kern.law, opt.quadrature_nodes);

    // spec start psi0 = exp(-x^2/2): w(0) = 1/2, raw second moment 3
    std::vector<double> w(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) w[i] = w_of_gaussian(x[i], 0.5);

    SteadyStateResult res;
    std::vector<double> psi_prev = psi_from_w(x, w);
    double change = 0.0;
    int it = 0;
    for (; it < opt.max_iter; ++it) {
        std::vector<double> w_next = apply_R_w(kern_fine, x, w);
        std::vector<double> psi_next = psi_from_w(x, w_next);
        change = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            change = std::max(change, std::fabs(psi_next[i] - psi_prev[i]));
            const double drop = psi_prev[i] - psi_next[i];
            res.max_monotonicity_violation = std::max(res.max_monotonicity_violation, drop);
        }
        if (res.max_monotonicity_violation > opt.mono_slack)
            throw std::runtime_error(
                "solve_steady_state: iteration decreased by " +
                std::to_string(res.max_monotonicity_violation) +
                "; the monotone-increase property failed numerically");
        w = std::move(w_next);
        psi_prev = std::move(psi_next);
        if (change < opt.tol) {
            ++it;
            break;
        }
    }
    res.iterations = it;
    res.final_change = change;
    if (change >= opt.tol)
        throw std::runtime_error("solve_steady_state: no convergence within max_iter");
    if (psi_prev.back() >= 0.5)
        throw std::runtime_error(
            "solve_steady_state: limit looks trivial (psi(x_max) >= 0.5); the admissibility "
            "condition on the angular factors may fail or the grid is too coarse");

    res.raw_second_moment = 6.0 * w[0];
    RadialFourierProfile prof;
    prof.xgrid = x;
    prof.psi = psi_prev;
    prof.argument_scale = 1.0;

    if (opt.rescale_to_unit_energy) {
        // exact dilation: psi_c(x) = psi(x/c) with c = sqrt(m2) maps fixed
        // points to fixed points and sets the second moment to 1
        const double c = std::sqrt(res.raw_second_moment);
        MonotoneCubic interp(x, w, false);
        WEvaluator ev{&interp, x.back(), fit_tail(x, psi_prev)};
        std::vector<double> w_scaled(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) w_scaled[i] = ev.w(x[i] / c) / (c * c);
        for (int p = 0; p < opt.polish_iterations; ++p)
            w_scaled = apply_R_w(kern_fine, x, w_scaled);
        prof.psi = psi_from_w(x, w_scaled);
        prof.argument_scale = c;
    }
    res.profile = std::move(prof);
    return res;
}

ConddReport condd_check(double e, const RestitutionLaw& law, const std::vector<double>& deltas) {
    if (law.e() != e) throw std::invalid_argument("condd_check: coefficient mismatch");
    ConddReport rep;
    auto per_etilde_a = [&](double et, double delta) {
        // a < delta  <=>  cos t > 1 - 8 delta^2/(1+et)^2; angle measure dc/2
        const double thr = 8.0 * delta * delta / ((1.0 + et) * (1.0 + et));
        return std::clamp(thr / 2.0, 0.0, 1.0);
    };
    auto per_etilde_b = [&](double et, double delta) {
        const double r = (3.0 - et) / 4.0;
        const double m = (1.0 + et) / 4.0;
        if (r * m <= 0.0) return (std::sqrt(r * r + m * m) < delta) ? 1.0 : 0.0;
        const double c_up = (delta * delta - r * r - m * m) / (2.0 * r * m);
        return std::clamp((c_up + 1.0) / 2.0, 0.0, 1.0);
    };
    for (double d : deltas) {
        ConddEntry entry{d, 0.0, 0.0};
        entry.p_a = law.expect_etilde([&](double et) { return per_etilde_a(et, d); });
        entry.p_b = law.expect_etilde([&](double et) { return per_etilde_b(et, d); });
        rep.entries.push_back(entry);
    }
    rep.b_degenerate_mass = law.mass_at_unit_etilde();
    // the elastic deterministic law (beta2 = 0) hits etilde = 1 by construction
    // but is the benign degenerate case, not the pathological atom
    rep.flagged = rep.b_degenerate_mass > 0.0 && law.beta2() > 0.0;
    return rep;
}

GevreyReport gevrey_check(const RadialFourierProfile& psi, double R,
                          const std::optional<GevreyEnvelope>& candidate) {
    GevreyReport rep;
    double kappa = std::numeric_limits<double>::infinity();
    double mu = std::numeric_limits<double>::infinity();
    bool have_inner = false, have_outer = false;
    for (std::size_t i = 1; i < psi.xgrid.size(); ++i) {
        const double x = psi.xgrid[i];
        const double p = psi.psi[i];
        if (p < rep.psi_floor) continue;
        if (x < R) {
            kappa = std::min(kappa, -std::log(p) / (x * x));
            have_inner = true;
        } else {
            mu = std::min(mu, -std::log(p) / x);
            have_outer = true;
        }
    }
    if (!have_inner) kappa = 0.0;
    if (!have_outer) mu = std::numeric_limits<double>::infinity();
    rep.largest = {kappa, mu, R};
    rep.feasible = kappa > 0.0 && mu > 0.0;
    if (candidate) {
        rep.feasible = rep.feasible && candidate->kappa <= kappa + 1e-15 &&
                       candidate->mu <= mu + 1e-15;
    }
    return rep;
}

RadialDensity invert_radial(const RadialFourierProfile& psi, const std::vector<double>& vgrid) {
    if (vgrid.empty()) throw std::invalid_argument("invert_radial: empty velocity grid");
    const double x_max = psi.xgrid.back();
    const double v_top = *std::max_element(vgrid.begin(), vgrid.end());
    // resolve the fastest oscillation sin(x v_top) with ~40 points per period
    const double h_target = std::min(0.005, 2.0 * std::numbers::pi / (40.0 * std::max(1.0, v_top)));
    std::size_t n = static_cast<std::size_t>(std::ceil(x_max / h_target));
    if (n % 2 == 1) ++n;
    const double h = x_max / static_cast<double>(n);
    MonotoneCubic interp(psi.xgrid, psi.psi);
    std::vector<double> xs(n + 1), ps(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
        xs[i] = h * static_cast<double>(i);
        ps[i] = std::clamp(interp(xs[i]), 0.0, 1.0);
    }
    RadialDensity out;
    out.v = vgrid;
    out.f.resize(vgrid.size());
    std::vector<double> integrand(n + 1);
    for (std::size_t iv = 0; iv < vgrid.size(); ++iv) {
        const double v = vgrid[iv];
        for (std::size_t i = 0; i <= n; ++i) {
            const double xv = xs[i] * v;
            const double sinc = xv < 1e-6 ? 1.0 - xv * xv / 6.0 : std::sin(xv) / xv;
            integrand[i] = xs[i] * xs[i] * ps[i] * sinc;
        }
        out.f[iv] = simpson_uniform(integrand, h) / (2.0 * std::numbers::pi * std::numbers::pi);
    }
    // diagnostics on the requested grid
    std::vector<double> m0(vgrid.size()), m2(vgrid.size());
    for (std::size_t i = 0; i < vgrid.size(); ++i) {
        m0[i] = 4.0 * std::numbers::pi * vgrid[i] * vgrid[i] * out.f[i];
        m2[i] = m0[i] * vgrid[i] * vgrid[i];
    }
    out.mass = trapezoid(out.v, m0);
    out.second_moment = trapezoid(out.v, m2);
    return out;
}

} // namespace maxkin
