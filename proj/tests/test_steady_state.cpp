#include <doctest.h>

#include "maxkin/steady_state.hpp"

#include <cmath>
#include <stdexcept>

using namespace maxkin;

TEST_CASE("ab kernel: elastic closed forms and invariants") {
    auto kern = build_ab_kernel(1.0, RestitutionLaw::deterministic(1.0));
    REQUIRE(kern.tables.size() == 1);
    const auto& tab = kern.tables.front();
    for (std::size_t i = 0; i < kern.nodes.size(); ++i) {
        const double c = kern.nodes[i];
        // elastic: a^2 = (1-c)/2, b^2 = (1+c)/2, a^2+b^2 = 1 pointwise
        CHECK(tab.a[i] * tab.a[i] == doctest::Approx((1.0 - c) / 2.0).epsilon(1e-14));
        CHECK(tab.b[i] * tab.b[i] == doctest::Approx((1.0 + c) / 2.0).epsilon(1e-14));
        CHECK(tab.a[i] + tab.b[i] >= 1.0 - 1e-12);
    }
}

TEST_CASE("ab kernel: normalization and a+b >= 1 for conservative laws") {
    for (double e : {0.5, 0.9}) {
        auto kern = build_ab_kernel(e, make_canonical_two_point(e));
        double norm = 0.0;
        for (const auto& tab : kern.tables)
            for (std::size_t i = 0; i < kern.nodes.size(); ++i) {
                CHECK(tab.a[i] + tab.b[i] >= 1.0 - 1e-12);
                norm += tab.prob * 0.5 * kern.weights[i] *
                        (tab.a[i] * tab.a[i] + tab.b[i] * tab.b[i]);
            }
        CHECK(norm == doctest::Approx(1.0).epsilon(1e-10));
    }
}

TEST_CASE("apply_R on analytic profiles: Gaussian fixed point, constant 1, Jensen bound") {
    auto elastic = build_ab_kernel(1.0, RestitutionLaw::deterministic(1.0));
    std::vector<double> xs;
    for (int i = 0; i <= 200; ++i) xs.push_back(12.0 * i / 200.0);

    // elastic kernel fixes every Gaussian exactly (a^2 + b^2 = 1 pointwise)
    for (double c : {0.5, 1.0 / 6.0}) {
        auto vals = apply_R_values(elastic, [c](double x) { return std::exp(-c * x * x); }, xs);
        for (std::size_t i = 0; i < xs.size(); ++i)
            CHECK(std::fabs(vals[i] - std::exp(-c * xs[i] * xs[i])) < 1e-12);
    }

    auto cons = build_ab_kernel(0.9, make_canonical_two_point(0.9));
    // psi == 1 is fixed (normalization)
    auto ones = apply_R_values(cons, [](double) { return 1.0; }, xs);
    for (double v : ones) CHECK(v == doctest::Approx(1.0).epsilon(1e-14));
    // Jensen: R[gaussian] >= gaussian pointwise for the conservative kernel
    auto vals = apply_R_values(cons, [](double x) { return std::exp(-0.5 * x * x); }, xs);
    for (std::size_t i = 0; i < xs.size(); ++i)
        CHECK(vals[i] >= std::exp(-0.5 * xs[i] * xs[i]) - 1e-13);
}

TEST_CASE("apply_R on a grid profile preserves psi(0)=1 and [0,1] bounds") {
    auto cons = build_ab_kernel(0.9, make_canonical_two_point(0.9));
    SteadyGridSpec spec;
    spec.n = 401;
    RadialFourierProfile psi;
    psi.xgrid = spec.make();
    psi.psi.resize(psi.xgrid.size());
    for (std::size_t i = 0; i < psi.xgrid.size(); ++i)
        psi.psi[i] = std::exp(-std::min(350.0, 0.5 * psi.xgrid[i] * psi.xgrid[i]));
    auto out = apply_R(psi, cons);
    CHECK(out.psi.front() == 1.0);
    for (std::size_t i = 0; i < out.psi.size(); ++i) {
        CHECK(out.psi[i] >= 0.0);
        CHECK(out.psi[i] <= 1.0);
        CHECK(out.psi[i] >= psi.psi[i] - 1e-10); // monotone increase from the Gaussian
    }
}

TEST_CASE("solve_steady_state: canonical e=0.9 converges monotonically to a nontrivial profile") {
    auto kern = build_ab_kernel(0.9, make_canonical_two_point(0.9));
    SteadySolveOptions opt;
    auto sol = solve_steady_state(kern, opt);
    CHECK(sol.iterations < 200);
    CHECK(sol.final_change < opt.tol);
    CHECK(sol.max_monotonicity_violation <= opt.mono_slack);
    CHECK(sol.raw_second_moment == doctest::Approx(3.0).epsilon(1e-9));
    CHECK(sol.profile.argument_scale == doctest::Approx(std::sqrt(3.0)).epsilon(1e-9));
    // rescaled profile has unit second moment
    CHECK(sol.profile.second_moment() == doctest::Approx(1.0).epsilon(2e-4));
    CHECK(sol.profile.psi.back() < 0.5);
    CHECK(sol.profile.is_nonincreasing(1e-10));

    // self-consistency: fixed point of apply_R within 10x solver tolerance
    auto image = apply_R(sol.profile, kern);
    double resid = 0.0;
    for (std::size_t i = 0; i < image.psi.size(); ++i)
        resid = std::max(resid, std::fabs(image.psi[i] - sol.profile.psi[i]));
    CHECK(resid < 10.0 * opt.tol * 100); // interpolation-limited; see grid test below
}

TEST_CASE("solve_steady_state: stability under grid doubling") {
    auto kern = build_ab_kernel(0.9, make_canonical_two_point(0.9));
    SteadySolveOptions opt1;
    opt1.grid.n = 801;
    SteadySolveOptions opt2;
    opt2.grid.n = 1601;
    auto s1 = solve_steady_state(kern, opt1);
    auto s2 = solve_steady_state(kern, opt2);
    MonotoneCubic fine(s2.profile.xgrid, s2.profile.psi);
    double diff = 0.0;
    for (std::size_t i = 0; i < s1.profile.xgrid.size(); ++i)
        diff = std::max(diff, std::fabs(s1.profile.psi[i] - fine(s1.profile.xgrid[i])));
    CHECK(diff < 1e-6);
}

TEST_CASE("solve_steady_state rejects non-conservative laws") {
    auto kern = build_ab_kernel(0.7, RestitutionLaw::deterministic(0.7));
    CHECK_THROWS_AS(solve_steady_state(kern), std::invalid_argument);
}

TEST_CASE("condd: canonical trend vanishes, atom at etilde=1 is flagged, elastic benign") {
    const std::vector<double> deltas{0.3, 0.1, 0.03, 0.01};
    auto canon = condd_check(0.9, make_canonical_two_point(0.9), deltas);
    CHECK(!canon.flagged);
    for (std::size_t i = 1; i < canon.entries.size(); ++i)
        CHECK(canon.entries[i].sum() < canon.entries[i - 1].sum());
    CHECK(canon.entries.back().sum() < 1e-3);

    // law with an atom exactly at eta = 1-e
    const double e = 0.8;
    auto bad = RestitutionLaw::discrete(
        e, {{1.0 - e, 0.3}, {-0.3 / 0.7 * (1.0 - e), 0.7}});
    auto rep = condd_check(e, bad, deltas);
    CHECK(rep.flagged);
    CHECK(rep.b_degenerate_mass == doctest::Approx(0.3).epsilon(1e-12));

    // elastic deterministic: degenerate but benign; P(a<delta) is the
    // continuous angle measure 2 delta^2 (cos t > 1 - 2 delta^2)
    auto el = condd_check(1.0, RestitutionLaw::deterministic(1.0), deltas);
    CHECK(!el.flagged);
    for (std::size_t i = 0; i < deltas.size(); ++i)
        CHECK(el.entries[i].p_a ==
              doctest::Approx(std::min(1.0, deltas[i] * deltas[i])).epsilon(1e-12));
}

TEST_CASE("gevrey check: analytic Gaussian, converged profile, synthetic slow decay") {
    RadialFourierProfile g;
    SteadyGridSpec spec;
    g.xgrid = spec.make();
    g.psi.resize(g.xgrid.size());
    for (std::size_t i = 0; i < g.xgrid.size(); ++i)
        g.psi[i] = std::exp(-std::min(350.0, 0.5 * g.xgrid[i] * g.xgrid[i]));
    auto repg = gevrey_check(g, 4.0);
    CHECK(repg.feasible);
    CHECK(repg.largest.kappa == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(repg.largest.mu >= 2.0); // e^{-x^2/2} <= e^{-mu x} for x >= 4 iff mu <= x/2

    auto kern = build_ab_kernel(0.9, make_canonical_two_point(0.9));
    auto sol = solve_steady_state(kern);
    auto rep = gevrey_check(sol.profile, 4.0);
    CHECK(rep.feasible);
    CHECK(rep.largest.kappa > 0.0);
    CHECK(rep.largest.mu > 0.0);

    // power-law-like slow decay: no exponential envelope on the tested range
    RadialFourierProfile slow;
    slow.xgrid = g.xgrid;
    slow.psi.resize(g.xgrid.size());
    for (std::size_t i = 0; i < g.xgrid.size(); ++i)
        slow.psi[i] = 1.0 / (1.0 + g.xgrid[i] * g.xgrid[i]);
    auto reps = gevrey_check(slow, 4.0);
    // mu_max = min over x >= 4 of -log(psi)/x -> 0 as the grid extends; the
    // largest feasible mu collapses towards zero, far below any honest envelope
    CHECK(reps.largest.mu < 0.2);
}

TEST_CASE("invert_radial: Gaussian transform pair and normalization") {
    RadialFourierProfile g;
    SteadyGridSpec spec;
    g.xgrid = spec.make();
    g.psi.resize(g.xgrid.size());
    for (std::size_t i = 0; i < g.xgrid.size(); ++i)
        g.psi[i] = std::exp(-std::min(350.0, g.xgrid[i] * g.xgrid[i] / 6.0));
    std::vector<double> vgrid;
    for (int i = 1; i <= 500; ++i) vgrid.push_back(5.0 * i / 500.0);
    auto dens = invert_radial(g, vgrid);
    CHECK(dens.mass == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(dens.second_moment == doctest::Approx(1.0).epsilon(1e-2));
    // pointwise Maxwellian with sigma^2 = 1/3
    const double pref = std::pow(2.0 * std::acos(-1.0) / 3.0, -1.5);
    for (std::size_t i = 0; i < vgrid.size(); i += 50) {
        const double maxw = pref * std::exp(-1.5 * vgrid[i] * vgrid[i]);
        CHECK(dens.f[i] == doctest::Approx(maxw).epsilon(1e-4).scale(1.0));
    }
}

TEST_CASE("steady profile is overpopulated against the equal-energy Maxwellian") {
    auto kern = build_ab_kernel(0.9, make_canonical_two_point(0.9));
    auto sol = solve_steady_state(kern);
    std::vector<double> vgrid;
    for (int i = 1; i <= 300; ++i) vgrid.push_back(6.0 * i / 300.0);
    auto dens = invert_radial(sol.profile, vgrid);
    CHECK(dens.mass == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(dens.second_moment == doctest::Approx(1.0).epsilon(2e-2));
    const double pref = std::pow(2.0 * std::acos(-1.0) / 3.0, -1.5);
    // ratio to the Maxwellian increases on the outer grid
    double prev = 0.0;
    bool increasing = true;
    for (double v = 2.0; v <= 4.5; v += 0.5) {
        const std::size_t i = static_cast<std::size_t>(v / 6.0 * 300.0) - 1;
        const double ratio = dens.f[i] / (pref * std::exp(-1.5 * vgrid[i] * vgrid[i]));
        if (ratio < prev) increasing = false;
        prev = ratio;
    }
    CHECK(increasing);
    CHECK(prev > 1.0);
}
