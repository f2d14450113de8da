#include <doctest.h>

#include "maxkin/dsmc.hpp"

#include <cmath>
#include <stdexcept>

using namespace maxkin;

TEST_CASE("init_ensemble: requested empirical moments within sampling error") {
    auto g = init_ensemble(Dim::D3, 100000, Gaussian3D{1.0}, 31);
    CHECK(g.mean_velocity().norm() < 1e-12); // explicit centering
    CHECK(std::fabs(g.temperature() - 1.0) < 4.0 * std::sqrt(2.0 / 3.0 / 100000.0) + 1e-3);

    auto e = init_ensemble(Dim::D1, 100000, ExponentialWealth{1.0}, 32);
    CHECK(std::fabs(e.mean_wealth() - 1.0) < 4.0 / std::sqrt(100000.0));

    FromSamples1D s{{1.0, 2.0, 3.0}};
    auto f = init_ensemble(Dim::D1, 3, s, 33);
    CHECK(f.v1 == std::vector<double>{1.0, 2.0, 3.0});

    CHECK_THROWS_AS(init_ensemble(Dim::D1, 1, ExponentialWealth{1.0}, 0), std::invalid_argument);
    CHECK_THROWS_AS(init_ensemble(Dim::D3, 100, Gaussian3D{-1.0}, 0), std::invalid_argument);
    CHECK_THROWS_AS(init_ensemble(Dim::D1, 100, Gaussian3D{1.0}, 0), std::invalid_argument);
}

TEST_CASE("step: elastic rule preserves energy exactly per stride") {
    auto ens = init_ensemble(Dim::D3, 2000, Gaussian3D{1.0}, 34);
    const CollisionRule3D elastic(1.0, RestitutionLaw::deterministic(1.0));
    Rng rng(100);
    const double t0 = ens.temperature();
    for (int i = 0; i < 20; ++i) step(ens, elastic, 0.05, rng);
    CHECK(ens.temperature() == doctest::Approx(t0).epsilon(1e-12));
}

TEST_CASE("step: momentum conserved to 1e-10 relative per unit time") {
    auto ens = init_ensemble(Dim::D3, 10000, Gaussian3D{1.0}, 35);
    const CollisionRule3D rule(0.9, make_canonical_two_point(0.9));
    Rng rng(101);
    for (int i = 0; i < 100; ++i) step(ens, rule, 0.01, rng);
    // initial momentum is exactly centered; scale against thermal momentum
    const double scale = std::sqrt(ens.temperature() * ens.size());
    CHECK(ens.mean_velocity().norm() * ens.size() < 1e-10 * scale * ens.size());
}

TEST_CASE("step: dt validation and dimension/rule mismatch") {
    auto ens = init_ensemble(Dim::D3, 100, Gaussian3D{1.0}, 36);
    const CollisionRule3D rule(0.9, make_canonical_two_point(0.9));
    Rng rng(102);
    CHECK_THROWS_AS(step(ens, rule, 0.5, rng), std::invalid_argument);
    auto law = RestitutionLaw::discrete(0.5, {{-0.5, 0.5}, {0.5, 0.5}}, LawContext::Economy1D);
    const TradeRule1D r1(0.5, law);
    CHECK_THROWS_AS(step(ens, AnyRule(r1), 0.01, rng), std::invalid_argument);
}

TEST_CASE("poisson collision count: empirical mean ~ N dt/2") {
    Rng rng(103);
    const double mean = 10000 * 0.05 / 2.0;
    double acc = 0.0;
    const int reps = 4000;
    for (int i = 0; i < reps; ++i) acc += static_cast<double>(rng.poisson(mean));
    acc /= reps;
    CHECK(std::fabs(acc - mean) < 4.0 * std::sqrt(mean / reps));
}

TEST_CASE("determinism: identical seed and config give bitwise-identical trajectories") {
    const CollisionRule3D rule(0.9, make_canonical_two_point(0.9));
    auto run = [&] {
        auto ens = init_ensemble(Dim::D3, 500, Gaussian3D{1.0}, 4242);
        Rng rng(derive_seed(4242, "test-stream"));
        for (int i = 0; i < 50; ++i) step(ens, rule, 0.05, rng);
        return ens.v3;
    };
    const auto a = run();
    const auto b = run();
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].x == b[i].x);
        CHECK(a[i].y == b[i].y);
        CHECK(a[i].z == b[i].z);
    }
}

TEST_CASE("1D wealth: nonnegativity and mean-martingale over replicas") {
    auto law = RestitutionLaw::discrete(0.5, {{-0.5, 0.5}, {0.5, 0.5}}, LawContext::Economy1D);
    const TradeRule1D rule(0.5, law);
    const int R = 40;
    double drift = 0.0, drift2 = 0.0;
    for (int r = 0; r < R; ++r) {
        auto ens = init_ensemble(Dim::D1, 2000, ExponentialWealth{1.0},
                                 derive_seed(9, "mart", static_cast<std::uint64_t>(r)));
        Rng rng(derive_seed(10, "mart-stream", static_cast<std::uint64_t>(r)));
        const double m0 = ens.mean_wealth();
        for (int i = 0; i < 100; ++i) step(ens, rule, 0.05, rng);
        for (double v : ens.v1) REQUIRE(v >= 0.0);
        const double d = ens.mean_wealth() - m0;
        drift += d;
        drift2 += d * d;
    }
    drift /= R;
    const double se = std::sqrt((drift2 / R - drift * drift) / (R - 1.0));
    CHECK(std::fabs(drift) < 4.0 * se + 1e-12);
}

TEST_CASE("run_experiment: identical seeds and initial data give zero distances") {
    auto law = RestitutionLaw::discrete(0.5, {{-0.5, 0.5}, {0.5, 0.5}}, LawContext::Economy1D);
    const TradeRule1D rule(0.5, law);
    auto a = init_ensemble(Dim::D1, 1000, ExponentialWealth{1.0}, 77);
    auto b = a; // same seed -> same stream -> identical trajectories
    MetricOptions mo;
    mo.ds_orders = {2.0};
    mo.kgrid = geometric_grid(0.1, 5.0, 20);
    auto rec = run_experiment(a, b, AnyRule(rule), 2.0, 0.05, 0.5, {1.0, 2.0}, mo);
    for (double w : rec.metrics.w2) CHECK(w == 0.0);
    for (const auto& [s, series] : rec.metrics.ds)
        for (double v : series) CHECK(v == 0.0);
}

TEST_CASE("fit_exponential_rate: synthetic signals") {
    std::vector<double> t, y;
    for (int i = 0; i <= 100; ++i) {
        t.push_back(0.1 * i);
        y.push_back(3.0 * std::exp(-0.7 * 0.1 * i));
    }
    auto fit = fit_exponential_rate(t, y, 0.0, 10.0);
    CHECK(std::fabs(fit.rate + 0.7) < 1e-9);
    CHECK(fit.r2 == doctest::Approx(1.0).epsilon(1e-12));

    std::vector<double> c(t.size(), 2.5);
    auto fc = fit_exponential_rate(t, c, 0.0, 10.0);
    CHECK(std::fabs(fc.rate) < 1e-12);

    // noisy decay: rate within 5%
    Rng rng(55);
    std::vector<double> yn;
    for (double ti : t) yn.push_back(std::exp(-0.5 * ti) * (1.0 + 0.01 * rng.normal()));
    auto fn = fit_exponential_rate(t, yn, 0.0, 10.0);
    CHECK(std::fabs(fn.rate + 0.5) < 0.05 * 0.5);

    std::vector<double> bad = y;
    bad[50] = -1.0;
    CHECK_THROWS_AS(fit_exponential_rate(t, bad, 0.0, 10.0), std::invalid_argument);
}

TEST_CASE("conservative 3D: replica temperature drift consistent with zero") {
    // scaled-down version of the conservation experiment: 20 replicas, N = 2000
    const CollisionRule3D rule(0.9, make_canonical_two_point(0.9));
    const int R = 20;
    double drift = 0.0, drift2 = 0.0;
    for (int r = 0; r < R; ++r) {
        auto ens = init_ensemble(Dim::D3, 2000, Gaussian3D{1.0},
                                 derive_seed(21, "cons", static_cast<std::uint64_t>(r)));
        Rng rng(derive_seed(22, "cons-stream", static_cast<std::uint64_t>(r)));
        const double t0 = ens.temperature();
        for (int i = 0; i < 100; ++i) step(ens, rule, 0.05, rng);
        const double d = ens.temperature() - t0;
        drift += d;
        drift2 += d * d;
    }
    drift /= R;
    const double se = std::sqrt((drift2 / R - drift * drift) / (R - 1.0));
    CHECK(std::fabs(drift) < 4.0 * se + 1e-12);
}
