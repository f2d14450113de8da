#include <doctest.h>

#include "maxkin/restitution.hpp"

#include <cmath>
#include <stdexcept>

using namespace maxkin;

TEST_CASE("two-point law: canonical atoms and probabilities") {
    // e = 0.9, rho = sqrt(1-e^2)/e: etilde in {0, 1/e}, probs {1-e^2, e^2}
    const double e = 0.9;
    auto law = make_canonical_two_point(e);
    REQUIRE(law.atoms().size() == 2);
    const auto& a = law.atoms();
    CHECK(std::fabs(e + a[0].value) < 1e-15);
    CHECK(e + a[1].value == doctest::Approx(1.0 / e).epsilon(1e-15));
    CHECK(a[0].prob == doctest::Approx(1.0 - e * e).epsilon(1e-15));
    CHECK(a[1].prob == doctest::Approx(e * e).epsilon(1e-15));
}

TEST_CASE("two-point law: elastic degenerate case and support rejection") {
    auto elastic = make_two_point(1.0, 5.0);
    CHECK(elastic.kind() == LawKind::Deterministic);
    CHECK(elastic.beta2() == 0.0);
    CHECK_THROWS_AS(make_two_point(0.0, 1.0), std::invalid_argument);
    // rho below sqrt(1-e^2)/e puts the negative atom under -e
    CHECK_THROWS_AS(make_two_point(0.5, 0.5), std::invalid_argument);
}

TEST_CASE("two-point law e=0.5 rho=2: exact mean and variance") {
    const double e = 0.5, rho = 2.0;
    auto law = make_two_point(e, rho);
    const double c = std::sqrt(0.75);
    const auto& a = law.atoms();
    CHECK(a[0].value == doctest::Approx(-c / 2.0).epsilon(1e-15));
    CHECK(a[0].prob == doctest::Approx(0.8).epsilon(1e-15));
    CHECK(a[1].value == doctest::Approx(2.0 * c).epsilon(1e-15));
    CHECK(a[1].prob == doctest::Approx(0.2).epsilon(1e-15));
    CHECK(std::fabs(law.moment(1.0, MomentOf::Eta)) < 1e-12);
    CHECK(law.moment(2.0, MomentOf::Eta) == doctest::Approx(0.75).epsilon(1e-14));
}

TEST_CASE("moments: deterministic, canonical fourth power, cubes vs direct sum") {
    auto det = RestitutionLaw::deterministic(0.7);
    CHECK(det.moment(2.0, MomentOf::Eta) == 0.0);

    // <etilde^4> = 1/e^2 for the canonical two-point law
    const double e = 0.9;
    auto law = make_canonical_two_point(e);
    CHECK(law.moment(4.0, MomentOf::EtildePower) == doctest::Approx(1.0 / (e * e)).epsilon(1e-14));

    auto law2 = make_two_point(0.5, 2.0);
    const auto& at = law2.atoms();
    const double direct = at[0].prob * std::pow(at[0].value, 3) + at[1].prob * std::pow(at[1].value, 3);
    CHECK(law2.moment(3.0, MomentOf::Eta) == doctest::Approx(direct).epsilon(1e-14));
}

TEST_CASE("uniform-shifted law: quadrature moments match closed forms") {
    const double e = 0.9, h = std::sqrt(3.0 * (1.0 - e * e));
    auto law = RestitutionLaw::uniform_shifted(e, h);
    CHECK(law.conservative());
    CHECK(std::fabs(law.moment(1.0, MomentOf::Eta)) < 1e-12);
    CHECK(law.moment(2.0, MomentOf::Eta) == doctest::Approx(h * h / 3.0).epsilon(1e-12));
    CHECK(law.moment(4.0, MomentOf::Eta) == doctest::Approx(h * h * h * h / 5.0).epsilon(1e-10));
    // half width above e violates the support bound
    CHECK_THROWS_AS(RestitutionLaw::uniform_shifted(0.3, 0.4), std::invalid_argument);
}

TEST_CASE("discrete law validation") {
    CHECK_THROWS_AS(RestitutionLaw::discrete(0.5, {{0.1, 0.6}, {0.2, 0.6}}), std::invalid_argument);
    CHECK_THROWS_AS(RestitutionLaw::discrete(0.5, {{0.3, 0.5}, {0.1, 0.5}}), std::invalid_argument);
    // economy context: support bound is -lambda
    CHECK_THROWS_AS(
        RestitutionLaw::discrete(0.3, {{-0.5, 0.5}, {0.5, 0.5}}, LawContext::Economy1D),
        std::invalid_argument);
    auto ok = RestitutionLaw::discrete(0.5, {{-0.5, 0.5}, {0.5, 0.5}}, LawContext::Economy1D);
    CHECK(ok.beta2() == doctest::Approx(0.25).epsilon(1e-15));
}

TEST_CASE("sampling: support, frequencies, and moment agreement") {
    const double e = 0.9;
    auto law = make_canonical_two_point(e);
    Rng rng(42);
    const int n = 1000000;
    int zeros = 0;
    double mean = 0.0, var = 0.0;
    for (int i = 0; i < n; ++i) {
        const double eta = law.sample(rng);
        const double et = e + eta;
        const bool at_zero = std::fabs(et) < 1e-12;
        const bool at_inv = std::fabs(et - 1.0 / e) < 1e-12;
        REQUIRE((at_zero || at_inv)); // only the two atom values ever occur
        zeros += at_zero;
        mean += eta;
        var += eta * eta;
    }
    mean /= n;
    var /= n;
    // empirical frequency of etilde = 0 is 1-e^2 = 0.19 within 4 binomial sigma
    const double p = 1.0 - e * e;
    const double se_p = std::sqrt(p * (1.0 - p) / n);
    CHECK(std::fabs(zeros / static_cast<double>(n) - p) < 4.0 * se_p);
    // empirical mean/variance within 4 standard errors
    const double m4 = law.moment(4.0, MomentOf::Eta);
    const double b2 = law.beta2();
    CHECK(std::fabs(mean) < 4.0 * std::sqrt(b2 / n));
    CHECK(std::fabs(var - b2) < 4.0 * std::sqrt((m4 - b2 * b2) / n));
}

TEST_CASE("quadrature moments agree with Monte Carlo for the continuous law") {
    const double e = 0.9;
    auto law = RestitutionLaw::uniform_shifted(e, 0.7);
    Rng rng(7);
    const int n = 1000000;
    for (double s : {1.0, 2.0, 3.0, 4.0}) {
        double acc = 0.0, acc2 = 0.0;
        Rng r2(rng.raw());
        for (int i = 0; i < n; ++i) {
            const double xs = std::pow(law.sample(r2), s);
            acc += xs;
            acc2 += xs * xs;
        }
        acc /= n;
        acc2 /= n;
        const double se = std::sqrt(std::max(0.0, acc2 - acc * acc) / n);
        CHECK(std::fabs(law.moment(s, MomentOf::Eta) - acc) < 4.0 * se + 1e-12);
    }
}

TEST_CASE("conservative invariants across constructible laws") {
    for (double e : {0.5, 0.7, 0.9, 0.99}) {
        auto law = make_canonical_two_point(e);
        CHECK(std::fabs(law.moment(1.0, MomentOf::Eta)) < 1e-12);
        CHECK(std::fabs(law.moment(2.0, MomentOf::Eta) - law.beta2()) < 1e-12);
        CHECK(std::fabs(law.beta2() - (1.0 - e * e)) < 1e-12);
        CHECK(law.support_min() >= -e - 1e-15);
    }
}
