#include <doctest.h>

#include <cmath>
#include <random>

#include "mvu/problem.hpp"

using namespace mvu;

namespace {

ProblemSpec p0_spec() {
    ProblemSpec spec;  // defaults are the P0 set
    return spec;
}

}  // namespace

TEST_CASE("validate_spec accepts the documented market parameters") {
    ProblemSpec spec = p0_spec();
    CHECK_NOTHROW(validate_spec(spec));
    // idempotent: validating the returned spec again changes nothing
    const ProblemSpec once = validate_spec(spec);
    const ProblemSpec twice = validate_spec(once);
    CHECK(twice.market.mu == once.market.mu);
    CHECK(twice.x0 == once.x0);
}

TEST_CASE("validate_spec rejects mu <= r") {
    ProblemSpec spec = p0_spec();
    spec.market.mu = 0.01;
    spec.market.r = 0.01;
    try {
        validate_spec(spec);
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        REQUIRE(e.violations().size() == 1);
        CHECK(e.violations()[0].name() == "market.mu");
    }
}

TEST_CASE("validate_spec rejects sigma = 0 and reports multiple violations together") {
    ProblemSpec spec = p0_spec();
    spec.market.sigma = 0.0;
    spec.x0 = -1.0;
    try {
        validate_spec(spec);
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        CHECK(e.violations().size() == 2);
        bool saw_sigma = false;
        for (const auto& v : e.violations()) saw_sigma = saw_sigma || v.name() == "market.sigma";
        CHECK(saw_sigma);
    }
}

TEST_CASE("income schedule lookup") {
    SUBCASE("default schedule is zero") {
        IncomeSchedule schedule;
        CHECK(income_at(schedule, 3.0, 10.0) == 0.0);
    }
    SUBCASE("right-continuous at breakpoints") {
        IncomeSchedule schedule({{0.0, 1.0}, {5.0, 2.0}});
        CHECK(income_at(schedule, 5.0, 10.0) == 2.0);
        CHECK(income_at(schedule, 4.999, 10.0) == 1.0);
        CHECK(income_at(schedule, 0.0, 10.0) == 1.0);
    }
    SUBCASE("horizon guard") {
        IncomeSchedule schedule;
        CHECK_THROWS_AS(income_at(schedule, -0.1, 10.0), OutOfHorizon);
        CHECK_THROWS_AS(income_at(schedule, 10.1, 10.0), OutOfHorizon);
    }
    SUBCASE("segment invariants") {
        CHECK_THROWS_AS(IncomeSchedule({{1.0, 1.0}}), InvalidParameter);
        CHECK_THROWS_AS(IncomeSchedule({{0.0, 1.0}, {0.0, 2.0}}), InvalidParameter);
    }
    SUBCASE("negative rates model obligations") {
        IncomeSchedule schedule({{0.0, -0.5}});
        CHECK(income_at(schedule, 1.0, 10.0) == -0.5);
    }
}

TEST_CASE("drift_diffusion matches the wealth dynamics") {
    ProblemSpec spec = p0_spec();
    SUBCASE("bank-only growth") {
        const auto [drift, diff] = drift_diffusion(spec, 0.0, 1.0, 0.0, 0.0);
        CHECK(drift == doctest::Approx(0.01).epsilon(1e-14));
        CHECK(diff == 0.0);
    }
    SUBCASE("all-stock") {
        const auto [drift, diff] = drift_diffusion(spec, 0.0, 1.0, 0.0, 1.0);
        CHECK(drift == doctest::Approx(0.05).epsilon(1e-14));
        CHECK(diff == doctest::Approx(0.2).epsilon(1e-14));
    }
    SUBCASE("hand-evaluated mixed case") {
        ProblemSpec with_income = spec;
        with_income.income = IncomeSchedule({{0.0, 0.05}});
        const auto [drift, diff] = drift_diffusion(with_income, 1.0, 2.0, 0.1, 0.5);
        CHECK(drift == doctest::Approx(0.01 * 2 + 0.5 * 0.04 * 2 + 0.05 - 0.1).epsilon(1e-12));
        CHECK(diff == doctest::Approx(0.2).epsilon(1e-12));
    }
    SUBCASE("non-finite inputs rejected") {
        CHECK_THROWS_AS(drift_diffusion(spec, 0.0, NAN, 0.0, 0.0), DomainError);
    }
}

TEST_CASE("drift is affine in x at fixed controls") {
    ProblemSpec spec = p0_spec();
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> unif(-5.0, 5.0);
    for (int i = 0; i < 100; ++i) {
        const double x1 = unif(rng), x2 = unif(rng);
        const double c = std::abs(unif(rng)), pi = unif(rng);
        const double d1 = drift_diffusion(spec, 1.0, x1, c, pi).first;
        const double d2 = drift_diffusion(spec, 1.0, x2, c, pi).first;
        const double dsum = drift_diffusion(spec, 1.0, x1 + x2, c, pi).first;
        const double d0 = drift_diffusion(spec, 1.0, 0.0, c, pi).first;
        CHECK(dsum - d0 == doctest::Approx(d1 + d2 - 2 * d0).epsilon(1e-10));
    }
}

TEST_CASE("objective_of_triple") {
    Preferences prefs;  // gamma = 1, beta = 1
    SUBCASE("zero variance, zero utility") {
        CHECK(objective_of_triple(1.0, 1.0, 0.0, prefs) == doctest::Approx(1.0));
    }
    SUBCASE("P0 component values reproduce the value function") {
        CHECK(objective_of_triple(-8.494829, 72.562113, -0.5, prefs) ==
              doctest::Approx(-9.194829).epsilon(1e-5));
    }
    SUBCASE("pure variance penalty") {
        Preferences p2;
        p2.gamma = 2.0;
        p2.beta = 0.0;
        CHECK(objective_of_triple(0.0, 1.0, 0.0, p2) == doctest::Approx(-1.0));
    }
    SUBCASE("negative variance rejected") {
        CHECK_THROWS_AS(objective_of_triple(2.0, 1.0, 0.0, prefs), NegativeVariance);
    }
}

TEST_CASE("objective sensitivities have the stated signs") {
    Preferences prefs;
    prefs.gamma = 1.7;
    prefs.beta = 0.4;
    const double y = 1.3, z = 3.0, w = -0.2;
    const double eps = 1e-6;
    const double df_dz =
        (objective_of_triple(y, z + eps, w, prefs) - objective_of_triple(y, z - eps, w, prefs)) /
        (2 * eps);
    const double df_dw =
        (objective_of_triple(y, z, w + eps, prefs) - objective_of_triple(y, z, w - eps, prefs)) /
        (2 * eps);
    CHECK(df_dz == doctest::Approx(-prefs.gamma / 2).epsilon(1e-6));
    CHECK(df_dw == doctest::Approx(prefs.beta).epsilon(1e-6));
}

TEST_CASE("policy dollar defaults to fraction times wealth") {
    Policy policy;
    policy.consumption = [](double) { return 0.0; };
    policy.investment = [](double, double) { return 0.25; };
    CHECK(policy.dollar(0.0, 4.0) == doctest::Approx(1.0));
    policy.dollar_position = [](double, double) { return 7.0; };
    CHECK(policy.dollar(0.0, 4.0) == doctest::Approx(7.0));
}
