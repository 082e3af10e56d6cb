#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "mvu/utility_model.hpp"

using namespace mvu;

TEST_CASE("utility evaluation for the three analytic families") {
    CHECK(UtilityModel::log_utility().eval(1.0) == 0.0);
    CHECK(UtilityModel::power_utility(0.5).eval(4.0) == doctest::Approx(4.0).epsilon(1e-14));
    CHECK(UtilityModel::exponential_utility(3.0).eval(0.0) ==
          doctest::Approx(-1.0 / 3.0).epsilon(1e-14));
    CHECK_THROWS_AS(UtilityModel::log_utility().eval(0.0), DomainError);
    CHECK_THROWS_AS(UtilityModel::power_utility(0.5).eval(-1.0), DomainError);
}

TEST_CASE("family parameter invariants") {
    CHECK_THROWS_AS(UtilityModel::power_utility(0.0), InvalidParameter);
    CHECK_THROWS_AS(UtilityModel::power_utility(1.0), InvalidParameter);
    CHECK_THROWS_AS(UtilityModel::exponential_utility(0.0), InvalidParameter);
    CHECK_NOTHROW(UtilityModel::power_utility(-2.0));
}

TEST_CASE("marginal utility") {
    CHECK(UtilityModel::log_utility().marginal(2.0) == doctest::Approx(0.5));
    CHECK(UtilityModel::power_utility(0.5).marginal(4.0) == doctest::Approx(0.5));
    CHECK(UtilityModel::exponential_utility(1.0).marginal(0.0) == doctest::Approx(1.0));
}

TEST_CASE("inverse marginal utility") {
    CHECK(UtilityModel::log_utility().inverse_marginal(2.0) == doctest::Approx(0.5));
    CHECK(UtilityModel::power_utility(0.5).inverse_marginal(0.5) == doctest::Approx(4.0));
    CHECK(UtilityModel::exponential_utility(3.0).inverse_marginal(std::exp(-0.3)) ==
          doctest::Approx(0.1).epsilon(1e-12));
    CHECK_THROWS_AS(UtilityModel::log_utility().inverse_marginal(0.0), DomainError);
    CHECK_THROWS_AS(UtilityModel::log_utility().inverse_marginal(-1.0), DomainError);
}

TEST_CASE("numeric inverse marginal matches the analytic oracle") {
    // log family supplied as custom without an inverse
    CustomUtility fns;
    fns.eval = [](double c) { return std::log(c); };
    fns.marginal = [](double c) { return 1.0 / c; };
    const UtilityModel u = UtilityModel::custom_utility(fns);
    CHECK(u.inverse_marginal(2.0) == doctest::Approx(0.5).epsilon(1e-11));
    CHECK(u.inverse_marginal(0.001) == doctest::Approx(1000.0).epsilon(1e-11));
    CHECK(u.inverse_marginal(250.0) == doctest::Approx(0.004).epsilon(1e-11));
}

TEST_CASE("round-trip inverse_marginal(marginal(c)) = c for all families") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> unif(0.05, 20.0);
    CustomUtility fns;
    fns.eval = [](double c) { return std::log(c); };
    fns.marginal = [](double c) { return 1.0 / c; };
    const std::vector<UtilityModel> families = {
        UtilityModel::log_utility(), UtilityModel::power_utility(0.5),
        UtilityModel::power_utility(-1.5), UtilityModel::exponential_utility(2.0),
        UtilityModel::custom_utility(fns)};
    for (const auto& u : families) {
        for (int i = 0; i < 100; ++i) {
            const double c = unif(rng);
            const double back = u.inverse_marginal(u.marginal(c));
            CHECK(back == doctest::Approx(c).epsilon(1e-10));
        }
    }
}

TEST_CASE("marginal matches a central finite difference of eval") {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> unif(0.2, 8.0);
    const std::vector<UtilityModel> families = {UtilityModel::log_utility(),
                                                UtilityModel::power_utility(0.3),
                                                UtilityModel::exponential_utility(1.5)};
    for (const auto& u : families) {
        for (int i = 0; i < 50; ++i) {
            const double c = unif(rng);
            const double h = 1e-5 * c;
            const double fd = (u.eval(c + h) - u.eval(c - h)) / (2 * h);
            CHECK(fd == doctest::Approx(u.marginal(c)).epsilon(1e-6));
        }
    }
}

TEST_CASE("power inverse marginal diverges as theta approaches 1 from below") {
    // For fixed v < 1, c = v^{1/(theta-1)} grows without bound as theta -> 1-.
    const double v = 0.5;
    double previous = 0.0;
    for (double theta : {0.1, 0.5, 0.9, 0.99, 0.999}) {
        const double c = UtilityModel::power_utility(theta).inverse_marginal(v);
        CHECK(c > previous);
        previous = c;
    }
    CHECK(previous > 1e90);
}

TEST_CASE("admissibility report") {
    SUBCASE("log family on a positive grid") {
        const std::vector<double> grid{0.5, 1.0, 2.0, 4.0};
        const auto report = admissibility_report(UtilityModel::log_utility(), grid);
        CHECK(report.increasing);
        CHECK(report.concave);
        CHECK(report.zero_value == ZeroValueStatus::not_finite);
    }
    SUBCASE("exponential flags U(0) != 0") {
        const std::vector<double> grid{0.0, 1.0, 2.0};
        const auto report = admissibility_report(UtilityModel::exponential_utility(1.0), grid);
        CHECK(report.increasing);
        CHECK(report.concave);
        CHECK(report.zero_value == ZeroValueStatus::violated);
        CHECK(report.value_at_zero == doctest::Approx(-1.0));
    }
    SUBCASE("convex counterexample flagged") {
        CustomUtility fns;
        fns.eval = [](double c) { return c * c; };
        fns.marginal = [](double c) { return 2.0 * c; };
        const std::vector<double> grid{1.0, 2.0, 3.0};
        const auto report = admissibility_report(UtilityModel::custom_utility(fns), grid);
        CHECK_FALSE(report.concave);
    }
    SUBCASE("grid size guard") {
        const std::vector<double> grid{1.0, 2.0};
        CHECK_THROWS_AS(admissibility_report(UtilityModel::log_utility(), grid),
                        InvalidParameter);
    }
    SUBCASE("power with positive exponent satisfies U(0) = 0") {
        const std::vector<double> grid{0.5, 1.0, 2.0};
        const auto report = admissibility_report(UtilityModel::power_utility(0.5), grid);
        CHECK(report.zero_value == ZeroValueStatus::satisfied);
    }
}
