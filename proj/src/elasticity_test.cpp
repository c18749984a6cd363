#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "infocontract/elasticity.hpp"
#include "infocontract/error.hpp"
#include "test_oracles.hpp"

using infocontract::ElasticityAnalyzer;
using infocontract::SignalDensity;

TEST_CASE("closed-form elasticities") {
    CHECK(ElasticityAnalyzer(SignalDensity::gaussian()).eta(2.0) == doctest::Approx(4.0).epsilon(1e-14));
    CHECK(ElasticityAnalyzer(SignalDensity::laplace()).eta(0.5) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(ElasticityAnalyzer(SignalDensity::truncated_exp_inverse(0.1)).eta(0.5) ==
          doctest::Approx(2.0).epsilon(1e-14));
    const ElasticityAnalyzer uniform(SignalDensity::uniform(1.0));
    CHECK(uniform.eta(0.5) == 0.0);
    CHECK(uniform.eta(1.5) == std::numeric_limits<double>::infinity());
    CHECK_THROWS_AS((void)uniform.eta(0.0), infocontract::DomainError);
    CHECK_THROWS_AS((void)uniform.eta(-1.0), infocontract::DomainError);
}

TEST_CASE("eta inverse") {
    const ElasticityAnalyzer gaussian(SignalDensity::gaussian());
    CHECK(gaussian.eta_inverse(1.0).value == doctest::Approx(1.0).epsilon(2e-9));
    CHECK(gaussian.eta_inverse(2.0).value == doctest::Approx(std::sqrt(2.0)).epsilon(2e-9));
    CHECK_FALSE(gaussian.eta_inverse(1.0).overflow);
    CHECK(ElasticityAnalyzer(SignalDensity::uniform(1.0)).eta_inverse(1.0).value == doctest::Approx(1.0).epsilon(2e-9));
    CHECK(ElasticityAnalyzer(SignalDensity::triangular(2.0)).eta_inverse(1.0).value == doctest::Approx(1.0).epsilon(2e-9));

    // Logistic: x tanh(x/2) = 1, solved independently.
    const double logistic_ref = oracle::bisect([](double x) { return x * std::tanh(0.5 * x) - 1.0; }, 0.5, 3.0);
    CHECK(ElasticityAnalyzer(SignalDensity::logistic()).eta_inverse(1.0).value ==
          doctest::Approx(logistic_ref).epsilon(2e-9));
    CHECK(logistic_ref == doctest::Approx(1.5434).epsilon(1e-4));

    // Laplace elasticity is x, so it never exceeds 100 within the truncated window.
    const auto overflow = ElasticityAnalyzer(SignalDensity::laplace()).eta_inverse(100.0);
    CHECK(overflow.overflow);
}

TEST_CASE("increasing elasticity above n") {
    CHECK(ElasticityAnalyzer(SignalDensity::gaussian()).check_iea(1.0).holds);
    CHECK(ElasticityAnalyzer(SignalDensity::laplace()).check_iea(1.0).holds);
    CHECK(ElasticityAnalyzer(SignalDensity::gaussian()).check_iea(3.0).holds);

    const ElasticityAnalyzer trunc(SignalDensity::truncated_exp_inverse(0.1));
    const auto check = trunc.check_iea(1.0);
    CHECK_FALSE(check.holds);
    REQUIRE(check.witness.has_value());
    const auto [low, high] = *check.witness;
    CHECK(low < high);
    CHECK(trunc.eta(low) > 1.0);
    CHECK(trunc.eta(high) < trunc.eta(low) - 1e-7);
    CHECK(low >= 0.1 - 1e-9);
    CHECK(high <= 1.0 + 1e-9);
}

TEST_CASE("global MLRP and strong unimodality") {
    CHECK(ElasticityAnalyzer(SignalDensity::gaussian()).check_global_mlrp());
    CHECK(ElasticityAnalyzer(SignalDensity::uniform(1.0)).check_global_mlrp());
    CHECK_FALSE(ElasticityAnalyzer(SignalDensity::truncated_exp_inverse(0.1)).check_global_mlrp());

    CHECK(ElasticityAnalyzer(SignalDensity::gaussian()).check_strong_unimodality());
    CHECK(ElasticityAnalyzer(SignalDensity::logistic()).check_strong_unimodality());
    CHECK(ElasticityAnalyzer(SignalDensity::laplace()).check_strong_unimodality());
    CHECK_FALSE(ElasticityAnalyzer(SignalDensity::truncated_exp_inverse(0.1)).check_strong_unimodality());
}

TEST_CASE("global MLRP implies increasing elasticity above 1") {
    for (const auto& density : {SignalDensity::gaussian(), SignalDensity::laplace(), SignalDensity::logistic(),
                                SignalDensity::uniform(1.0), SignalDensity::triangular(1.0),
                                SignalDensity::truncated_exp_inverse(0.1)}) {
        const ElasticityAnalyzer analyzer(density);
        if (analyzer.check_global_mlrp()) {
            CHECK(analyzer.check_iea(1.0).holds);
        }
    }
}

TEST_CASE("profile bundles the threshold and crossing point") {
    const auto profile = ElasticityAnalyzer(SignalDensity::gaussian()).profile(1.0);
    CHECK(profile.eta_inverse_n == doctest::Approx(1.0).epsilon(2e-9));
    CHECK(profile.crossing_point == doctest::Approx(profile.eta_inverse_n).epsilon(2e-9));
    CHECK(profile.iea_holds);
    CHECK(profile.global_mlrp);
    CHECK(profile.strongly_unimodal);
    CHECK(profile.eta(3.0) == doctest::Approx(9.0));

    const auto trunc = ElasticityAnalyzer(SignalDensity::truncated_exp_inverse(0.1)).profile(1.0);
    CHECK(trunc.eta_inverse_n == doctest::Approx(0.1).epsilon(2e-8));
    // eta stays above 1 on [0.1, 1) and is infinite beyond the support, so the last upward
    // crossing is the start of that stretch.
    CHECK(trunc.crossing_point == doctest::Approx(0.1).epsilon(2e-8));
}

TEST_CASE("eta exceeds n just above the threshold") {
    for (const auto& density : {SignalDensity::gaussian(), SignalDensity::logistic(), SignalDensity::laplace()}) {
        const ElasticityAnalyzer analyzer(density);
        for (double n : {1.0, 2.0, 3.0}) {
            if (!analyzer.check_iea(n).holds) {
                continue;
            }
            const double x = analyzer.eta_inverse(n).value;
            for (double delta : {1e-8, 1e-6, 1e-3}) {
                CHECK(analyzer.eta(x + delta) > n - 1e-6);
            }
        }
    }
}

TEST_CASE("likelihood ratio slope in log precision equals the elasticity gap") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> lambda_dist(0.5, 2.0);
    std::uniform_real_distribution<double> x_dist(0.05, 2.5);
    for (const auto& density : {SignalDensity::gaussian(), SignalDensity::logistic(), SignalDensity::laplace()}) {
        const ElasticityAnalyzer analyzer(density);
        for (int trial = 0; trial < 100; ++trial) {
            const double lambda = lambda_dist(rng);
            double x1 = x_dist(rng);
            double x2 = x_dist(rng);
            if (x1 > x2) {
                std::swap(x1, x2);
            }
            auto log_ratio = [&](double log_lambda) {
                const double l = std::exp(log_lambda);
                return std::log(density.scaled_pdf(x1, 0.0, l) / density.scaled_pdf(x2, 0.0, l));
            };
            const double h = 1e-4;
            const double fd = (log_ratio(std::log(lambda) + h) - log_ratio(std::log(lambda) - h)) / (2 * h);
            const double gap = analyzer.eta(lambda * x2) - analyzer.eta(lambda * x1);
            CHECK(fd == doctest::Approx(gap).epsilon(1e-3).scale(1.0));
        }
    }
}

TEST_CASE("ratio bound above the threshold when precision falls") {
    const auto density = SignalDensity::gaussian();
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> x_dist(1.0, 4.0);
    std::uniform_real_distribution<double> shrink(0.2, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        double x1 = x_dist(rng);
        double x2 = x_dist(rng);
        if (x1 > x2) {
            std::swap(x1, x2);
        }
        const double l = shrink(rng);
        const double lhs = density.pdf(l * x2) / density.pdf(l * x1);
        const double rhs = density.pdf(x2) / density.pdf(x1);
        CHECK(lhs >= rhs - 1e-9);
    }
}
