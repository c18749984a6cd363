#include <doctest.h>

#include <cmath>
#include <random>

#include "infocontract/agent.hpp"
#include "infocontract/elasticity.hpp"
#include "infocontract/error.hpp"
#include "infocontract/numeric.hpp"
#include "test_oracles.hpp"

using namespace infocontract;

namespace {

const SignalDensity kGauss = SignalDensity::gaussian();
const CostFunction kQuadratic = CostFunction::power(0.125, 2.0);

// Offset search by brute force on a fine grid. The transfer is paid on (state - report) = y - b with y symmetric noise.
std::pair<double, double> reference_strategic(const Transfer& t, double lambda, double lo, double hi) {
    auto value = [&](double b) {
        double total = 0.0;
        for (std::size_t i = 0; i < t.values().size(); ++i) {
            total += t.values()[i] * (oracle::normal_cdf(lambda * (t.edges()[i + 1] + b)) -
                                      oracle::normal_cdf(lambda * (t.edges()[i] + b)));
        }
        return total;
    };
    const auto best = oracle::grid_argmax(value, lo, hi, 200001);
    return {best.second, best.first};
}

class TwinPeaks final : public ValueCurve {
public:
    double value(double lambda) const override {
        auto bump = [](double x, double center) { return std::exp(-8.0 * std::pow(std::log(x / center), 2)); };
        return 0.5 * std::max(bump(lambda, 1.0), bump(lambda, 10.0));
    }
};

}  // namespace

TEST_CASE("signal draws follow the location-scale form") {
    const auto draw = SignalModel::draw(1.0, 0.5, 2.0);
    CHECK(draw.signal == doctest::Approx(1.25));
    CHECK(draw.report == draw.signal);
    CHECK_THROWS_AS(SignalModel::draw(0.0, 1.0, 0.0), DomainError);
}

TEST_CASE("expected cutoff transfer") {
    const double ref = oracle::simpson(oracle::normal_pdf, -1.0, 1.0, 2000);
    CHECK(expected_transfer_cutoff(kGauss, 1.0, 1.0, 1) == doctest::Approx(ref).epsilon(1e-12));
    CHECK(expected_transfer_cutoff(kGauss, 1.0, 1.0, 1) == doctest::Approx(0.682689).epsilon(1e-6));
    CHECK(expected_transfer_cutoff(kGauss, 3.7, 0.0, 1) == 0.0);
    CHECK(expected_transfer_cutoff(SignalDensity::uniform(1.0), 2.0, 0.25, 1) == doctest::Approx(0.5));
    CHECK_THROWS_AS((void)expected_transfer_cutoff(kGauss, 1.0, 1.0, 2), DomainError);
    CHECK_THROWS_AS((void)expected_transfer_cutoff(kGauss, 0.0, 1.0, 1), DomainError);
    for (double l : {0.3, 1.0, 2.2}) {
        for (double d : {0.2, 0.9, 1.7}) {
            CHECK(expected_transfer_cutoff(kGauss, l, d, 1) ==
                  doctest::Approx(2 * oracle::normal_cdf(l * d) - 1).epsilon(1e-8));
            CHECK(expected_transfer_cutoff(kGauss, l * 1.1, d, 1) >= expected_transfer_cutoff(kGauss, l, d, 1));
            CHECK(expected_transfer_cutoff(kGauss, l, d * 1.1, 1) >= expected_transfer_cutoff(kGauss, l, d, 1));
        }
    }
}

TEST_CASE("expected truthful transfer") {
    CHECK(expected_transfer_truthful(kGauss, 1.4, Transfer::cutoff(0.6)) ==
          doctest::Approx(expected_transfer_cutoff(kGauss, 1.4, 0.6, 1)));
    const double window = kGauss.truncation_radius();
    const auto full = Transfer::steps({-window, window}, {1.0});
    CHECK(expected_transfer_truthful(kGauss, 1.0, full) == doctest::Approx(1.0 - kGauss.tail_mass(window)).epsilon(1e-14));
    const auto half = Transfer::symmetric({0.0, 1.0}, {0.5});
    const double ref = 0.5 * oracle::simpson(oracle::normal_pdf, -1.0, 1.0, 2000);
    CHECK(expected_transfer_truthful(kGauss, 1.0, half) == doctest::Approx(ref).epsilon(1e-12));
    CHECK(expected_transfer_truthful(kGauss, 1.0, half) == doctest::Approx(0.341345).epsilon(1e-6));
}

TEST_CASE("strategic reporting") {
    SUBCASE("cutoffs are reported truthfully") {
        const auto v = expected_transfer_strategic(kGauss, 1.3, Transfer::cutoff(0.8));
        CHECK(v.report_offset == 0.0);
        CHECK(v.value == doctest::Approx(expected_transfer_cutoff(kGauss, 1.3, 0.8, 1)));
    }
    SUBCASE("a shifted cutoff is undone by the report offset") {
        const double b0 = 0.3;
        const auto shifted = Transfer::cutoff(1.0).shifted(b0);
        const auto v = expected_transfer_strategic(kGauss, 1.0, shifted);
        CHECK(v.report_offset == doctest::Approx(-b0).epsilon(1e-6));
        CHECK(v.value == doctest::Approx(expected_transfer_cutoff(kGauss, 1.0, 1.0, 1)).epsilon(1e-12));
    }
    SUBCASE("asymmetric two-step transfer against a brute offset search") {
        const auto t = Transfer::steps({0.0, 1.0}, {1.0});
        const auto v = expected_transfer_strategic(kGauss, 1.0, t);
        const auto [ref_value, ref_offset] = reference_strategic(t, 1.0, -2.0, 2.0);
        CHECK(v.value >= 0.341345);
        CHECK(v.value == doctest::Approx(ref_value).epsilon(1e-9));
        CHECK(v.report_offset == doctest::Approx(ref_offset).epsilon(1e-4));
        CHECK(v.report_offset == doctest::Approx(-0.5).epsilon(1e-6));
    }
    SUBCASE("strategic value dominates the truthful value") {
        std::mt19937_64 rng(3);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        for (int trial = 0; trial < 20; ++trial) {
            std::vector<double> values(12);
            for (double& v : values) {
                v = u(rng);
            }
            const auto t = Transfer::uniform_cells(-1.5, 0.25, values);
            const double lambda = 0.3 + 3.0 * u(rng);
            CHECK(expected_transfer_strategic(kGauss, lambda, t).value >=
                  expected_transfer_truthful(kGauss, lambda, t) - 1e-15);
        }
    }
}

TEST_CASE("truthful-report verification") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.1, 4.0);
    for (int i = 0; i < 10; ++i) {
        CHECK(verify_truthful_report(kGauss, Transfer::cutoff(u(rng)), u(rng)));
    }
    CHECK_FALSE(verify_truthful_report(kGauss, Transfer::cutoff(1.0).shifted(0.3), 1.0));
    const auto sym = Transfer::symmetric({0.0, 0.4, 1.1}, {1.0, 0.3});
    CHECK(verify_truthful_report(kGauss, sym, 1.7));
}

TEST_CASE("best response to a cutoff") {
    const auto r = best_response(kGauss, Transfer::cutoff(1.0), kQuadratic);
    // First-order condition 2 d phi(lambda d) = lambda / 4 solved independently.
    const double ref = oracle::bisect([](double l) { return 2.0 * oracle::normal_pdf(l) - l / 4.0; }, 0.5, 3.0);
    CHECK(r.participated);
    CHECK(r.lambda_star == doctest::Approx(ref).epsilon(1e-7));
    CHECK(r.lambda_star == doctest::Approx(1.326).epsilon(1e-3));
    CHECK(r.payoff == doctest::Approx(2 * oracle::normal_cdf(ref) - 1 - ref * ref / 8).epsilon(1e-10));
    CHECK(r.payoff == doctest::Approx(0.595).epsilon(1e-3));
    CHECK(r.report_offset == 0.0);
    CHECK_FALSE(r.unbounded);

    // The returned payoff beats every grid point.
    const auto grid = numeric::log_space(1e-3, 1e3, 1024);
    for (double l : grid) {
        CHECK(r.payoff >= expected_transfer_cutoff(kGauss, l, 1.0, 1) - kQuadratic(l) - 1e-9);
    }
}

TEST_CASE("participation failures") {
    const auto prohibitive = CostFunction::affine_power(10.0, 0.0, 1.0);
    const auto r = best_response(kGauss, Transfer::cutoff(1.0), prohibitive);
    CHECK_FALSE(r.participated);
    CHECK(r.lambda_star == 0.0);
    CHECK(r.payoff == 0.0);
    const auto zero = best_response(kGauss, Transfer::cutoff(0.0), kQuadratic);
    CHECK_FALSE(zero.participated);
    CHECK(zero.lambda_star == 0.0);
    CHECK(zero.payoff == 0.0);
}

TEST_CASE("ties go to the largest precision") {
    const auto r = respond(TwinPeaks{}, CostFunction::power(0.0, 1.0));
    CHECK(r.lambda_star == doctest::Approx(10.0).epsilon(1e-6));
}

TEST_CASE("a vanishing cost pushes the response to the window edge") {
    const auto r = best_response(kGauss, Transfer::cutoff(1.0), CostFunction::power(0.0, 1.0));
    CHECK(r.unbounded);
    CHECK(r.lambda_star == doctest::Approx(1e3));
}

TEST_CASE("monotone response above the threshold") {
    const double threshold = ElasticityAnalyzer(kGauss).eta_inverse(1.0).value;
    double previous_lambda = std::numeric_limits<double>::infinity();
    for (double d = 0.7; d < 3.0; d += 0.05) {
        const auto r = best_response(kGauss, Transfer::cutoff(d), kQuadratic);
        if (r.lambda_star * d < threshold + 1e-6) {
            continue;
        }
        CHECK(r.lambda_star <= previous_lambda + 1e-6);
        previous_lambda = r.lambda_star;
    }
}

TEST_CASE("lattice grid values bound the exact strategic curve from below") {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> values(32);
    for (double& v : values) {
        v = u(rng);
    }
    const auto t = Transfer::uniform_cells(-2.0, 0.125, values);
    const auto curve = strategic_curve(kGauss, t);
    const std::vector<double> lambdas{0.2, 0.7, 1.3, 2.9, 6.0};
    std::vector<double> grid(lambdas.size());
    curve->grid_values(lambdas, grid);
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
        const double exact = curve->value(lambdas[i]);
        CHECK(grid[i] <= exact + 1e-14);
        CHECK(grid[i] >= exact - 2e-2);
    }
}

TEST_CASE("strategic best response to an asymmetric transfer") {
    const auto t = Transfer::steps({0.0, 1.0}, {1.0});
    const auto r = best_response(kGauss, t, kQuadratic);
    // The best report recentres the cell, so the agent faces a cutoff of radius 0.5.
    const auto centred = best_response(kGauss, Transfer::cutoff(0.5), kQuadratic);
    CHECK(r.lambda_star == doctest::Approx(centred.lambda_star).epsilon(1e-6));
    CHECK(r.report_offset == doctest::Approx(-0.5).epsilon(1e-5));
}
