#include <doctest.h>

#include <cmath>

#include "infocontract/error.hpp"
#include "infocontract/solver.hpp"
#include "test_oracles.hpp"

using namespace infocontract;

namespace {

const SignalDensity kGauss = SignalDensity::gaussian();
const CostFunction kQuadratic = CostFunction::power(0.125, 2.0);

// Agent's choice on a uniform precision grid for the Gaussian cutoff with quadratic cost a*l^2,
// scored at precision map(l). Largest maximizer on ties.
template <class Map>
std::pair<double, double> grid_response(double d, double a, double fixed, Map map, double step = 1e-3) {
    double best_lambda = 0.0;
    double best = -fixed - 1e-12;
    for (double l = step; l <= 6.0; l += step) {
        const double payoff = 2.0 * oracle::normal_cdf(map(l) * d) - 1.0 - fixed - a * l * l;
        if (payoff >= best) {
            best = payoff;
            best_lambda = l;
        }
    }
    return {best_lambda, best};
}

// Smallest d on a grid whose induced product map(lambda(d)) d reaches 1.
template <class Map>
std::pair<double, double> grid_boundary(Map map, double step = 1e-3) {
    for (double d = step; d < 3.0; d += step) {
        const double l = grid_response(d, 0.125, 0.0, map).first;
        if (map(l) * d >= 1.0) {
            return {d, l};
        }
    }
    return {NAN, NAN};
}

}  // namespace

TEST_CASE("gaussian with quadratic cost lands on the unit boundary") {
    const SolveResult r = optimal_cutoff(kGauss, kQuadratic);
    const double closed_form = std::sqrt(1.0 / (8.0 * oracle::normal_pdf(1.0)));
    CHECK(r.region == Region::complement_to_boundary);
    CHECK_FALSE(r.ir_binding);
    CHECK(r.d_bar == 0.0);
    CHECK(r.threshold == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(r.d_star == doctest::Approx(closed_form).epsilon(1e-5));
    CHECK(r.d_star == doctest::Approx(0.7187).epsilon(1e-4));
    CHECK(r.lambda_star == doctest::Approx(1.3913).epsilon(1e-4));
    CHECK(r.boundary_product == doctest::Approx(1.0).epsilon(1e-5));

    const auto [grid_d, grid_lambda] = grid_boundary([](double l) { return l; });
    CHECK(std::abs(r.d_star - grid_d) < 1e-3);
    CHECK(std::abs(r.lambda_star - grid_lambda) < 2e-3);
}

TEST_CASE("the scan below d* stays short of the boundary") {
    const SolveResult r = optimal_cutoff(kGauss, kQuadratic);
    REQUIRE_FALSE(r.scan.empty());
    for (const auto& s : r.scan) {
        if (s.d < r.d_star - 1e-9) {
            CHECK(s.product < r.threshold + 1e-6);
        }
    }
    CHECK(r.d_star >= r.d_bar);
}

TEST_CASE("participation cutoff") {
    CHECK(min_participation_cutoff(kGauss, kQuadratic) == 0.0);

    const auto entry = CostFunction::affine_power(0.5, 0.125, 2.0);
    const double d_bar = min_participation_cutoff(kGauss, entry);
    const double reference = oracle::bisect(
        [](double d) { return grid_response(d, 0.125, 0.5, [](double l) { return l; }, 1e-4).second; }, 0.3, 2.0, 40);
    CHECK(d_bar > 0.0);
    CHECK(d_bar == doctest::Approx(reference).epsilon(1e-4));

    CHECK_THROWS_AS((void)min_participation_cutoff(kGauss, CostFunction::affine_power(10.0, 0.0, 1.0)),
                    InfeasibleContract);
    CHECK_THROWS_AS((void)optimal_cutoff(kGauss, CostFunction::affine_power(10.0, 0.0, 1.0)), InfeasibleContract);
}

TEST_CASE("an entry cost puts the solution at the participation cutoff") {
    const auto entry = CostFunction::affine_power(0.5, 0.125, 2.0);
    const SolveResult r = optimal_cutoff(kGauss, entry);
    CHECK(r.region == Region::substitute_at_dbar);
    CHECK(r.ir_binding);
    CHECK(r.d_star == r.d_bar);
    CHECK(r.boundary_product >= r.threshold - 1e-6);
    CHECK(std::abs(r.agent_payoff) < 1e-6);

    // Past the boundary the induced precision falls with the cutoff.
    double previous = grid_response(r.d_bar, 0.125, 0.5, [](double l) { return l; }).first;
    for (double d = r.d_bar + 0.05; d < 3.0; d += 0.05) {
        const double l = grid_response(d, 0.125, 0.5, [](double l) { return l; }).first;
        CHECK(l <= previous + 1e-3);
        previous = l;
    }
}

TEST_CASE("uniform noise with quadratic cost") {
    // Below the support edge the agent sets lambda = 4d; the product 4d^2 first reaches 1 at d = 1/2.
    const SolveResult r = optimal_cutoff(SignalDensity::uniform(1.0), kQuadratic);
    CHECK(r.threshold == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(r.d_star == doctest::Approx(0.5).epsilon(1e-5));
    CHECK(r.lambda_star == doctest::Approx(2.0).epsilon(1e-5));
}

TEST_CASE("higher dimensions use the boundary eta^{-1}(n)") {
    const SolveResult r = optimal_cutoff(SignalDensity::gaussian(2), kQuadratic);
    CHECK(r.threshold == doctest::Approx(std::sqrt(2.0)).epsilon(1e-8));
    CHECK(r.boundary_product == doctest::Approx(std::sqrt(2.0)).epsilon(1e-5));
}

TEST_CASE("failing increasing elasticity falls back to the best cutoff") {
    const SolveResult r = optimal_cutoff(SignalDensity::truncated_exp_inverse(0.1), kQuadratic);
    CHECK_FALSE(r.iea_holds);
    CHECK(r.region == Region::best_cutoff_only);
    CHECK_FALSE(r.warnings.empty());
    for (const auto& s : r.scan) {
        CHECK(s.lambda <= r.lambda_star + 1e-9);
    }
}

TEST_CASE("Gaussian prior") {
    const SolveResult base = optimal_cutoff(kGauss, kQuadratic);
    const SolveResult faint = solve_gaussian_prior(kGauss, 1e-3, kQuadratic);
    CHECK(faint.d_star == doctest::Approx(base.d_star).epsilon(1e-4));
    CHECK(faint.lambda_star == doctest::Approx(base.lambda_star).epsilon(1e-4));

    // With a quadratic cost the agent's problem in the posterior precision only shifts by a
    // constant, so the posterior precision at d* matches the base lambda*.
    const SolveResult unit = solve_gaussian_prior(kGauss, 1.0, kQuadratic);
    REQUIRE(unit.posterior_precision.has_value());
    CHECK(*unit.posterior_precision * unit.d_star == doctest::Approx(1.0).epsilon(1e-5));
    const auto [grid_d, grid_lambda] = grid_boundary([](double l) { return std::hypot(1.0, l); });
    CHECK(std::abs(unit.d_star - grid_d) < 1e-3);
    CHECK(std::abs(unit.lambda_star - grid_lambda) < 2e-3);
    CHECK(*unit.posterior_precision == doctest::Approx(base.lambda_star).epsilon(1e-5));

    const SolveResult strong = solve_gaussian_prior(kGauss, 100.0, kQuadratic);
    CHECK(strong.lambda_star < 1e-2);
    CHECK(strong.boundary_product == doctest::Approx(100.0 * strong.d_star).epsilon(1e-6));

    CHECK_THROWS_AS((void)solve_gaussian_prior(SignalDensity::laplace(), 1.0, kQuadratic), DomainError);
    CHECK_THROWS_AS((void)solve_gaussian_prior(kGauss, 0.0, kQuadratic), DomainError);
}

TEST_CASE("unobserved state") {
    const SolveResult base = optimal_cutoff(kGauss, kQuadratic);
    const SolveResult sharp = solve_unobserved_state(kGauss, StatePrior::uniform, std::nullopt, 1e3, kQuadratic);
    CHECK(std::abs(sharp.d_star - base.d_star) < 1e-3);
    CHECK(std::abs(sharp.lambda_star - base.lambda_star) < 1e-3);

    const SolveResult noisy = solve_unobserved_state(kGauss, StatePrior::uniform, std::nullopt, 2.0, kQuadratic);
    auto uniform_map = [](double l) { return 1.0 / std::sqrt(0.25 + 1.0 / (l * l)); };
    CHECK(uniform_map(noisy.lambda_star) * noisy.d_star == doctest::Approx(1.0).epsilon(1e-5));
    const auto [grid_d, grid_lambda] = grid_boundary(uniform_map);
    CHECK(std::abs(noisy.d_star - grid_d) < 1e-3);
    CHECK(std::abs(noisy.lambda_star - grid_lambda) < 2e-3);

    const SolveResult with_prior = solve_unobserved_state(kGauss, StatePrior::gaussian, 1.0, 2.0, kQuadratic);
    auto gaussian_map = [](double l) { return 1.0 / std::sqrt(0.25 + 1.0 / (l * l + 1.0)); };
    CHECK(gaussian_map(with_prior.lambda_star) * with_prior.d_star == doctest::Approx(1.0).epsilon(1e-5));

    const SolveResult limit = solve_unobserved_state(kGauss, StatePrior::gaussian, 1.0, 1e4, kQuadratic);
    const SolveResult prior_only = solve_gaussian_prior(kGauss, 1.0, kQuadratic);
    CHECK(std::abs(limit.d_star - prior_only.d_star) < 1e-4);
    CHECK(std::abs(limit.lambda_star - prior_only.lambda_star) < 1e-4);

    CHECK_THROWS_AS((void)solve_unobserved_state(kGauss, StatePrior::gaussian, std::nullopt, 2.0, kQuadratic),
                    DomainError);
    CHECK_THROWS_AS((void)solve_unobserved_state(kGauss, StatePrior::uniform, 1.0, 2.0, kQuadratic), DomainError);
    CHECK_THROWS_AS((void)solve_unobserved_state(SignalDensity::logistic(), StatePrior::uniform, std::nullopt, 2.0,
                                                 kQuadratic),
                    DomainError);
}

TEST_CASE("comparative statics under a scaled cost") {
    const auto report = comparative_statics(kGauss, kQuadratic, kQuadratic.scaled(2.0));
    REQUIRE(report.hypothesis_holds);
    CHECK(report.d_star_ordered);
    CHECK(report.lambda_ordered);
    CHECK(report.higher_cost->d_star > report.lower_cost->d_star);
    CHECK(report.higher_cost->lambda_star < report.lower_cost->lambda_star);

    const auto same = comparative_statics(kGauss, kQuadratic, kQuadratic);
    REQUIRE(same.hypothesis_holds);
    CHECK(same.lower_cost->d_star == same.higher_cost->d_star);
    CHECK(same.lower_cost->lambda_star == same.higher_cost->lambda_star);

    // lambda/2 exceeds lambda^2/8 below lambda = 4, so c1 <= c2 fails.
    const auto violated = comparative_statics(kGauss, CostFunction::power(0.5, 1.0), kQuadratic);
    CHECK_FALSE(violated.hypothesis_holds);
    CHECK(violated.message.find("no prediction") != std::string::npos);
    CHECK_FALSE(violated.lower_cost.has_value());
}

TEST_CASE("scaled noise is a dilated cost") {
    const auto check = noise_scaling_check(kGauss, kQuadratic, 2.0);
    CHECK(check.d_star_gap < 1e-6);
    CHECK(check.scaled_noise.lambda_star == doctest::Approx(2.0 * check.dilated_cost.lambda_star).epsilon(1e-6));
    const SolveResult base = optimal_cutoff(kGauss, kQuadratic);
    CHECK(check.scaled_noise.d_star >= base.d_star - 1e-6);
}

TEST_CASE("region names") {
    CHECK(region_name(Region::substitute_at_dbar) == "substitute_at_dbar");
    CHECK(region_name(Region::complement_to_boundary) == "complement_to_boundary");
    CHECK(region_name(Region::best_cutoff_only) == "best_cutoff_only");
}
