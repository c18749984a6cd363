#include <doctest.h>

#include <cmath>

#include "infocontract/error.hpp"
#include "infocontract/oracle.hpp"
#include "infocontract/rng.hpp"
#include "test_oracles.hpp"

using namespace infocontract;

namespace {

const SignalDensity kGauss = SignalDensity::gaussian();
const CostFunction kQuadratic = CostFunction::power(0.125, 2.0);

// Agent's precision for a Gaussian cutoff with cost l^2/8 on a grid of step 1e-4.
double grid_cutoff_lambda(double d) {
    return oracle::grid_argmax(
               [d](double l) { return 2.0 * oracle::normal_cdf(l * d) - 1.0 - 0.125 * l * l; }, 0.0, 8.0, 80001)
        .first;
}

}  // namespace

TEST_CASE("augmentation saturates the centre") {
    const ElasticityAnalyzer gauss(kGauss);
    const Transfer from_zero = augment_transfer(gauss, Transfer::symmetric({0.0, 1.0}, {0.0}), 1.0);
    CHECK(from_zero(0.0) == 1.0);
    CHECK(from_zero(0.999) == 1.0);
    CHECK(from_zero(1.001) == 0.0);

    const Transfer half = Transfer::symmetric({0.0, 2.0}, {0.5});
    const Transfer lifted = augment_transfer(gauss, half, 1.0);
    CHECK(lifted(0.5) == 1.0);
    CHECK(lifted(-0.9) == 1.0);
    CHECK(lifted(1.5) == 0.5);
    CHECK(lifted(-1.5) == 0.5);
    CHECK(lifted(2.5) == 0.0);

    CHECK_THROWS_AS((void)augment_transfer(gauss, Transfer::cutoff(1.0).shifted(0.2), 1.0), PreconditionError);
    const ElasticityAnalyzer spiky(SignalDensity::truncated_exp_inverse(0.1));
    CHECK_THROWS_AS((void)augment_transfer(spiky, half, 1.0), PreconditionError);
}

TEST_CASE("cutoff matching") {
    const double one_sigma = std::erf(1.0 / std::sqrt(2.0));
    const CutoffMatch g = match_cutoff(kGauss, 1.0, one_sigma);
    CHECK(g.reached);
    CHECK(g.d == doctest::Approx(1.0).epsilon(1e-8));

    const CutoffMatch u = match_cutoff(SignalDensity::uniform(1.0), 2.0, 0.5);
    CHECK(u.d == doctest::Approx(0.25).epsilon(1e-8));

    const CutoffMatch capped = match_cutoff(kGauss, 1.0, 1.0, 3.0);
    CHECK_FALSE(capped.reached);
    CHECK(capped.d == 3.0);
}

TEST_CASE("a cutoff is its own improvement") {
    const Improvement imp = improve_to_cutoff(kGauss, Transfer::cutoff(1.0), kQuadratic);
    REQUIRE(imp.trace.has_value());
    CHECK(imp.d == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(imp.lambda_d == doctest::Approx(imp.lambda_t).epsilon(1e-6));
    CHECK(imp.lambda_t == doctest::Approx(grid_cutoff_lambda(1.0)).epsilon(2e-4));
}

TEST_CASE("a shifted cutoff is re-centred before matching") {
    const Improvement imp = improve_to_cutoff(kGauss, Transfer::cutoff(1.0).shifted(0.3), kQuadratic);
    REQUIRE(imp.trace.has_value());
    const PipelineTrace& trace = *imp.trace;
    CHECK(trace.report_offset == doctest::Approx(-0.3).epsilon(1e-4));
    CHECK(trace.recentred.is_symmetric(1e-6));
    CHECK(trace.max_truthful_excess <= 1e-8);
    CHECK(trace.max_symmetrization_gap <= 1e-6);
    CHECK(trace.min_augmentation_gain >= -1e-12);
    CHECK(imp.d == doctest::Approx(1.0).epsilon(1e-4));
    CHECK(imp.lambda_d >= imp.lambda_t - 1e-6);
    CHECK(imp.lambda_d == doctest::Approx(grid_cutoff_lambda(imp.d)).epsilon(2e-4));
}

TEST_CASE("random step transfers never beat their cutoff replacement") {
    CounterRng rng(7);
    for (int trial = 0; trial < 3; ++trial) {
        std::vector<double> values(64);
        for (double& v : values) {
            v = rng.uniform();
        }
        const Transfer t = Transfer::uniform_cells(-3.0, 6.0 / 64.0, values);
        const Improvement imp = improve_to_cutoff(kGauss, t, kQuadratic);
        CAPTURE(trial);
        CHECK(imp.lambda_d >= imp.lambda_t - 1e-6);
        if (imp.trace) {
            CHECK(imp.trace->max_truthful_excess <= 1e-8);
            CHECK(imp.trace->min_augmentation_gain >= -1e-12);
        }
    }
}

TEST_CASE("improvement refuses densities without increasing elasticity") {
    CHECK_THROWS_AS((void)improve_to_cutoff(SignalDensity::truncated_exp_inverse(0.1), Transfer::cutoff(0.5),
                                            kQuadratic),
                    PreconditionError);
}

TEST_CASE("brute force cannot beat the best cutoff under increasing elasticity") {
    const BruteForceResult gauss = brute_force_best_transfer(kGauss, kQuadratic);
    CHECK(gauss.exhaustive);
    CHECK(gauss.evaluated == 256);
    CHECK(gauss.lambda <= optimal_cutoff(kGauss, kQuadratic).lambda_star + 1e-3);
    CHECK(gauss.values.size() == 8);

    const SignalDensity uniform = SignalDensity::uniform(1.0);
    const BruteForceResult flat = brute_force_best_transfer(uniform, kQuadratic);
    CHECK(flat.lambda <= optimal_cutoff(uniform, kQuadratic).lambda_star + 1e-3);
}

TEST_CASE("brute force search is reproducible past the exhaustive limit") {
    BruteForceOptions options;
    options.cells = 10;
    options.levels = 2;
    options.max_exhaustive = 256;
    options.restarts = 2;
    const BruteForceResult a = brute_force_best_transfer(kGauss, kQuadratic, options);
    const BruteForceResult b = brute_force_best_transfer(kGauss, kQuadratic, options);
    CHECK_FALSE(a.exhaustive);
    CHECK(a.values == b.values);
    CHECK(a.lambda == b.lambda);
    CHECK(a.lambda <= optimal_cutoff(kGauss, kQuadratic).lambda_star + 1e-3);
}

TEST_CASE("counterexample bands carry equal probability") {
    const SignalDensity spiky = SignalDensity::truncated_exp_inverse(0.1);
    const Counterexample ce = build_counterexample(spiky, 1.0, 0.5, 0.2, 0.8);
    CHECK(ce.delta_inner == doctest::Approx(0.002));
    CHECK(std::abs(ce.inner_mass - ce.outer_mass) < 1e-10);
    CHECK(ce.inner_mass == doctest::Approx(0.5 * spiky.mass_between(0.198, 0.202)).epsilon(1e-9));
    CHECK(ce.slope_gap > 0.0);
    CHECK(ce.t(0.0) == 1.0);
    CHECK(ce.t(0.2) == 0.0);
    CHECK(ce.t(-0.2) == 0.0);
    CHECK(ce.t(0.45) == 1.0);
    CHECK(ce.t(0.6) == 0.0);
    CHECK(ce.t(-0.8) == 1.0);
    CHECK(ce.t(1.2) == 0.0);

    // Gaussian elasticity rises, so the outer band cannot have the lower elasticity.
    CHECK_THROWS_AS((void)build_counterexample(kGauss, 1.0, 1.5, 0.5, 1.8), PreconditionError);
}

TEST_CASE("tangent cost touches the cutoff value once") {
    const SignalDensity spiky = SignalDensity::truncated_exp_inverse(0.1);
    const CostFunction cost = tangent_cost(spiky, 1.0, 0.5);
    CHECK(cost(1.0) == doctest::Approx(spiky.central_mass(0.5)).epsilon(1e-12));
    for (double l : {0.25, 0.5, 0.9, 1.1, 2.0}) {
        CHECK(cost(l) > spiky.central_mass(0.5 * l));
    }
    CHECK_THROWS_AS((void)tangent_cost(spiky, 1.0, 0.5, 0.0), DomainError);
}

TEST_CASE("cross derivative changes sign at eta = 1") {
    // Gaussian: eta(r) = r^2, so the closed form is 2 phi(r) (1 - r^2).
    for (double r : {0.5, 1.0, 2.0}) {
        const CrossDerivative c = cross_derivative_check(kGauss, 1.0, r);
        const double expected = 2.0 * oracle::normal_pdf(r) * (1.0 - r * r);
        CAPTURE(r);
        CHECK_FALSE(c.at_kink);
        CHECK(c.closed_form == doctest::Approx(expected).epsilon(1e-10));
        CHECK(std::abs(c.finite_difference - expected) < 1e-6);
    }
    CHECK(cross_derivative_check(kGauss, 1.0, 0.5).closed_form > 0.0);
    CHECK(cross_derivative_check(kGauss, 1.0, 2.0).closed_form < 0.0);
    CHECK(cross_derivative_check(kGauss, 2.0, 0.25).closed_form > 0.0);

    const CrossDerivative kink = cross_derivative_check(SignalDensity::truncated_exp_inverse(0.1), 1.0, 0.1);
    CHECK(kink.at_kink);
}
