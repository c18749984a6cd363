#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "infocontract/agent.hpp"
#include "infocontract/cost.hpp"
#include "infocontract/density.hpp"
#include "infocontract/elasticity.hpp"
#include "infocontract/solver.hpp"
#include "infocontract/transfer.hpp"

namespace infocontract {

/// Sets a symmetric transfer to 1 on |x| < eta^{-1}(1) / lambda_ref. Requires a symmetric
/// transfer and increasing elasticity above 1.
[[nodiscard]] Transfer augment_transfer(const ElasticityAnalyzer& analyzer, const Transfer& t, double lambda_ref);

struct CutoffMatch {
    double d;
    /// False when the target exceeds E(lambda_ref; d_max); d is then d_max.
    bool reached;
};

/// Cutoff d with E(lambda_ref; d) = target, by bisection to `tol`.
[[nodiscard]] CutoffMatch match_cutoff(const SignalDensity& density, double lambda_ref, double target,
                                       double d_max = 50.0, double tol = 1e-9);

/// Intermediate transfers of the cutoff improvement and the inequalities checked on them.
struct PipelineTrace {
    double lambda_t;
    double report_offset;
    /// t re-centred so the agent's best report is truthful at lambda_t.
    Transfer recentred;
    Transfer symmetric;
    Transfer augmented;
    /// Truthful and strategic values of the re-centred transfer at lambda_t.
    double truthful_at_lambda_t;
    double strategic_at_lambda_t;
    /// Largest truthful-minus-strategic value of the re-centred transfer on the check grid.
    double max_truthful_excess;
    /// Largest |truthful(symmetric) - truthful(recentred)| on the check grid.
    double max_symmetrization_gap;
    /// Smallest truthful(augmented) - truthful(symmetric) on the check grid.
    double min_augmentation_gain;
    /// Truthful value of the augmented transfer at lambda_t, matched by the cutoff.
    double target;
    std::vector<double> check_lambdas;
};

struct ImprovementOptions {
    ResponseOptions response;
    std::size_t check_points = 32;
    /// Upper end of the cutoff match, in units of the density scale.
    double d_max = 50.0;
};

struct Improvement {
    double d;
    double lambda_d;
    double lambda_t;
    /// Empty when the agent declines t, in which case the zero cutoff is returned.
    std::optional<PipelineTrace> trace;
};

/// Replaces t by a cutoff that induces at least the same precision. Throws PreconditionError
/// when increasing elasticity above 1 fails.
[[nodiscard]] Improvement improve_to_cutoff(const SignalDensity& density, const Transfer& t,
                                            const CostFunction& cost, const ImprovementOptions& options = {});

struct BruteForceOptions {
    std::size_t cells = 8;
    std::size_t levels = 2;
    /// Transfers are symmetric step functions on [0, reach * density scale).
    double reach = 3.0;
    /// Exhaustive enumeration up to this many candidates, coordinate ascent beyond.
    std::size_t max_exhaustive = std::size_t{1} << 16;
    /// Enumerations up to this size are scored directly under strategic reporting. Larger ones
    /// are screened under truthful reporting and the best `rescore` are scored strategically.
    std::size_t direct_limit = 1024;
    std::size_t rescore = 32;
    std::size_t restarts = 8;
    std::uint64_t seed = 1;
    unsigned threads = 1;
    ResponseOptions response;
};

struct BruteForceResult {
    Transfer t;
    /// Cell values from the centre outward.
    std::vector<double> values;
    double lambda;
    double payoff;
    std::size_t evaluated;
    bool exhaustive;
};

/// Symmetric step transfer with quantized values inducing the highest precision. Ties go to
/// the higher agent payoff, then to the lexicographically smaller value vector.
[[nodiscard]] BruteForceResult brute_force_best_transfer(const SignalDensity& density, const CostFunction& cost,
                                                         const BruteForceOptions& options = {});

struct Counterexample {
    Transfer t;
    double delta_inner;
    double delta_outer;
    double inner_mass;
    double outer_mass;
    /// Finite-difference slope in lambda of E(lambda; t) - E(lambda; d_ref) at lambda_ref.
    double slope_gap;
    int retries;
};

struct CounterexampleOptions {
    double delta_fraction = 0.01;
    double eta_margin = 1e-3;
    double fd_step = 1e-4;
    int max_retries = 8;
};

/// Moves a thin band of payment from |x| near x_inner / lambda_ref (inside the cutoff) to an
/// equal-probability band near x_outer / lambda_ref (outside it). Throws PreconditionError when
/// eta(x_inner) does not exceed eta(x_outer) or the placement is inconsistent.
[[nodiscard]] Counterexample build_counterexample(const SignalDensity& density, double lambda_ref, double d_ref,
                                                  double x_inner, double x_outer,
                                                  const CounterexampleOptions& options = {});

/// c(lambda) = E(lambda; d_ref) + curvature (lambda - lambda_ref)^2, tangent to the cutoff value.
[[nodiscard]] CostFunction tangent_cost(const SignalDensity& density, double lambda_ref, double d_ref,
                                        double curvature = 0.5);

struct RefutationReport {
    Counterexample counterexample;
    double counterexample_lambda;
    double best_cutoff_d;
    double best_cutoff_lambda;
    BruteForceResult brute_force;
    double counterexample_margin;
    double brute_force_margin;
};

struct RefutationOptions {
    double curvature = 0.5;
    CounterexampleOptions counterexample;
    BruteForceOptions brute = [] {
        BruteForceOptions o;
        o.cells = 16;
        return o;
    }();
    SolverOptions solver;
};

/// Builds the tangent cost at (lambda_ref, d_ref) and compares the best cutoff with the
/// constructed counterexample and with the brute-force search.
[[nodiscard]] RefutationReport refute_cutoff_optimality(const SignalDensity& density, double lambda_ref, double d_ref,
                                                        double x_inner, double x_outer,
                                                        const RefutationOptions& options = {});

struct CrossDerivative {
    double finite_difference;
    double closed_form;
    /// A density kink lies within the stencil; one-sided differences were used.
    bool at_kink;
};

/// d^2 E / d lambda d d by finite differences against n V_n phi(r) r^(n-1) (n - eta(r)), r = lambda d.
[[nodiscard]] CrossDerivative cross_derivative_check(const SignalDensity& density, double lambda, double d,
                                                     double step = 1e-4);

}  // namespace infocontract
