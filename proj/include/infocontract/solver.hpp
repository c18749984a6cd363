#pragma once

#include <optional>
#include <string>
#include <vector>

#include "infocontract/agent.hpp"
#include "infocontract/cost.hpp"
#include "infocontract/density.hpp"

namespace infocontract {

enum class Region {
    /// The participation cutoff already lies past the complement/substitute boundary.
    substitute_at_dbar,
    /// The cutoff is raised from the participation cutoff until the boundary is reached.
    complement_to_boundary,
    /// Increasing elasticity fails; the result is only the best cutoff found on the scan.
    best_cutoff_only,
};

[[nodiscard]] std::string_view region_name(Region region) noexcept;

struct SolverOptions {
    /// Upper end of the cutoff search, in units of the density scale.
    double d_max = 50.0;
    std::size_t scan_points = 512;
    std::size_t refine_points = 64;
    int refine_rounds = 2;
    double bisection_tol = 1e-8;
    /// Slack on the boundary comparison lambda(d) d >= threshold.
    double boundary_tol = 1e-6;
    ResponseOptions response;
    unsigned threads = 1;
};

struct CutoffSample {
    double d;
    double lambda;
    double payoff;
    /// Precision of the scored estimate times d.
    double product;
    bool participated;
};

struct SolveResult {
    double d_bar = 0.0;
    double d_star = 0.0;
    double lambda_star = 0.0;
    double agent_payoff = 0.0;
    Region region = Region::complement_to_boundary;
    bool ir_binding = false;
    std::optional<double> posterior_precision;
    double boundary_product = 0.0;
    /// The boundary eta^{-1}(n).
    double threshold = 0.0;
    bool boundary_unreached = false;
    bool iea_holds = true;
    std::vector<std::string> warnings;
    /// Every cutoff evaluated on the scan, in increasing d.
    std::vector<CutoffSample> scan;
};

/// Solves the principal's cutoff problem for one density, cost and precision map.
class CutoffSolver {
public:
    CutoffSolver(SignalDensity density, CostFunction cost, SolverOptions options = {},
                 PrecisionMap map = identity_precision());

    [[nodiscard]] AgentResponse response(double d) const;
    [[nodiscard]] CutoffSample sample(double d) const;
    [[nodiscard]] std::vector<CutoffSample> sweep(const std::vector<double>& ds) const;

    /// Smallest cutoff at which the agent is willing to participate.
    /// Throws InfeasibleContract when no cutoff up to d_max qualifies.
    [[nodiscard]] double min_participation_cutoff() const;
    [[nodiscard]] SolveResult solve() const;

    [[nodiscard]] double d_max() const noexcept { return d_max_; }

private:
    [[nodiscard]] double payoff_at_zero() const;
    [[nodiscard]] SolveResult best_cutoff_only(SolveResult result) const;

    SignalDensity density_;
    CostFunction cost_;
    SolverOptions options_;
    PrecisionMap map_;
    double d_max_;
};

[[nodiscard]] double min_participation_cutoff(const SignalDensity& density, const CostFunction& cost,
                                              const SolverOptions& options = {});

[[nodiscard]] SolveResult optimal_cutoff(const SignalDensity& density, const CostFunction& cost,
                                         const SolverOptions& options = {});

/// Gaussian prior with precision `prior_precision` on the state; scored on the posterior mean.
[[nodiscard]] PrecisionMap gaussian_prior_precision(double prior_precision);
[[nodiscard]] SolveResult solve_gaussian_prior(const SignalDensity& density, double prior_precision,
                                               const CostFunction& cost, const SolverOptions& options = {});

enum class StatePrior { uniform, gaussian };

/// The principal scores the report against her own signal of precision `principal_precision`.
[[nodiscard]] PrecisionMap unobserved_state_precision(StatePrior prior, std::optional<double> prior_precision,
                                                      double principal_precision);
[[nodiscard]] SolveResult solve_unobserved_state(const SignalDensity& density, StatePrior prior,
                                                 std::optional<double> prior_precision,
                                                 double principal_precision, const CostFunction& cost,
                                                 const SolverOptions& options = {});

struct ComparativeStatics {
    bool hypothesis_holds = false;
    std::string message;
    std::optional<SolveResult> lower_cost;
    std::optional<SolveResult> higher_cost;
    bool d_star_ordered = false;
    bool lambda_ordered = false;
};

/// Compares the solutions under c1 and c2 when c1 <= c2 and c2 - c1 is nondecreasing on the
/// precision grid. Otherwise reports that no prediction is made.
[[nodiscard]] ComparativeStatics comparative_statics(const SignalDensity& density, const CostFunction& c1,
                                                     const CostFunction& c2, const SolverOptions& options = {},
                                                     double tol = 1e-6);

struct NoiseScalingCheck {
    /// Noise scaled by k, solved through the precision map lambda -> lambda / k.
    SolveResult scaled_noise;
    /// Same problem written as the dilated cost c(k lambda) at unit noise.
    SolveResult dilated_cost;
    double d_star_gap;
};

[[nodiscard]] NoiseScalingCheck noise_scaling_check(const SignalDensity& density, const CostFunction& cost,
                                                    double factor, const SolverOptions& options = {});

}  // namespace infocontract
