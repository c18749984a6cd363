#include "infocontract/solver.hpp"

#include <algorithm>
#include <cmath>

#include "infocontract/elasticity.hpp"
#include "infocontract/error.hpp"
#include "infocontract/numeric.hpp"

namespace infocontract {

namespace {

constexpr double kLambdaTie = 1e-9;

void require_gaussian(const SignalDensity& density) {
    if (density.family() != Family::gaussian) {
        throw DomainError("this variant is only defined for a Gaussian signal");
    }
}

void require_positive(double value, const char* what) {
    if (!(value > 0.0) || !std::isfinite(value)) {
        throw DomainError(std::string(what) + " must be positive and finite");
    }
}

// Index of the first sample meeting the boundary, or size() when none does.
std::size_t first_reaching(const std::vector<CutoffSample>& samples, double threshold) {
    for (std::size_t i = 0; i < samples.size(); ++i) {
        if (samples[i].participated && samples[i].product >= threshold) {
            return i;
        }
    }
    return samples.size();
}

std::size_t best_lambda_index(const std::vector<CutoffSample>& samples) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < samples.size(); ++i) {
        if (samples[i].lambda > samples[best].lambda + kLambdaTie) {
            best = i;
        }
    }
    return best;
}

void append_sorted(std::vector<CutoffSample>& into, const std::vector<CutoffSample>& extra) {
    into.insert(into.end(), extra.begin(), extra.end());
    std::sort(into.begin(), into.end(), [](const CutoffSample& a, const CutoffSample& b) { return a.d < b.d; });
    into.erase(std::unique(into.begin(), into.end(),
                           [](const CutoffSample& a, const CutoffSample& b) { return a.d == b.d; }),
               into.end());
}

}  // namespace

std::string_view region_name(Region region) noexcept {
    switch (region) {
        case Region::substitute_at_dbar:
            return "substitute_at_dbar";
        case Region::complement_to_boundary:
            return "complement_to_boundary";
        case Region::best_cutoff_only:
            return "best_cutoff_only";
    }
    return "unknown";
}

CutoffSolver::CutoffSolver(SignalDensity density, CostFunction cost, SolverOptions options, PrecisionMap map)
    : density_(std::move(density)),
      cost_(std::move(cost)),
      options_(options),
      map_(std::move(map)),
      d_max_(options.d_max * density_.scale()) {
    require_positive(options_.d_max, "d_max");
    if (options_.scan_points < 2 || options_.refine_points < 2) {
        throw ConfigError("scan and refinement grids need at least two points");
    }
}

AgentResponse CutoffSolver::response(double d) const {
    return best_response_cutoff(density_, d, cost_, options_.response, map_);
}

CutoffSample CutoffSolver::sample(double d) const {
    const AgentResponse r = response(d);
    const double product = r.participated ? map_(r.lambda_star) * d : 0.0;
    return {d, r.lambda_star, r.payoff, product, r.participated};
}

std::vector<CutoffSample> CutoffSolver::sweep(const std::vector<double>& ds) const {
    std::vector<CutoffSample> out(ds.size());
    numeric::parallel_for(ds.size(), options_.threads, [&](std::size_t i) { out[i] = sample(ds[i]); });
    return out;
}

double CutoffSolver::payoff_at_zero() const {
    return -cost_.right_limit_at_zero();
}

double CutoffSolver::min_participation_cutoff() const {
    const double tol = options_.response.participation_tol;
    if (payoff_at_zero() >= -tol) {
        return 0.0;
    }
    auto participates = [&](double d) { return response(d).max_payoff >= -tol; };
    if (!participates(d_max_)) {
        throw InfeasibleContract("the agent declines every cutoff up to d_max");
    }
    return numeric::first_true(participates, 0.0, d_max_, options_.bisection_tol);
}

SolveResult CutoffSolver::best_cutoff_only(SolveResult result) const {
    std::vector<CutoffSample> scan = sweep(numeric::lin_space(result.d_bar, d_max_, options_.scan_points));
    std::vector<CutoffSample> all = scan;
    for (int round = 0; round < options_.refine_rounds; ++round) {
        const std::size_t k = best_lambda_index(scan);
        const double lo = scan[k == 0 ? 0 : k - 1].d;
        const double hi = scan[std::min(k + 1, scan.size() - 1)].d;
        scan = sweep(numeric::lin_space(lo, hi, options_.refine_points));
        append_sorted(all, scan);
    }
    const CutoffSample& best = all[best_lambda_index(all)];
    result.d_star = best.d;
    result.lambda_star = best.lambda;
    result.agent_payoff = best.payoff;
    result.boundary_product = best.product;
    result.scan = std::move(all);
    return result;
}

SolveResult CutoffSolver::solve() const {
    const ElasticityAnalyzer analyzer(density_);
    const double n = density_.dimension();
    SolveResult result;
    const EtaThreshold threshold = analyzer.eta_inverse(n);
    result.threshold = threshold.value;
    result.iea_holds = analyzer.check_iea(n).holds;
    result.d_bar = min_participation_cutoff();

    if (!result.iea_holds) {
        result.region = Region::best_cutoff_only;
        result.warnings.emplace_back("increasing elasticity fails; returning the best cutoff on the scan");
        result = best_cutoff_only(std::move(result));
        result.posterior_precision = map_(result.lambda_star);
        return result;
    }
    if (threshold.overflow) {
        result.warnings.emplace_back("elasticity never exceeds the dimension on the scan window");
    }

    const CutoffSample at_bar = sample(result.d_bar);
    if (result.d_bar > 0.0 && at_bar.participated && at_bar.product >= result.threshold - options_.boundary_tol) {
        result.region = Region::substitute_at_dbar;
        result.ir_binding = true;
        result.d_star = result.d_bar;
        result.lambda_star = at_bar.lambda;
        result.agent_payoff = at_bar.payoff;
        result.boundary_product = at_bar.product;
        result.posterior_precision = map_(at_bar.lambda);
        result.scan = {at_bar};
        return result;
    }

    result.region = Region::complement_to_boundary;
    std::vector<CutoffSample> scan = sweep(numeric::lin_space(result.d_bar, d_max_, options_.scan_points));
    std::vector<CutoffSample> all = scan;
    const double target = result.threshold - options_.boundary_tol;
    std::size_t k = first_reaching(scan, target);
    if (k == scan.size()) {
        result.boundary_unreached = true;
        result.warnings.emplace_back("lambda(d) d stays below the boundary up to d_max; returning the best scanned cutoff");
        const CutoffSample& best = scan[best_lambda_index(scan)];
        result.d_star = best.d;
        result.lambda_star = best.lambda;
        result.agent_payoff = best.payoff;
        result.boundary_product = best.product;
        result.posterior_precision = map_(best.lambda);
        result.scan = std::move(all);
        return result;
    }

    double lo = scan[k == 0 ? 0 : k - 1].d;
    double hi = scan[k].d;
    for (int round = 0; round < options_.refine_rounds && k > 0; ++round) {
        scan = sweep(numeric::lin_space(lo, hi, options_.refine_points));
        append_sorted(all, scan);
        k = first_reaching(scan, target);
        lo = scan[k == 0 ? 0 : k - 1].d;
        hi = scan[k].d;
    }
    double d_star = hi;
    if (lo < hi) {
        d_star = numeric::first_true(
            [&](double d) {
                const CutoffSample s = sample(d);
                return s.participated && s.product >= target;
            },
            lo, hi, options_.bisection_tol);
    }
    const CutoffSample at_star = sample(d_star);
    append_sorted(all, {at_star});
    result.d_star = d_star;
    result.lambda_star = at_star.lambda;
    result.agent_payoff = at_star.payoff;
    result.boundary_product = at_star.product;
    result.posterior_precision = map_(at_star.lambda);
    result.scan = std::move(all);
    return result;
}

double min_participation_cutoff(const SignalDensity& density, const CostFunction& cost,
                                const SolverOptions& options) {
    return CutoffSolver(density, cost, options).min_participation_cutoff();
}

SolveResult optimal_cutoff(const SignalDensity& density, const CostFunction& cost, const SolverOptions& options) {
    SolveResult result = CutoffSolver(density, cost, options).solve();
    result.posterior_precision.reset();
    return result;
}

PrecisionMap gaussian_prior_precision(double prior_precision) {
    require_positive(prior_precision, "prior precision");
    return [prior_precision](double lambda) { return std::hypot(prior_precision, lambda); };
}

SolveResult solve_gaussian_prior(const SignalDensity& density, double prior_precision, const CostFunction& cost,
                                 const SolverOptions& options) {
    require_gaussian(density);
    return CutoffSolver(density, cost, options, gaussian_prior_precision(prior_precision)).solve();
}

PrecisionMap unobserved_state_precision(StatePrior prior, std::optional<double> prior_precision,
                                        double principal_precision) {
    require_positive(principal_precision, "principal signal precision");
    const double principal_variance = 1.0 / (principal_precision * principal_precision);
    if (prior == StatePrior::uniform) {
        if (prior_precision) {
            throw DomainError("a uniform prior takes no prior precision");
        }
        return [principal_variance](double lambda) {
            return 1.0 / std::sqrt(principal_variance + 1.0 / (lambda * lambda));
        };
    }
    if (!prior_precision) {
        throw DomainError("a Gaussian prior needs its precision");
    }
    const double p0 = *prior_precision;
    require_positive(p0, "prior precision");
    return [principal_variance, p0](double lambda) {
        return 1.0 / std::sqrt(principal_variance + 1.0 / (lambda * lambda + p0 * p0));
    };
}

SolveResult solve_unobserved_state(const SignalDensity& density, StatePrior prior,
                                   std::optional<double> prior_precision, double principal_precision,
                                   const CostFunction& cost, const SolverOptions& options) {
    require_gaussian(density);
    return CutoffSolver(density, cost, options,
                        unobserved_state_precision(prior, prior_precision, principal_precision))
        .solve();
}

ComparativeStatics comparative_statics(const SignalDensity& density, const CostFunction& c1,
                                       const CostFunction& c2, const SolverOptions& options, double tol) {
    ComparativeStatics report;
    const auto grid = numeric::log_space(options.response.lambda_min, options.response.lambda_max,
                                         options.response.grid_points);
    double previous_gap = -std::numeric_limits<double>::infinity();
    for (double lambda : grid) {
        const double gap = c2(lambda) - c1(lambda);
        const double slack = 1e-12 * std::max(1.0, std::abs(c1(lambda)));
        if (gap < -slack) {
            report.message = "hypothesis violated, no prediction: c1 exceeds c2 at lambda = " + std::to_string(lambda);
            return report;
        }
        if (gap < previous_gap - slack) {
            report.message =
                "hypothesis violated, no prediction: c2 - c1 decreases near lambda = " + std::to_string(lambda);
            return report;
        }
        previous_gap = std::max(previous_gap, gap);
    }
    report.hypothesis_holds = true;
    report.lower_cost = optimal_cutoff(density, c1, options);
    report.higher_cost = optimal_cutoff(density, c2, options);
    report.d_star_ordered = report.lower_cost->d_star <= report.higher_cost->d_star + tol;
    report.lambda_ordered = report.higher_cost->lambda_star <= report.lower_cost->lambda_star + tol;
    report.message = report.d_star_ordered && report.lambda_ordered
                         ? "prediction confirmed: d* rises and lambda* falls with the higher cost"
                         : "prediction failed";
    return report;
}

NoiseScalingCheck noise_scaling_check(const SignalDensity& density, const CostFunction& cost, double factor,
                                      const SolverOptions& options) {
    require_positive(factor, "noise factor");
    NoiseScalingCheck check{
        CutoffSolver(density, cost, options, [factor](double lambda) { return lambda / factor; }).solve(),
        optimal_cutoff(density, cost.dilated(factor), options), 0.0};
    check.d_star_gap = std::abs(check.scaled_noise.d_star - check.dilated_cost.d_star);
    return check;
}

}  // namespace infocontract
