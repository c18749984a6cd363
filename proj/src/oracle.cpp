#include "infocontract/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

#include "infocontract/error.hpp"
#include "infocontract/kernels.hpp"
#include "infocontract/numeric.hpp"
#include "infocontract/rng.hpp"

namespace infocontract {

namespace {

void require_iea(const ElasticityAnalyzer& analyzer) {
    if (!analyzer.check_iea(1.0).holds) {
        throw PreconditionError("the density does not have increasing elasticity above 1");
    }
}

// ---- brute force -------------------------------------------------------------------------

using Digits = std::vector<std::uint8_t>;

struct Score {
    double lambda;
    double payoff;
    Digits digits;
};

bool better(const Score& a, const Score& b) {
    constexpr double kLambdaTie = 1e-9;
    constexpr double kPayoffTie = 1e-12;
    if (std::abs(a.lambda - b.lambda) > kLambdaTie) {
        return a.lambda > b.lambda;
    }
    if (std::abs(a.payoff - b.payoff) > kPayoffTie) {
        return a.payoff > b.payoff;
    }
    return a.digits < b.digits;
}

// Truthful value of a symmetric cell transfer. On the agent's standard precision grid the
// values come from one matrix-vector product against precomputed cell masses.
class CellMassCurve final : public ValueCurve {
public:
    CellMassCurve(const SignalDensity& density, std::shared_ptr<const std::vector<double>> radii,
                  std::shared_ptr<const std::vector<double>> grid, std::shared_ptr<const std::vector<double>> masses,
                  std::vector<double> values)
        : density_(density),
          radii_(std::move(radii)),
          grid_(std::move(grid)),
          masses_(std::move(masses)),
          values_(std::move(values)) {}

    double value(double precision) const override {
        double total = 0.0;
        for (std::size_t i = 0; i < values_.size(); ++i) {
            if (values_[i] != 0.0) {
                total += values_[i] * density_.mass_between(precision * (*radii_)[i], precision * (*radii_)[i + 1]);
            }
        }
        return total;
    }

    void grid_values(std::span<const double> precisions, std::span<double> out) const override {
        if (precisions.size() != grid_->size() || precisions.front() != grid_->front() ||
            precisions.back() != grid_->back()) {
            ValueCurve::grid_values(precisions, out);
            return;
        }
        kernels::matvec(*masses_, values_, out);
    }

private:
    const SignalDensity& density_;
    std::shared_ptr<const std::vector<double>> radii_;
    std::shared_ptr<const std::vector<double>> grid_;
    std::shared_ptr<const std::vector<double>> masses_;
    std::vector<double> values_;
};

class BruteForce {
public:
    BruteForce(const SignalDensity& density, const CostFunction& cost, const BruteForceOptions& options)
        : density_(density), cost_(cost), options_(options), reach_(options.reach * density.scale()) {
        if (options.cells == 0 || options.levels < 2 || options.levels > 256) {
            throw ConfigError("brute force needs at least one cell and 2 to 256 value levels");
        }
        if (density.dimension() != 1) {
            throw DomainError("brute force over transfers is one-dimensional");
        }
        auto radii = std::make_shared<std::vector<double>>(options.cells + 1);
        for (std::size_t i = 0; i <= options.cells; ++i) {
            (*radii)[i] = reach_ * static_cast<double>(i) / static_cast<double>(options.cells);
        }
        auto grid = std::make_shared<std::vector<double>>(numeric::log_space(
            options.response.lambda_min, options.response.lambda_max, options.response.grid_points));
        auto masses = std::make_shared<std::vector<double>>(grid->size() * options.cells);
        for (std::size_t k = 0; k < grid->size(); ++k) {
            for (std::size_t i = 0; i < options.cells; ++i) {
                (*masses)[k * options.cells + i] =
                    density.mass_between((*grid)[k] * (*radii)[i], (*grid)[k] * (*radii)[i + 1]);
            }
        }
        radii_ = std::move(radii);
        grid_ = std::move(grid);
        masses_ = std::move(masses);
    }

    std::vector<double> values(const Digits& digits) const {
        std::vector<double> out(digits.size());
        for (std::size_t i = 0; i < digits.size(); ++i) {
            out[i] = static_cast<double>(digits[i]) / static_cast<double>(options_.levels - 1);
        }
        return out;
    }

    Transfer transfer(const Digits& digits) const { return Transfer::symmetric_cells(reach_, values(digits)); }

    Score strategic(const Digits& digits) const {
        const AgentResponse r = best_response(density_, transfer(digits), cost_, options_.response);
        return {r.lambda_star, r.participated ? r.payoff : -std::numeric_limits<double>::infinity(), digits};
    }

    Score screened(const Digits& digits) const {
        const CellMassCurve curve(density_, radii_, grid_, masses_, values(digits));
        const AgentResponse r = respond(curve, cost_, options_.response);
        return {r.lambda_star, r.participated ? r.payoff : -std::numeric_limits<double>::infinity(), digits};
    }

    Digits decode(std::size_t index) const {
        Digits digits(options_.cells);
        for (std::size_t i = 0; i < options_.cells; ++i) {
            digits[i] = static_cast<std::uint8_t>(index % options_.levels);
            index /= options_.levels;
        }
        return digits;
    }

    std::vector<Score> evaluate(const std::vector<Digits>& candidates, bool exact) const {
        std::vector<Score> scores(candidates.size());
        numeric::parallel_for(candidates.size(), options_.threads, [&](std::size_t i) {
            scores[i] = exact ? strategic(candidates[i]) : screened(candidates[i]);
        });
        return scores;
    }

    std::vector<Score> rescore_top(std::vector<Score> screened_scores) const {
        std::sort(screened_scores.begin(), screened_scores.end(), better);
        screened_scores.erase(std::unique(screened_scores.begin(), screened_scores.end(),
                                          [](const Score& a, const Score& b) { return a.digits == b.digits; }),
                              screened_scores.end());
        if (screened_scores.size() > options_.rescore) {
            screened_scores.resize(options_.rescore);
        }
        std::vector<Digits> finalists;
        for (const auto& s : screened_scores) {
            finalists.push_back(s.digits);
        }
        return evaluate(finalists, true);
    }

    Score climb(Digits digits, std::vector<Score>& visited, std::size_t& evaluations) const {
        Score current = screened(digits);
        ++evaluations;
        visited.push_back(current);
        for (int pass = 0; pass < 64; ++pass) {
            bool improved = false;
            for (std::size_t cell = 0; cell < options_.cells; ++cell) {
                for (std::size_t level = 0; level < options_.levels; ++level) {
                    if (level == current.digits[cell]) {
                        continue;
                    }
                    Digits trial = current.digits;
                    trial[cell] = static_cast<std::uint8_t>(level);
                    Score s = screened(trial);
                    ++evaluations;
                    visited.push_back(s);
                    if (better(s, current)) {
                        current = std::move(s);
                        improved = true;
                    }
                }
            }
            if (!improved) {
                break;
            }
        }
        return current;
    }

    BruteForceResult run() const {
        const double count = std::pow(static_cast<double>(options_.levels), static_cast<double>(options_.cells));
        const bool exhaustive = count <= static_cast<double>(options_.max_exhaustive);
        std::vector<Score> finalists;
        std::size_t evaluations = 0;
        if (exhaustive) {
            const auto total = static_cast<std::size_t>(count);
            std::vector<Digits> all(total);
            for (std::size_t i = 0; i < total; ++i) {
                all[i] = decode(i);
            }
            if (total <= options_.direct_limit) {
                finalists = evaluate(all, true);
                evaluations = total;
            } else {
                finalists = rescore_top(evaluate(all, false));
                evaluations = total + finalists.size();
            }
        } else {
            std::vector<Score> visited;
            for (std::size_t restart = 0; restart < options_.restarts; ++restart) {
                CounterRng rng(options_.seed, restart);
                Digits start(options_.cells);
                for (auto& digit : start) {
                    digit = static_cast<std::uint8_t>(rng.below(options_.levels));
                }
                (void)climb(std::move(start), visited, evaluations);
            }
            finalists = rescore_top(std::move(visited));
            evaluations += finalists.size();
        }
        const Score best = *std::min_element(finalists.begin(), finalists.end(),
                                             [](const Score& a, const Score& b) { return better(a, b); });
        return {transfer(best.digits), values(best.digits), best.lambda, best.payoff, evaluations, exhaustive};
    }

private:
    const SignalDensity& density_;
    const CostFunction& cost_;
    BruteForceOptions options_;
    double reach_;
    std::shared_ptr<const std::vector<double>> radii_;
    std::shared_ptr<const std::vector<double>> grid_;
    std::shared_ptr<const std::vector<double>> masses_;
};

double max_over(const std::vector<double>& xs, auto&& f) {
    double out = -std::numeric_limits<double>::infinity();
    for (double x : xs) {
        out = std::max(out, f(x));
    }
    return out;
}

}  // namespace

Transfer augment_transfer(const ElasticityAnalyzer& analyzer, const Transfer& t, double lambda_ref) {
    if (!(lambda_ref > 0.0) || !std::isfinite(lambda_ref)) {
        throw DomainError("reference precision must be positive and finite");
    }
    if (!t.is_symmetric()) {
        throw PreconditionError("augmentation needs a symmetric transfer");
    }
    require_iea(analyzer);
    return t.saturated_within(analyzer.eta_inverse(1.0).value / lambda_ref);
}

CutoffMatch match_cutoff(const SignalDensity& density, double lambda_ref, double target, double d_max,
                         double tol) {
    if (!(target >= 0.0 && target <= 1.0)) {
        throw DomainError("target expected transfer must lie in [0, 1]");
    }
    if (!(lambda_ref > 0.0)) {
        throw DomainError("reference precision must be positive");
    }
    if (target == 0.0) {
        return {0.0, true};
    }
    const double upper = d_max * density.scale();
    auto reaches = [&](double d) { return density.central_mass(lambda_ref * d) >= target; };
    if (!reaches(upper)) {
        return {upper, false};
    }
    return {numeric::first_true(reaches, 0.0, upper, tol), true};
}

Improvement improve_to_cutoff(const SignalDensity& density, const Transfer& t, const CostFunction& cost,
                              const ImprovementOptions& options) {
    const ElasticityAnalyzer analyzer(density);
    require_iea(analyzer);
    const AgentResponse original = best_response(density, t, cost, options.response);
    if (!original.participated) {
        return {0.0, 0.0, 0.0, std::nullopt};
    }
    const double lambda_t = original.lambda_star;

    PipelineTrace trace{lambda_t, original.report_offset, t.shifted(original.report_offset), Transfer::cutoff(0.0),
                        Transfer::cutoff(0.0), 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, {}};
    trace.symmetric = trace.recentred.symmetrized();
    trace.augmented = augment_transfer(analyzer, trace.symmetric, lambda_t);
    trace.truthful_at_lambda_t = expected_transfer_truthful(density, lambda_t, trace.recentred);
    trace.strategic_at_lambda_t = expected_transfer_strategic(density, lambda_t, trace.recentred).value;

    const ResponseOptions& window = options.response;
    trace.check_lambdas = numeric::log_space(std::max(window.lambda_min, 0.1 * lambda_t),
                                             std::min(window.lambda_max, 10.0 * lambda_t), options.check_points);
    trace.max_truthful_excess = max_over(trace.check_lambdas, [&](double l) {
        return expected_transfer_truthful(density, l, trace.recentred) -
               expected_transfer_strategic(density, l, trace.recentred).value;
    });
    trace.max_symmetrization_gap = max_over(trace.check_lambdas, [&](double l) {
        return std::abs(expected_transfer_truthful(density, l, trace.symmetric) -
                        expected_transfer_truthful(density, l, trace.recentred));
    });
    trace.min_augmentation_gain = -max_over(trace.check_lambdas, [&](double l) {
        return expected_transfer_truthful(density, l, trace.symmetric) -
               expected_transfer_truthful(density, l, trace.augmented);
    });
    trace.target = expected_transfer_truthful(density, lambda_t, trace.augmented);

    const CutoffMatch match = match_cutoff(density, lambda_t, trace.target, options.d_max);
    const AgentResponse improved = best_response_cutoff(density, match.d, cost, options.response);
    return {match.d, improved.lambda_star, lambda_t, std::move(trace)};
}

BruteForceResult brute_force_best_transfer(const SignalDensity& density, const CostFunction& cost,
                                           const BruteForceOptions& options) {
    return BruteForce(density, cost, options).run();
}

Counterexample build_counterexample(const SignalDensity& density, double lambda_ref, double d_ref, double x_inner,
                                    double x_outer, const CounterexampleOptions& options) {
    if (!(lambda_ref > 0.0) || !(d_ref > 0.0) || !(x_inner > 0.0) || !(x_outer > 0.0)) {
        throw DomainError("counterexample parameters must be positive");
    }
    if (density.dimension() != 1) {
        throw DomainError("counterexamples are built in one dimension");
    }
    const double eta_inner = elasticity(density, x_inner);
    const double eta_outer = elasticity(density, x_outer);
    if (!(eta_inner > eta_outer + options.eta_margin)) {
        throw PreconditionError("elasticity must fall from the inner to the outer point");
    }
    if (!(x_inner < lambda_ref * d_ref && lambda_ref * d_ref <= x_outer)) {
        throw PreconditionError("the inner point must lie inside the cutoff and the outer point outside it");
    }
    if (!(density.pdf(x_outer) > 0.0)) {
        throw PreconditionError("the outer point lies outside the support");
    }

    const double inner_centre = x_inner / lambda_ref;
    const double outer_centre = x_outer / lambda_ref;
    auto band_mass = [&](double centre, double half) {
        return density.probability_below(lambda_ref * (centre + half)) -
               density.probability_below(lambda_ref * (centre - half));
    };
    // The outer band must stay outside the cutoff and inside the support.
    double outer_room = outer_centre - d_ref;
    if (density.compact()) {
        outer_room = std::min(outer_room, density.support_halfwidth() / lambda_ref - outer_centre);
    }
    double delta_inner = std::min(options.delta_fraction * inner_centre, 0.5 * (d_ref - inner_centre));
    for (int retry = 0; retry <= options.max_retries; ++retry, delta_inner *= 0.5) {
        const double inner_mass = band_mass(inner_centre, delta_inner);
        if (outer_room <= 0.0 || band_mass(outer_centre, outer_room) < inner_mass) {
            continue;
        }
        auto reaches = [&](double half) { return band_mass(outer_centre, half) >= inner_mass; };
        const double delta_outer = numeric::first_true(reaches, 0.0, outer_room, 1e-15 * outer_room);

        // The inner band only removes payment where the cutoff pays and the outer band only adds
        // it where the cutoff pays nothing, so the sum stays within [0, 1].
        const std::vector<double> radii{0.0,
                                        inner_centre - delta_inner,
                                        inner_centre + delta_inner,
                                        d_ref,
                                        outer_centre - delta_outer,
                                        outer_centre + delta_outer};
        if (!std::is_sorted(radii.begin(), radii.end())) {
            throw PreconditionError("the perturbation bands cross the cutoff edge");
        }
        Transfer t = Transfer::symmetric(radii, {1.0, 0.0, 1.0, 0.0, 1.0});
        const double h = options.fd_step * lambda_ref;
        auto gap = [&](double l) {
            return expected_transfer_truthful(density, l, t) - density.central_mass(l * d_ref);
        };
        const double slope_gap = (gap(lambda_ref + h) - gap(lambda_ref - h)) / (2.0 * h);
        return {std::move(t), delta_inner, delta_outer, inner_mass, band_mass(outer_centre, delta_outer), slope_gap,
                retry};
    }
    throw PreconditionError("no outer band matches the inner band's probability");
}

CostFunction tangent_cost(const SignalDensity& density, double lambda_ref, double d_ref, double curvature) {
    if (!(lambda_ref > 0.0) || !(d_ref > 0.0) || !(curvature > 0.0)) {
        throw DomainError("tangent cost parameters must be positive");
    }
    return CostFunction::custom("tangent", [density, lambda_ref, d_ref, curvature](double lambda) {
        const double gap = lambda - lambda_ref;
        return density.central_mass(lambda * d_ref) + curvature * gap * gap;
    });
}

RefutationReport refute_cutoff_optimality(const SignalDensity& density, double lambda_ref, double d_ref,
                                          double x_inner, double x_outer, const RefutationOptions& options) {
    const CostFunction cost = tangent_cost(density, lambda_ref, d_ref, options.curvature);
    Counterexample ce = build_counterexample(density, lambda_ref, d_ref, x_inner, x_outer, options.counterexample);
    const double ce_lambda = best_response(density, ce.t, cost, options.solver.response).lambda_star;
    const SolveResult cutoffs = CutoffSolver(density, cost, options.solver).solve();
    BruteForceResult searched = brute_force_best_transfer(density, cost, options.brute);
    const double best_cutoff_lambda = std::max_element(cutoffs.scan.begin(), cutoffs.scan.end(),
                                                       [](const CutoffSample& a, const CutoffSample& b) {
                                                           return a.lambda < b.lambda;
                                                       })
                                          ->lambda;
    return {std::move(ce),
            ce_lambda,
            cutoffs.d_star,
            best_cutoff_lambda,
            std::move(searched),
            ce_lambda - best_cutoff_lambda,
            searched.lambda - best_cutoff_lambda};
}

CrossDerivative cross_derivative_check(const SignalDensity& density, double lambda, double d, double step) {
    if (!(lambda > step) || !(d > step)) {
        throw DomainError("cross derivative needs lambda and d above the step");
    }
    const double r = lambda * d;
    const double lo = (lambda - step) * (d - step);
    const double hi = (lambda + step) * (d + step);
    bool at_kink = false;
    double kink = 0.0;
    for (double k : density.kinks()) {
        if (k >= lo && k <= hi) {
            at_kink = true;
            kink = k;
        }
    }

    // mass_between keeps the inner differences accurate instead of subtracting two cdf values.
    auto d_mass = [&](double l, double d0, double d1) { return density.mass_between(l * d0, l * d1); };
    double fd = 0.0;
    if (!at_kink) {
        fd = (d_mass(lambda + step, d - step, d + step) - d_mass(lambda - step, d - step, d + step)) /
             (4.0 * step * step);
    } else if (kink >= r) {
        fd = (d_mass(lambda, d - step, d) - d_mass(lambda - step, d - step, d)) / (step * step);
    } else {
        fd = (d_mass(lambda + step, d, d + step) - d_mass(lambda, d, d + step)) / (step * step);
    }

    const double n = density.dimension();
    const double shell = n * density.volume_coefficient() * density.pdf(r) * std::pow(r, n - 1.0);
    const double closed = shell == 0.0 ? 0.0 : shell * (n - elasticity(density, r));
    return {fd, closed, at_kink};
}

}  // namespace infocontract
