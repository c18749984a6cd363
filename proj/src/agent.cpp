#include "infocontract/agent.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "infocontract/error.hpp"
#include "infocontract/kernels.hpp"
#include "infocontract/numeric.hpp"

namespace infocontract {

namespace {

void require_precision(double precision) {
    if (!(precision > 0.0) || !std::isfinite(precision)) {
        throw DomainError("precision must be positive and finite");
    }
}

// Expected value of t(Y - offset) for Y with the scaled density: sum of jump_j * P(Y < edge_j + offset).
double shifted_value(const SignalDensity& density, double precision, const std::vector<double>& edges,
                     const std::vector<double>& jumps, double offset) {
    double total = 0.0;
    for (std::size_t j = 0; j < edges.size(); ++j) {
        total += jumps[j] * density.probability_below(precision * (edges[j] + offset));
    }
    return total;
}

class CutoffCurve final : public ValueCurve {
public:
    CutoffCurve(SignalDensity density, double d, PrecisionMap map)
        : density_(std::move(density)), d_(d), map_(std::move(map)) {}
    double value(double precision) const override {
        return density_.central_mass(map_(precision) * d_);
    }

private:
    SignalDensity density_;
    double d_;
    PrecisionMap map_;
};

class TruthfulCurve final : public ValueCurve {
public:
    TruthfulCurve(SignalDensity density, Transfer t) : density_(std::move(density)), t_(std::move(t)) {}
    double value(double precision) const override {
        return expected_transfer_truthful(density_, precision, t_);
    }

private:
    SignalDensity density_;
    Transfer t_;
};

class StrategicCurve final : public ValueCurve {
public:
    StrategicCurve(SignalDensity density, Transfer t, StrategicOptions options)
        : density_(std::move(density)), t_(std::move(t)), options_(options) {}

    double value(double precision) const override {
        return expected_transfer_strategic(density_, precision, t_, options_).value;
    }
    double report_offset(double precision) const override {
        return expected_transfer_strategic(density_, precision, t_, options_).report_offset;
    }

    // On an equally spaced transfer, offsets that are multiples of the cell width map every
    // shifted edge back onto the lattice, so one table of cdf values per precision serves all
    // offsets and the search reduces to a sliding correlation.
    void grid_values(std::span<const double> precisions, std::span<double> out) const override {
        const auto width = t_.lattice_width();
        if (t_.is_cutoff() || t_.is_zero() || !width || density_.dimension() != 1) {
            ValueCurve::grid_values(precisions, out);
            return;
        }
        // Coarse cells are split so the offset resolution matches the exact search.
        const auto split = std::max<std::size_t>(
            1, static_cast<std::size_t>(std::ceil(*width / (options_.max_step_fraction * t_.reach()) - 1e-9)));
        const double step = *width / static_cast<double>(split);
        const std::vector<double> coarse = t_.jumps();
        std::vector<double> jumps((coarse.size() - 1) * split + 1, 0.0);
        for (std::size_t j = 0; j < coarse.size(); ++j) {
            jumps[j * split] = coarse[j];
        }
        const std::size_t cells = jumps.size() - 1;
        const double left = t_.edges().front();
        const auto reach_steps =
            static_cast<std::size_t>(std::ceil(options_.span * t_.reach() / step - 1e-9));
        const std::size_t half = std::min(reach_steps, options_.max_offsets / 2);
        std::vector<double> table(cells + 2 * half + 1);
        std::vector<double> correlation(2 * half + 1);
        for (std::size_t k = 0; k < precisions.size(); ++k) {
            for (std::size_t q = 0; q < table.size(); ++q) {
                const double x = left + (static_cast<double>(q) - static_cast<double>(half)) * step;
                table[q] = density_.probability_below(precisions[k] * x);
            }
            out[k] = kernels::correlate_max(jumps, table, correlation).value;
        }
    }

private:
    SignalDensity density_;
    Transfer t_;
    StrategicOptions options_;
};

}  // namespace

PrecisionMap identity_precision() {
    return [](double lambda) { return lambda; };
}

SignalModel SignalModel::draw(double state, double noise, double precision) {
    require_precision(precision);
    const double signal = state + noise / precision;
    return {state, signal, signal, noise, precision};
}

double expected_transfer_cutoff(const SignalDensity& density, double precision, double d,
                                int dimension) {
    require_precision(precision);
    if (dimension != density.dimension()) {
        throw DomainError("cutoff dimension does not match the density dimension");
    }
    if (!(d >= 0.0)) {
        throw DomainError("cutoff radius must be nonnegative");
    }
    return density.central_mass(precision * d);
}

double expected_transfer_truthful(const SignalDensity& density, double precision, const Transfer& t) {
    require_precision(precision);
    if (t.is_cutoff()) {
        return density.central_mass(precision * t.cutoff_radius());
    }
    if (density.dimension() != 1) {
        throw DomainError("non-cutoff transfers are only defined in one dimension");
    }
    const auto& edges = t.edges();
    const auto& values = t.values();
    double total = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (values[i] == 0.0) {
            continue;
        }
        const double lo = density.probability_below(precision * edges[i]);
        const double hi = density.probability_below(precision * edges[i + 1]);
        total += values[i] * (hi - lo);
    }
    return total;
}

StrategicValue expected_transfer_strategic(const SignalDensity& density, double precision,
                                           const Transfer& t, const StrategicOptions& options) {
    require_precision(precision);
    if (t.is_cutoff()) {
        return {density.central_mass(precision * t.cutoff_radius()), 0.0};
    }
    if (density.dimension() != 1) {
        throw DomainError("non-cutoff transfers are only defined in one dimension");
    }
    if (t.is_zero()) {
        return {0.0, 0.0};
    }
    const auto& edges = t.edges();
    const std::vector<double> jumps = t.jumps();
    const double reach = t.reach();
    const double step_guess = std::min(t.min_cell_width(), options.max_step_fraction * reach);
    const std::size_t half = std::clamp<std::size_t>(
        static_cast<std::size_t>(std::ceil(options.span * reach / step_guess)), 1, options.max_offsets / 2);
    const double step = options.span * reach / static_cast<double>(half);

    auto at = [&](double offset) { return shifted_value(density, precision, edges, jumps, offset); };
    const double truthful = at(0.0);
    double best = truthful;
    double best_offset = 0.0;
    for (std::size_t i = 0; i <= 2 * half; ++i) {
        const double offset = (static_cast<double>(i) - static_cast<double>(half)) * step;
        const double v = at(offset);
        if (v > best) {
            best = v;
            best_offset = offset;
        }
    }
    const auto refined = numeric::maximize_on(at, best_offset - step, best_offset + step);
    if (refined.value > best) {
        best = refined.value;
        best_offset = refined.x;
    }
    if (truthful >= best - options.truthful_tie) {
        return {truthful, 0.0};
    }
    return {best, best_offset};
}

bool verify_truthful_report(const SignalDensity& density, const Transfer& t, double precision,
                            double offset_tol, double value_gap_tol) {
    const StrategicValue strategic = expected_transfer_strategic(density, precision, t);
    if (std::abs(strategic.report_offset) <= offset_tol) {
        return true;
    }
    return strategic.value - expected_transfer_truthful(density, precision, t) <= value_gap_tol;
}

void ValueCurve::grid_values(std::span<const double> precisions, std::span<double> out) const {
    for (std::size_t k = 0; k < precisions.size(); ++k) {
        out[k] = value(precisions[k]);
    }
}

AgentResponse respond(const ValueCurve& curve, const CostFunction& cost, const ResponseOptions& options) {
    const std::vector<double> grid =
        numeric::log_space(options.lambda_min, options.lambda_max, options.grid_points);
    const std::size_t n = grid.size();
    std::vector<double> gain(n);
    std::vector<double> loss(n);
    curve.grid_values(grid, gain);
    for (std::size_t k = 0; k < n; ++k) {
        loss[k] = cost(grid[k]);
    }
    const numeric::Extremum best = numeric::largest_maximizer(
        grid, gain, loss, [&](double lambda) { return curve.value(lambda) - cost(lambda); },
        {options.tie_tol, options.peak_slack, options.max_peaks});

    AgentResponse response;
    response.max_payoff = best.value;
    if (best.value < -options.participation_tol) {
        return response;
    }
    response.lambda_star = best.x;
    response.payoff = best.value;
    response.expected_transfer = curve.value(best.x);
    response.report_offset = curve.report_offset(best.x);
    response.participated = true;
    response.unbounded = best.x >= options.lambda_max * (1.0 - 1e-6);
    return response;
}

std::unique_ptr<ValueCurve> cutoff_curve(const SignalDensity& density, double d, PrecisionMap map) {
    if (!(d >= 0.0)) {
        throw DomainError("cutoff radius must be nonnegative");
    }
    return std::make_unique<CutoffCurve>(density, d, std::move(map));
}

std::unique_ptr<ValueCurve> truthful_curve(const SignalDensity& density, Transfer t) {
    return std::make_unique<TruthfulCurve>(density, std::move(t));
}

std::unique_ptr<ValueCurve> strategic_curve(const SignalDensity& density, Transfer t,
                                            StrategicOptions options) {
    return std::make_unique<StrategicCurve>(density, std::move(t), options);
}

AgentResponse best_response(const SignalDensity& density, const Transfer& t, const CostFunction& cost,
                            const ResponseOptions& options) {
    if (t.is_cutoff()) {
        return best_response_cutoff(density, t.cutoff_radius(), cost, options);
    }
    return respond(*strategic_curve(density, t), cost, options);
}

AgentResponse best_response_cutoff(const SignalDensity& density, double d, const CostFunction& cost,
                                   const ResponseOptions& options, const PrecisionMap& map) {
    return respond(*cutoff_curve(density, d, map), cost, options);
}

AgentResponse best_response_truthful(const SignalDensity& density, const Transfer& t,
                                     const CostFunction& cost, const ResponseOptions& options) {
    return respond(*truthful_curve(density, t), cost, options);
}

}  // namespace infocontract
