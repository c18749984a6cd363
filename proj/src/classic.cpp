#include "infocontract/classic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>
#include <tuple>

#include "infocontract/error.hpp"
#include "infocontract/numeric.hpp"

namespace infocontract {

namespace {

constexpr double kEffortTie = 1e-9;

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

struct OutputTable {
    std::vector<double> efforts;
    std::vector<double> outputs;
    std::vector<std::vector<double>> pdf;
    std::vector<std::vector<double>> cdf;

    // Bracketing node and weight of the upper node for linear interpolation in effort.
    std::pair<std::size_t, double> effort_weight(double e) const {
        if (e <= efforts.front()) {
            return {0, 0.0};
        }
        if (e >= efforts.back()) {
            return {efforts.size() - 2, 1.0};
        }
        const auto it = std::upper_bound(efforts.begin(), efforts.end(), e);
        const auto i = static_cast<std::size_t>(it - efforts.begin()) - 1;
        return {i, (e - efforts[i]) / (efforts[i + 1] - efforts[i])};
    }

    double row_pdf(std::size_t row, double y) const {
        if (y < outputs.front() || y > outputs.back()) {
            return 0.0;
        }
        const auto it = std::upper_bound(outputs.begin(), outputs.end(), y);
        const auto j = std::min(static_cast<std::size_t>(it - outputs.begin()), outputs.size() - 1) - 1;
        const double w = (y - outputs[j]) / (outputs[j + 1] - outputs[j]);
        return (1.0 - w) * pdf[row][j] + w * pdf[row][j + 1];
    }

    double row_cdf(std::size_t row, double y) const {
        if (y <= outputs.front()) {
            return 0.0;
        }
        if (y >= outputs.back()) {
            return 1.0;
        }
        const auto it = std::upper_bound(outputs.begin(), outputs.end(), y);
        const auto j = static_cast<std::size_t>(it - outputs.begin()) - 1;
        const double h = y - outputs[j];
        const double slope = (pdf[row][j + 1] - pdf[row][j]) / (outputs[j + 1] - outputs[j]);
        return cdf[row][j] + h * (pdf[row][j] + 0.5 * slope * h);
    }

    double mix(double e, const auto& per_row) const {
        if (efforts.size() == 1) {
            return per_row(0);
        }
        const auto [i, w] = effort_weight(e);
        return (1.0 - w) * per_row(i) + w * per_row(i + 1);
    }
};

}  // namespace

std::string_view output_family_name(OutputFamily family) noexcept {
    switch (family) {
        case OutputFamily::exponential_mean_e:
            return "exponential_mean_e";
        case OutputFamily::lognormal_scale_e:
            return "lognormal_scale_e";
        case OutputFamily::tabulated:
            return "tabulated";
    }
    return "unknown";
}

OutputFamily parse_output_family(std::string_view name) {
    for (OutputFamily f : {OutputFamily::exponential_mean_e, OutputFamily::lognormal_scale_e, OutputFamily::tabulated}) {
        if (output_family_name(f) == name) {
            return f;
        }
    }
    throw ConfigError("unknown output model '" + std::string(name) + "'");
}

OutputModel::OutputModel(OutputFamily family, double e_min, double e_max, double y_max,
                         std::function<double(double, double)> pdf, std::function<double(double, double)> cdf)
    : family_(family), e_min_(e_min), e_max_(e_max), y_max_(y_max), pdf_(std::move(pdf)), cdf_(std::move(cdf)) {}

OutputModel OutputModel::exponential_mean_e(double e_max) {
    if (!(e_max > 0.0) || !std::isfinite(e_max)) {
        throw DomainError("effort upper bound must be positive and finite");
    }
    return OutputModel(
        OutputFamily::exponential_mean_e, 0.0, e_max, 4.0 * e_max,
        [](double y, double e) { return y < 0.0 ? 0.0 : std::exp(-y / e) / e; },
        [](double y, double e) { return y <= 0.0 ? 0.0 : -std::expm1(-y / e); });
}

OutputModel OutputModel::lognormal_scale_e(double sigma, double e_max) {
    if (!(sigma > 0.0) || !(e_max > 0.0) || !std::isfinite(sigma) || !std::isfinite(e_max)) {
        throw DomainError("lognormal output needs positive sigma and effort bound");
    }
    return OutputModel(
        OutputFamily::lognormal_scale_e, 0.0, e_max, e_max * std::exp(3.0 * sigma),
        [sigma](double y, double e) {
            if (y <= 0.0) {
                return 0.0;
            }
            const double z = (std::log(y) - std::log(e)) / sigma;
            return std::exp(-0.5 * z * z) / (y * sigma * std::sqrt(2.0 * std::numbers::pi));
        },
        [sigma](double y, double e) { return y <= 0.0 ? 0.0 : normal_cdf((std::log(y) - std::log(e)) / sigma); });
}

OutputModel OutputModel::tabulated(std::vector<double> efforts, std::vector<double> outputs,
                                   std::vector<std::vector<double>> densities) {
    if (efforts.empty() || outputs.size() < 2 || densities.size() != efforts.size()) {
        throw DomainError("tabulated output model needs one density row per effort and two outputs");
    }
    if (!std::is_sorted(efforts.begin(), efforts.end()) ||
        std::adjacent_find(efforts.begin(), efforts.end()) != efforts.end() || efforts.front() < 0.0) {
        throw DomainError("tabulated efforts must be nonnegative and strictly increasing");
    }
    if (!std::is_sorted(outputs.begin(), outputs.end()) ||
        std::adjacent_find(outputs.begin(), outputs.end()) != outputs.end() || outputs.front() < 0.0) {
        throw DomainError("tabulated outputs must be nonnegative and strictly increasing");
    }
    auto table = std::make_shared<OutputTable>();
    table->efforts = std::move(efforts);
    table->outputs = std::move(outputs);
    for (auto& row : densities) {
        if (row.size() != table->outputs.size()) {
            throw DomainError("density row length does not match the output grid");
        }
        std::vector<double> cumulative(row.size(), 0.0);
        for (std::size_t j = 0; j + 1 < row.size(); ++j) {
            if (row[j] < 0.0 || row[j + 1] < 0.0) {
                throw DomainError("tabulated output densities must be nonnegative");
            }
            cumulative[j + 1] = cumulative[j] + 0.5 * (row[j] + row[j + 1]) * (table->outputs[j + 1] - table->outputs[j]);
        }
        const double total = cumulative.back();
        if (!(total > 0.0)) {
            throw DomainError("tabulated output density has zero mass");
        }
        for (std::size_t j = 0; j < row.size(); ++j) {
            row[j] /= total;
            cumulative[j] /= total;
        }
        table->pdf.push_back(std::move(row));
        table->cdf.push_back(std::move(cumulative));
    }
    const double e_min = table->efforts.front();
    const double e_max = table->efforts.back();
    const double y_max = table->outputs.back();
    return OutputModel(
        OutputFamily::tabulated, e_min, e_max, y_max,
        [table](double y, double e) { return table->mix(e, [&](std::size_t r) { return table->row_pdf(r, y); }); },
        [table](double y, double e) { return table->mix(e, [&](std::size_t r) { return table->row_cdf(r, y); }); });
}

double OutputModel::pdf(double y, double e) const {
    if (e < e_min_ || e > e_max_) {
        throw DomainError("effort outside the model's domain");
    }
    if (family_ != OutputFamily::tabulated && e <= 0.0) {
        return 0.0;
    }
    return pdf_(y, e);
}

double OutputModel::cdf(double y, double e) const {
    if (e < e_min_ || e > e_max_) {
        throw DomainError("effort outside the model's domain");
    }
    if (family_ != OutputFamily::tabulated && e <= 0.0) {
        return y >= 0.0 ? 1.0 : 0.0;
    }
    return cdf_(y, e);
}

double OutputModel::survival(double d, double e) const {
    if (d <= 0.0) {
        return 1.0;
    }
    return 1.0 - cdf(d, e);
}

MlrpCheck check_output_mlrp(const OutputModel& model, std::size_t grid, double tol) {
    const double e_lo = std::max(model.e_min(), 1e-3 * model.e_max());
    const std::vector<double> efforts = numeric::lin_space(e_lo, model.e_max(), grid);
    const std::vector<double> outputs = numeric::lin_space(0.0, model.y_max(), grid + 1);
    std::vector<std::vector<double>> g(efforts.size(), std::vector<double>(outputs.size()));
    for (std::size_t a = 0; a < efforts.size(); ++a) {
        for (std::size_t i = 0; i < outputs.size(); ++i) {
            g[a][i] = model.pdf(outputs[i], efforts[a]);
        }
    }
    for (std::size_t i = 0; i < outputs.size(); ++i) {
        for (std::size_t j = i + 1; j < outputs.size(); ++j) {
            for (std::size_t a = 0; a < efforts.size(); ++a) {
                for (std::size_t b = a + 1; b < efforts.size(); ++b) {
                    // g(y2;e2)/g(y1;e2) >= g(y2;e1)/g(y1;e1), cross-multiplied so zero densities are allowed.
                    const double higher = g[b][j] * g[a][i];
                    const double lower = g[a][j] * g[b][i];
                    if (higher < lower - tol * std::max(1.0, lower)) {
                        return {false, std::array<double, 4>{outputs[i], outputs[j], efforts[a], efforts[b]}};
                    }
                }
            }
        }
    }
    return {true, std::nullopt};
}

EffortResponse best_effort(const OutputModel& model, const std::function<double(double)>& value,
                           const CostFunction& cost, const EffortOptions& options) {
    const std::vector<double> grid = numeric::lin_space(model.e_min(), model.e_max(), options.grid_points);
    std::vector<double> gain(grid.size());
    std::vector<double> loss(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k) {
        gain[k] = value(grid[k]);
        loss[k] = cost(grid[k]);
    }
    const numeric::Extremum best = numeric::largest_maximizer(
        grid, gain, loss, [&](double e) { return value(e) - cost(e); },
        {options.tie_tol, options.peak_slack, options.max_peaks});
    if (best.value < -options.participation_tol) {
        return {};
    }
    return {best.x, best.value, true};
}

EffortResponse quota_response(const OutputModel& model, double d, const CostFunction& cost,
                              const EffortOptions& options) {
    return best_effort(model, [&](double e) { return model.survival(d, e); }, cost, options);
}

ClassicResult solve_classic_pa(const OutputModel& model, const CostFunction& cost, const ClassicOptions& options) {
    auto scan = [&](double lo, double hi, std::size_t points) {
        const std::vector<double> ds = numeric::lin_space(lo, hi, points);
        std::vector<EffortResponse> responses(ds.size());
        numeric::parallel_for(ds.size(), options.threads,
                              [&](std::size_t i) { responses[i] = quota_response(model, ds[i], cost, options.effort); });
        std::size_t best = 0;
        for (std::size_t i = 1; i < ds.size(); ++i) {
            if (responses[i].effort > responses[best].effort + kEffortTie) {
                best = i;
            }
        }
        return std::tuple{ds, responses, best};
    };

    auto [ds, responses, best] = scan(0.0, model.y_max(), options.scan_points);
    for (int round = 0; round < options.refine_rounds; ++round) {
        const double lo = ds[best == 0 ? 0 : best - 1];
        const double hi = ds[std::min(best + 1, ds.size() - 1)];
        auto [rds, rresponses, rbest] = scan(lo, hi, options.refine_points);
        if (rresponses[rbest].effort >= responses[best].effort - kEffortTie) {
            ds = std::move(rds);
            responses = std::move(rresponses);
            best = rbest;
        }
    }
    const EffortResponse& chosen = responses[best];
    if (!chosen.participated || chosen.effort <= model.e_min()) {
        throw InfeasibleContract("no quota induces effort above the minimum");
    }
    return {ds[best], chosen.effort, chosen.payoff, check_output_mlrp(model).holds};
}

OutputBruteForce brute_force_output_transfer(const OutputModel& model, const CostFunction& cost, std::size_t cells,
                                             double reach, const EffortOptions& options, unsigned threads) {
    if (cells == 0 || cells > 20 || !(reach > 0.0)) {
        throw DomainError("output brute force needs 1 to 20 cells and a positive reach");
    }
    const double width = reach / static_cast<double>(cells);
    const std::size_t count = std::size_t{1} << cells;
    std::vector<EffortResponse> responses(count);
    numeric::parallel_for(count, threads, [&](std::size_t code) {
        auto value = [&](double e) {
            double v = 0.0;
            for (std::size_t i = 0; i < cells; ++i) {
                if (((code >> (cells - 1 - i)) & 1U) == 0) {
                    continue;
                }
                const double lo = static_cast<double>(i) * width;
                v += i + 1 == cells ? model.survival(lo, e) : model.cdf(lo + width, e) - model.cdf(lo, e);
            }
            return v;
        };
        responses[code] = best_effort(model, value, cost, options);
    });
    // Codes run in lexicographic order of the value vector, so a strict comparison keeps the smaller one.
    std::size_t best = 0;
    for (std::size_t code = 1; code < count; ++code) {
        if (responses[code].effort > responses[best].effort + kEffortTie) {
            best = code;
        }
    }
    std::vector<double> values(cells);
    for (std::size_t i = 0; i < cells; ++i) {
        values[i] = static_cast<double>((best >> (cells - 1 - i)) & 1U);
    }
    return {std::move(values), responses[best].effort, responses[best].payoff, count};
}

}  // namespace infocontract
