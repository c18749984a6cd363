#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include "infocontract/cost.hpp"

namespace infocontract {

enum class OutputFamily { exponential_mean_e, lognormal_scale_e, tabulated };

[[nodiscard]] std::string_view output_family_name(OutputFamily family) noexcept;
[[nodiscard]] OutputFamily parse_output_family(std::string_view name);

/// Output y >= 0 drawn from g(y; e) given effort e in [0, e_max]. Zero effort yields zero output.
class OutputModel {
public:
    /// Exponential output with mean e.
    static OutputModel exponential_mean_e(double e_max = 5.0);
    /// log y ~ N(log e, sigma^2).
    static OutputModel lognormal_scale_e(double sigma = 1.0, double e_max = 5.0);
    /// Densities tabulated on an output grid for each listed effort level, linear in both
    /// directions between nodes. Each row is normalized on the grid.
    static OutputModel tabulated(std::vector<double> efforts, std::vector<double> outputs,
                                 std::vector<std::vector<double>> densities);

    [[nodiscard]] OutputFamily family() const noexcept { return family_; }
    [[nodiscard]] double e_min() const noexcept { return e_min_; }
    [[nodiscard]] double e_max() const noexcept { return e_max_; }
    /// Output level beyond which the principal does not search for a quota.
    [[nodiscard]] double y_max() const noexcept { return y_max_; }

    [[nodiscard]] double pdf(double y, double e) const;
    [[nodiscard]] double cdf(double y, double e) const;
    /// P(y >= d | e).
    [[nodiscard]] double survival(double d, double e) const;

private:
    OutputModel(OutputFamily family, double e_min, double e_max, double y_max,
                std::function<double(double, double)> pdf, std::function<double(double, double)> cdf);

    OutputFamily family_;
    double e_min_;
    double e_max_;
    double y_max_;
    std::function<double(double, double)> pdf_;
    std::function<double(double, double)> cdf_;
};

struct MlrpCheck {
    bool holds;
    /// (y1, y2, e1, e2) with y1 < y2, e1 < e2 and g(y2;e)/g(y1;e) lower at e2 than at e1.
    std::optional<std::array<double, 4>> witness;
};

[[nodiscard]] MlrpCheck check_output_mlrp(const OutputModel& model, std::size_t grid = 40, double tol = 1e-7);

struct EffortOptions {
    std::size_t grid_points = 1024;
    double tie_tol = 1e-9;
    double participation_tol = 1e-12;
    std::size_t max_peaks = 8;
    double peak_slack = 1e-3;
};

struct EffortResponse {
    double effort = 0.0;
    double payoff = 0.0;
    bool participated = false;
};

/// Largest maximizer of value(e) - cost(e) over the model's effort window.
[[nodiscard]] EffortResponse best_effort(const OutputModel& model, const std::function<double(double)>& value,
                                         const CostFunction& cost, const EffortOptions& options = {});

/// Effort induced by the quota that pays 1 when output reaches d.
[[nodiscard]] EffortResponse quota_response(const OutputModel& model, double d, const CostFunction& cost,
                                            const EffortOptions& options = {});

struct ClassicOptions {
    std::size_t scan_points = 512;
    std::size_t refine_points = 64;
    int refine_rounds = 2;
    EffortOptions effort;
    unsigned threads = 1;
};

struct ClassicResult {
    double d_star;
    double e_star;
    double agent_payoff;
    bool mlrp_holds;
};

/// Quota maximizing the induced effort, smallest quota on ties. Throws InfeasibleContract when
/// no quota induces positive effort.
[[nodiscard]] ClassicResult solve_classic_pa(const OutputModel& model, const CostFunction& cost,
                                             const ClassicOptions& options = {});

struct OutputBruteForce {
    /// Cell values from zero output upward; the last cell extends to infinity.
    std::vector<double> values;
    double effort;
    double payoff;
    std::size_t evaluated;
};

/// Exhaustive search over binary step transfers of output with `cells` equal cells on
/// [0, reach), the last one unbounded above. Keeps the highest induced effort, then the
/// lexicographically smaller value vector.
[[nodiscard]] OutputBruteForce brute_force_output_transfer(const OutputModel& model, const CostFunction& cost,
                                                           std::size_t cells, double reach,
                                                           const EffortOptions& options = {}, unsigned threads = 1);

}  // namespace infocontract
