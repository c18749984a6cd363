#pragma once

#include <functional>
#include <memory>
#include <span>

#include "infocontract/cost.hpp"
#include "infocontract/density.hpp"
#include "infocontract/transfer.hpp"

namespace infocontract {

/// Maps the agent's signal precision to the precision of the estimate the contract is scored on.
/// Identity in the base model; the prior variants plug in their posterior precision here.
using PrecisionMap = std::function<double(double)>;

[[nodiscard]] PrecisionMap identity_precision();

/// One draw of the signal s = state + noise / precision.
struct SignalModel {
    double state;
    double signal;
    double report;
    double noise;
    double precision;

    /// Builds the draw with signal = state + noise / precision and a truthful report.
    static SignalModel draw(double state, double noise, double precision);
};

/// Expected cutoff transfer: probability that the noise norm is within precision * d.
[[nodiscard]] double expected_transfer_cutoff(const SignalDensity& density, double precision,
                                              double d, int dimension);

/// Expected transfer when the agent must report his signal.
[[nodiscard]] double expected_transfer_truthful(const SignalDensity& density, double precision,
                                                const Transfer& t);

struct StrategicOptions {
    /// Offsets are searched on [-span * reach, span * reach].
    double span = 2.0;
    /// Offset step as a fraction of the reach when cells are coarser than that.
    double max_step_fraction = 0.125;
    std::size_t max_offsets = 4097;
    /// The truthful report is kept when it is this close to the best value.
    double truthful_tie = 1e-12;
};

struct StrategicValue {
    double value;
    /// Report minus signal at the optimum.
    double report_offset;
};

/// Expected transfer when the agent picks the report after seeing his signal.
[[nodiscard]] StrategicValue expected_transfer_strategic(const SignalDensity& density, double precision,
                                                         const Transfer& t,
                                                         const StrategicOptions& options = {});

/// True when reporting the signal is optimal at this precision.
[[nodiscard]] bool verify_truthful_report(const SignalDensity& density, const Transfer& t,
                                          double precision, double offset_tol = 1e-6,
                                          double value_gap_tol = 1e-8);

struct ResponseOptions {
    double lambda_min = 1e-3;
    double lambda_max = 1e3;
    std::size_t grid_points = 1024;
    /// Payoff maximizers within this tolerance tie; the largest precision wins.
    double tie_tol = 1e-9;
    /// Participation requires a maximal payoff of at least -participation_tol.
    double participation_tol = 1e-12;
    /// Grid peaks within this much of the best grid payoff are refined.
    double peak_slack = 1e-3;
    std::size_t max_peaks = 8;
};

struct AgentResponse {
    double lambda_star = 0.0;
    double payoff = 0.0;
    double expected_transfer = 0.0;
    double report_offset = 0.0;
    bool participated = false;
    /// The optimum sits at the upper end of the precision window.
    bool unbounded = false;
    /// Largest payoff over the window before the participation check.
    double max_payoff = 0.0;
};

/// Expected transfer as a function of precision, as the agent evaluates it.
class ValueCurve {
public:
    virtual ~ValueCurve() = default;
    [[nodiscard]] virtual double value(double precision) const = 0;
    [[nodiscard]] virtual double report_offset(double) const { return 0.0; }
    /// Values on a grid. Implementations may return lower bounds of `value`.
    virtual void grid_values(std::span<const double> precisions, std::span<double> out) const;
};

/// Maximizes value(lambda) - cost(lambda) over the precision window with the largest-maximizer
/// tie-break and the participation check.
[[nodiscard]] AgentResponse respond(const ValueCurve& curve, const CostFunction& cost,
                                    const ResponseOptions& options = {});

[[nodiscard]] std::unique_ptr<ValueCurve> cutoff_curve(const SignalDensity& density, double d,
                                                       PrecisionMap map = identity_precision());
[[nodiscard]] std::unique_ptr<ValueCurve> truthful_curve(const SignalDensity& density, Transfer t);
[[nodiscard]] std::unique_ptr<ValueCurve> strategic_curve(const SignalDensity& density, Transfer t,
                                                          StrategicOptions options = {});

/// The agent's precision choice under strategic reporting (cutoffs use the closed form).
[[nodiscard]] AgentResponse best_response(const SignalDensity& density, const Transfer& t,
                                          const CostFunction& cost, const ResponseOptions& options = {});

[[nodiscard]] AgentResponse best_response_cutoff(const SignalDensity& density, double d,
                                                 const CostFunction& cost,
                                                 const ResponseOptions& options = {},
                                                 const PrecisionMap& map = identity_precision());

/// The precision choice when the agent is bound to report his signal.
[[nodiscard]] AgentResponse best_response_truthful(const SignalDensity& density, const Transfer& t,
                                                   const CostFunction& cost,
                                                   const ResponseOptions& options = {});

}  // namespace infocontract
