#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <string>
#include <vector>

namespace infocontract {

enum class CostKind { power, affine_power, tabulated, custom };

/// Cost of precision with c(0) = 0. Evaluation for lambda > 0 may include a fixed entry cost,
/// which keeps the function lower semicontinuous at 0.
class CostFunction {
public:
    /// a * lambda^p
    static CostFunction power(double a, double p);
    /// fixed * 1{lambda > 0} + a * lambda^p
    static CostFunction affine_power(double fixed, double a, double p);
    /// Piecewise-linear through (lambda_i, cost_i); constant below the first node, linear
    /// continuation of the last segment above the final node.
    static CostFunction tabulated(std::vector<double> lambdas, std::vector<double> costs);
    static CostFunction tabulated_csv(const std::filesystem::path& path);
    /// Arbitrary cost given by its values on lambda > 0.
    static CostFunction custom(std::string name, std::function<double(double)> positive_part);

    /// lambda -> factor * c(lambda)
    [[nodiscard]] CostFunction scaled(double factor) const;
    /// lambda -> c(factor * lambda); the cost of precision when the noise is scaled by `factor`.
    [[nodiscard]] CostFunction dilated(double factor) const;

    /// Throws DomainError for negative or non-finite lambda.
    [[nodiscard]] double operator()(double lambda) const;
    [[nodiscard]] double right_limit_at_zero() const;

    [[nodiscard]] CostKind kind() const noexcept { return kind_; }
    [[nodiscard]] const std::string& description() const noexcept { return description_; }
    [[nodiscard]] const std::map<std::string, double>& parameters() const noexcept { return parameters_; }

private:
    CostFunction(CostKind kind, std::string description, std::map<std::string, double> parameters,
                 std::function<double(double)> positive_part);

    CostKind kind_;
    std::string description_;
    std::map<std::string, double> parameters_;
    std::function<double(double)> positive_part_;
};

}  // namespace infocontract
