#include "infocontract/cost.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "infocontract/error.hpp"

namespace infocontract {

namespace {

void require_nonnegative(double value, const char* what) {
    if (!(value >= 0.0) || !std::isfinite(value)) {
        throw DomainError(std::string("cost parameter ") + what + " must be finite and nonnegative");
    }
}

std::string format_number(double v) {
    std::ostringstream out;
    out << v;
    return out.str();
}

}  // namespace

CostFunction::CostFunction(CostKind kind, std::string description,
                           std::map<std::string, double> parameters,
                           std::function<double(double)> positive_part)
    : kind_(kind),
      description_(std::move(description)),
      parameters_(std::move(parameters)),
      positive_part_(std::move(positive_part)) {}

CostFunction CostFunction::power(double a, double p) {
    require_nonnegative(a, "a");
    if (!(p > 0.0)) {
        throw DomainError("cost exponent p must be positive");
    }
    return {CostKind::power, format_number(a) + "*lambda^" + format_number(p), {{"a", a}, {"p", p}},
            [a, p](double lambda) { return a * std::pow(lambda, p); }};
}

CostFunction CostFunction::affine_power(double fixed, double a, double p) {
    require_nonnegative(fixed, "c0");
    require_nonnegative(a, "a");
    if (!(p > 0.0)) {
        throw DomainError("cost exponent p must be positive");
    }
    return {CostKind::affine_power,
            format_number(fixed) + "*1{lambda>0}+" + format_number(a) + "*lambda^" + format_number(p),
            {{"c0", fixed}, {"a", a}, {"p", p}},
            [fixed, a, p](double lambda) { return fixed + a * std::pow(lambda, p); }};
}

CostFunction CostFunction::tabulated(std::vector<double> lambdas, std::vector<double> costs) {
    if (lambdas.size() != costs.size() || lambdas.empty()) {
        throw DomainError("tabulated cost needs matching, nonempty lambda and cost columns");
    }
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
        require_nonnegative(lambdas[i], "lambda");
        require_nonnegative(costs[i], "cost");
        if (i > 0 && !(lambdas[i] > lambdas[i - 1])) {
            throw DomainError("tabulated cost grid must be strictly increasing");
        }
    }
    std::map<std::string, double> params{{"nodes", static_cast<double>(lambdas.size())},
                                         {"lambda_last", lambdas.back()}};
    auto eval = [x = std::move(lambdas), y = std::move(costs)](double lambda) {
        if (x.size() == 1 || lambda <= x.front()) {
            return y.front();
        }
        auto it = std::upper_bound(x.begin(), x.end(), lambda);
        std::size_t i = it == x.end() ? x.size() - 2 : static_cast<std::size_t>(it - x.begin()) - 1;
        const double w = (lambda - x[i]) / (x[i + 1] - x[i]);
        return std::max(0.0, y[i] + w * (y[i + 1] - y[i]));
    };
    return {CostKind::tabulated, "tabulated", std::move(params), std::move(eval)};
}

CostFunction CostFunction::tabulated_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open tabulated cost file " + path.string());
    }
    std::vector<double> lambdas;
    std::vector<double> costs;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream row(line);
        double a = 0.0;
        double b = 0.0;
        if (!(row >> a >> b)) {
            if (first) {
                first = false;
                continue;
            }
            throw ConfigError("malformed row in " + path.string() + ": " + line);
        }
        first = false;
        lambdas.push_back(a);
        costs.push_back(b);
    }
    return tabulated(std::move(lambdas), std::move(costs));
}

CostFunction CostFunction::custom(std::string name, std::function<double(double)> positive_part) {
    return {CostKind::custom, std::move(name), {}, std::move(positive_part)};
}

CostFunction CostFunction::scaled(double factor) const {
    if (!(factor > 0.0)) {
        throw DomainError("cost scaling factor must be positive");
    }
    auto params = parameters_;
    params["scale"] = factor * (params.contains("scale") ? params["scale"] : 1.0);
    return {kind_, format_number(factor) + "*(" + description_ + ")", std::move(params),
            [inner = positive_part_, factor](double lambda) { return factor * inner(lambda); }};
}

CostFunction CostFunction::dilated(double factor) const {
    if (!(factor > 0.0)) {
        throw DomainError("cost dilation factor must be positive");
    }
    auto params = parameters_;
    params["dilation"] = factor * (params.contains("dilation") ? params["dilation"] : 1.0);
    return {kind_, "(" + description_ + ")(" + format_number(factor) + "*lambda)", std::move(params),
            [inner = positive_part_, factor](double lambda) { return inner(factor * lambda); }};
}

double CostFunction::operator()(double lambda) const {
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
        throw DomainError("cost evaluated at a negative or non-finite precision");
    }
    return lambda == 0.0 ? 0.0 : positive_part_(lambda);
}

double CostFunction::right_limit_at_zero() const {
    return positive_part_(std::numeric_limits<double>::min());
}

}  // namespace infocontract
