#pragma once

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "infocontract/density.hpp"

namespace infocontract {

/// eta(x) = -x phi'(x)/phi(x); +infinity where phi vanishes or outside the support.
/// Throws DomainError for x <= 0.
[[nodiscard]] double elasticity(const SignalDensity& density, double x);

struct ElasticityScanOptions {
    std::size_t points = 4096;
    /// Lower end of the log-spaced scan, relative to the density scale.
    double lower_fraction = 1e-6;
    /// Slack allowed on monotonicity of eta.
    double monotonicity_tol = 1e-7;
    double bisection_tol = 1e-9;
};

struct EtaThreshold {
    double value;
    /// eta never exceeded n on the scan; value is then the scan's upper end.
    bool overflow;
};

struct IeaCheck {
    bool holds;
    /// (x, y) with x < y, eta(x) > n and eta(y) < eta(x) - tol.
    std::optional<std::pair<double, double>> witness;
};

struct ElasticityProfile {
    double n;
    std::function<double(double)> eta;
    double eta_inverse_n;
    bool overflow;
    double crossing_point;
    bool iea_holds;
    std::optional<std::pair<double, double>> iea_witness;
    bool global_mlrp;
    bool strongly_unimodal;
};

/// Elasticity eta(x) = -x phi'(x)/phi(x) of a density and the threshold conditions built on it.
/// The constructor tabulates eta on a log-spaced scan that every check reuses.
class ElasticityAnalyzer {
public:
    explicit ElasticityAnalyzer(SignalDensity density, ElasticityScanOptions options = {});

    [[nodiscard]] double eta(double x) const;
    /// inf{x > 0 : eta(x) > n}.
    [[nodiscard]] EtaThreshold eta_inverse(double n) const;
    /// Start of the final stretch on which eta stays above n.
    [[nodiscard]] double crossing_point(double n) const;
    [[nodiscard]] IeaCheck check_iea(double n) const;
    [[nodiscard]] bool check_global_mlrp() const;
    /// Log-concavity: phi'/phi nonincreasing on the scan.
    [[nodiscard]] bool check_strong_unimodality() const;
    [[nodiscard]] ElasticityProfile profile(double n) const;

    [[nodiscard]] const SignalDensity& density() const noexcept { return density_; }
    [[nodiscard]] const std::vector<double>& scan_x() const noexcept { return xs_; }
    [[nodiscard]] const std::vector<double>& scan_eta() const noexcept { return etas_; }

private:
    SignalDensity density_;
    ElasticityScanOptions options_;
    std::vector<double> xs_;
    std::vector<double> etas_;
};

}  // namespace infocontract
