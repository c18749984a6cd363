#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace infocontract {

enum class Family { gaussian, laplace, logistic, uniform, triangular, truncated_exp_inverse, tabulated };

[[nodiscard]] std::string_view family_name(Family family) noexcept;
/// Throws ConfigError on an unknown name.
[[nodiscard]] Family parse_family(std::string_view name);

struct DensityPoint {
    double pdf;
    double cdf;
    double dpdf;
};

namespace detail {
class Profile;
}

/// Standardized symmetric single-peaked noise density, optionally radial in n dimensions.
///
/// In one dimension `pdf`, `cdf` and `dpdf` are the usual functions of the signed argument.
/// For n > 1 the argument is a radius: `pdf` is the radial profile normalized so that its
/// integral over R^n is one and `cdf(r)` is the probability of the ball of radius r.
/// Instances are immutable and cheap to copy.
class SignalDensity {
public:
    static SignalDensity gaussian(int dimension = 1);
    static SignalDensity laplace(int dimension = 1);
    static SignalDensity logistic(int dimension = 1);
    static SignalDensity uniform(double halfwidth = 1.0, int dimension = 1);
    static SignalDensity triangular(double halfwidth = 1.0, int dimension = 1);
    /// Density proportional to exp(1/epsilon) on |x| < epsilon and exp(1/|x|) on [epsilon, 1].
    static SignalDensity truncated_exp_inverse(double epsilon, int dimension = 1);
    /// Monotone cubic interpolation of phi on a grid covering [0, hull] (negative nodes must mirror
    /// positive ones). The profile is rescaled to unit mass.
    static SignalDensity tabulated(std::vector<double> x, std::vector<double> phi, int dimension = 1);
    /// Two-column CSV (x, phi), optional header row.
    static SignalDensity tabulated_csv(const std::filesystem::path& path, int dimension = 1);

    [[nodiscard]] Family family() const noexcept;
    [[nodiscard]] int dimension() const noexcept { return dimension_; }
    /// Volume of the unit n-ball.
    [[nodiscard]] double volume_coefficient() const noexcept { return volume_coefficient_; }
    /// Infinity for unbounded families.
    [[nodiscard]] double support_halfwidth() const noexcept;
    [[nodiscard]] bool compact() const noexcept;
    /// Radius beyond which the probability mass is below 1e-12 (the support edge when compact).
    [[nodiscard]] double truncation_radius() const noexcept { return truncation_radius_; }
    /// Natural length scale: the halfwidth for compact families, 1 otherwise.
    [[nodiscard]] double scale() const noexcept;
    /// Points in (0, support] where the derivative jumps.
    [[nodiscard]] std::span<const double> kinks() const noexcept;
    [[nodiscard]] bool piecewise_differentiable() const noexcept { return !kinks().empty(); }
    /// Family parameters, including derived constants such as the normalizer k.
    [[nodiscard]] std::map<std::string, double> parameters() const;

    [[nodiscard]] double pdf(double x) const;
    [[nodiscard]] double dpdf(double x) const;
    [[nodiscard]] double cdf(double x) const;
    [[nodiscard]] DensityPoint evaluate(double x) const;
    /// P(X <= x) for any real x (0 or 1 outside the support). Unlike `cdf` it never throws,
    /// so integrators can use it on tabulated families.
    [[nodiscard]] double probability_below(double x) const;
    /// phi'/phi at x, taking right limits at kinks; -infinity where phi vanishes.
    [[nodiscard]] double log_slope(double x) const;

    /// Probability that the noise norm is at most r (2*cdf(r)-1 in one dimension).
    [[nodiscard]] double central_mass(double r) const;
    /// 1 - central_mass(r), computed without cancellation where the family allows.
    [[nodiscard]] double tail_mass(double r) const;
    /// Probability that the noise norm lies in (r0, r1]; accurate even when r1 - r0 is tiny.
    [[nodiscard]] double mass_between(double r0, double r1) const;

    /// lambda^n * phi(lambda * |x - theta|). Throws DomainError unless lambda > 0.
    [[nodiscard]] double scaled_pdf(double x, double theta, double lambda) const;

private:
    SignalDensity(std::shared_ptr<const detail::Profile> profile, int dimension);

    [[nodiscard]] double radial_density(double r) const;
    [[nodiscard]] double radial_mass(double r0, double r1) const;

    std::shared_ptr<const detail::Profile> profile_;
    std::vector<double> kinks_;
    int dimension_ = 1;
    double volume_coefficient_ = 2.0;
    double radial_constant_ = 1.0;
    double truncation_radius_ = 0.0;
    double integration_limit_ = 0.0;
};

}  // namespace infocontract
