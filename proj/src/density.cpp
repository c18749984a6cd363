#include "infocontract/density.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

#include <boost/math/special_functions/gamma.hpp>

#include "infocontract/error.hpp"
#include "infocontract/numeric.hpp"

namespace infocontract {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTailMass = 1e-12;
}  // namespace

namespace detail {

// One-dimensional standardized profile evaluated at u >= 0.
class Profile {
public:
    virtual ~Profile() = default;
    [[nodiscard]] virtual Family family() const = 0;
    [[nodiscard]] virtual double halfwidth() const { return kInf; }
    [[nodiscard]] virtual double shape(double u) const = 0;
    // phi'/phi inside the support. `from_left` selects the left limit at kinks.
    [[nodiscard]] virtual double log_slope(double u, bool from_left) const = 0;
    [[nodiscard]] virtual double central_mass(double r) const = 0;
    [[nodiscard]] virtual double tail_mass(double r) const { return 1.0 - central_mass(r); }
    [[nodiscard]] virtual std::vector<double> kinks() const { return {}; }
    [[nodiscard]] virtual std::map<std::string, double> parameters() const { return {}; }
    [[nodiscard]] virtual bool rejects_outside_hull() const { return false; }

    [[nodiscard]] bool inside(double u) const { return u <= halfwidth(); }
};

namespace {

class Gaussian final : public Profile {
public:
    Family family() const override { return Family::gaussian; }
    double shape(double u) const override {
        return std::exp(-0.5 * u * u) / std::sqrt(2.0 * std::numbers::pi);
    }
    double log_slope(double u, bool) const override { return -u; }
    double central_mass(double r) const override { return std::erf(r / std::numbers::sqrt2); }
    double tail_mass(double r) const override { return std::erfc(r / std::numbers::sqrt2); }
};

class Laplace final : public Profile {
public:
    Family family() const override { return Family::laplace; }
    double shape(double u) const override { return 0.5 * std::exp(-u); }
    double log_slope(double u, bool from_left) const override {
        return (u == 0.0 && from_left) ? 1.0 : -1.0;
    }
    double central_mass(double r) const override { return -std::expm1(-r); }
    double tail_mass(double r) const override { return std::exp(-r); }
    std::vector<double> kinks() const override { return {0.0}; }
};

class Logistic final : public Profile {
public:
    Family family() const override { return Family::logistic; }
    double shape(double u) const override {
        const double e = std::exp(-u);
        return e / ((1.0 + e) * (1.0 + e));
    }
    double log_slope(double u, bool) const override { return -std::tanh(0.5 * u); }
    double central_mass(double r) const override { return std::tanh(0.5 * r); }
    double tail_mass(double r) const override {
        const double e = std::exp(-r);
        return 2.0 * e / (1.0 + e);
    }
};

class Uniform final : public Profile {
public:
    explicit Uniform(double a) : a_(a) {}
    Family family() const override { return Family::uniform; }
    double halfwidth() const override { return a_; }
    double shape(double u) const override { return u <= a_ ? 0.5 / a_ : 0.0; }
    double log_slope(double, bool) const override { return 0.0; }
    double central_mass(double r) const override { return std::min(r / a_, 1.0); }
    double tail_mass(double r) const override { return std::max(1.0 - r / a_, 0.0); }
    std::vector<double> kinks() const override { return {a_}; }
    std::map<std::string, double> parameters() const override { return {{"halfwidth", a_}}; }

private:
    double a_;
};

class Triangular final : public Profile {
public:
    explicit Triangular(double a) : a_(a) {}
    Family family() const override { return Family::triangular; }
    double halfwidth() const override { return a_; }
    double shape(double u) const override { return u < a_ ? (a_ - u) / (a_ * a_) : 0.0; }
    double log_slope(double u, bool from_left) const override {
        if (u == 0.0 && from_left) {
            return 1.0 / a_;
        }
        return u < a_ ? -1.0 / (a_ - u) : -kInf;
    }
    double central_mass(double r) const override { return 1.0 - tail_mass(r); }
    double tail_mass(double r) const override {
        const double q = std::max(1.0 - r / a_, 0.0);
        return q * q;
    }
    std::vector<double> kinks() const override { return {0.0, a_}; }
    std::map<std::string, double> parameters() const override { return {{"halfwidth", a_}}; }

private:
    double a_;
};

class TruncatedExpInverse final : public Profile {
public:
    explicit TruncatedExpInverse(double epsilon) : eps_(epsilon) {
        if (!(epsilon > 0.0 && epsilon < 1.0)) {
            throw DomainError("truncated_exp_inverse needs 0 < epsilon < 1");
        }
        const double outer = numeric::integrate([](double u) { return std::exp(1.0 / u); }, eps_, 1.0);
        k_ = 1.0 / (2.0 * (eps_ * std::exp(1.0 / eps_) + outer));
    }
    Family family() const override { return Family::truncated_exp_inverse; }
    double halfwidth() const override { return 1.0; }
    double shape(double u) const override {
        if (u > 1.0) {
            return 0.0;
        }
        return k_ * std::exp(1.0 / std::max(u, eps_));
    }
    double log_slope(double u, bool from_left) const override {
        if (u < eps_ || (u == eps_ && from_left)) {
            return 0.0;
        }
        return -1.0 / (u * u);
    }
    double central_mass(double r) const override {
        if (r >= 1.0) {
            return 1.0;
        }
        double half = std::min(r, eps_) * std::exp(1.0 / eps_);
        if (r > eps_) {
            half += antiderivative(r) - antiderivative(eps_);
        }
        return std::clamp(2.0 * k_ * half, 0.0, 1.0);
    }
    std::vector<double> kinks() const override { return {eps_, 1.0}; }
    std::map<std::string, double> parameters() const override {
        return {{"epsilon", eps_}, {"k", k_}};
    }

private:
    // d/du [u e^{1/u} - Ei(1/u)] = e^{1/u}
    static double antiderivative(double u) { return u * std::exp(1.0 / u) - std::expint(1.0 / u); }

    double eps_;
    double k_ = 0.0;
};

// Monotone (Fritsch-Carlson) cubic Hermite interpolant on [0, hull] with zero slope at 0.
class Tabulated final : public Profile {
public:
    Tabulated(std::vector<double> x, std::vector<double> phi) : x_(std::move(x)), y_(std::move(phi)) {
        const std::size_t n = x_.size();
        slope_.assign(n, 0.0);
        std::vector<double> secant(n - 1);
        for (std::size_t i = 0; i + 1 < n; ++i) {
            secant[i] = (y_[i + 1] - y_[i]) / (x_[i + 1] - x_[i]);
        }
        for (std::size_t i = 1; i + 1 < n; ++i) {
            const double h0 = x_[i] - x_[i - 1];
            const double h1 = x_[i + 1] - x_[i];
            if (secant[i - 1] * secant[i] > 0.0) {
                const double w1 = 2.0 * h1 + h0;
                const double w2 = h1 + 2.0 * h0;
                slope_[i] = (w1 + w2) / (w1 / secant[i - 1] + w2 / secant[i]);
            }
        }
        slope_[n - 1] = secant[n - 2];

        cumulative_.assign(n, 0.0);
        for (std::size_t i = 0; i + 1 < n; ++i) {
            cumulative_[i + 1] = cumulative_[i] + cell_integral(i, x_[i + 1]);
        }
        const double total = 2.0 * cumulative_.back();
        if (!(total > 0.0)) {
            throw DomainError("tabulated density has zero mass");
        }
        for (std::size_t i = 0; i < n; ++i) {
            y_[i] /= total;
            slope_[i] /= total;
            cumulative_[i] /= total;
        }
    }

    Family family() const override { return Family::tabulated; }
    double halfwidth() const override { return x_.back(); }
    bool rejects_outside_hull() const override { return true; }

    double shape(double u) const override {
        if (u > x_.back()) {
            return 0.0;
        }
        const std::size_t i = cell(u);
        return hermite(i, u, false);
    }
    double log_slope(double u, bool) const override {
        const std::size_t i = cell(u);
        const double value = hermite(i, u, false);
        return value > 0.0 ? hermite(i, u, true) / value : -kInf;
    }
    double central_mass(double r) const override {
        if (r >= x_.back()) {
            return 1.0;
        }
        const std::size_t i = cell(r);
        return std::clamp(2.0 * (cumulative_[i] + cell_integral(i, r)), 0.0, 1.0);
    }
    std::map<std::string, double> parameters() const override {
        return {{"hull", x_.back()}, {"nodes", static_cast<double>(x_.size())}};
    }

private:
    std::size_t cell(double u) const {
        const auto it = std::upper_bound(x_.begin(), x_.end(), u);
        const auto idx = static_cast<std::size_t>(std::distance(x_.begin(), it));
        return std::min(idx == 0 ? 0 : idx - 1, x_.size() - 2);
    }
    double hermite(std::size_t i, double u, bool derivative) const {
        const double h = x_[i + 1] - x_[i];
        const double t = (u - x_[i]) / h;
        const double t2 = t * t;
        const double t3 = t2 * t;
        if (!derivative) {
            return (2 * t3 - 3 * t2 + 1) * y_[i] + (t3 - 2 * t2 + t) * h * slope_[i] +
                   (-2 * t3 + 3 * t2) * y_[i + 1] + (t3 - t2) * h * slope_[i + 1];
        }
        return ((6 * t2 - 6 * t) * y_[i] + (-6 * t2 + 6 * t) * y_[i + 1]) / h +
               (3 * t2 - 4 * t + 1) * slope_[i] + (3 * t2 - 2 * t) * slope_[i + 1];
    }
    // Simpson's rule is exact for the cubic piece on [x_i, r].
    double cell_integral(std::size_t i, double r) const {
        const double a = x_[i];
        return (r - a) / 6.0 *
               (hermite(i, a, false) + 4.0 * hermite(i, 0.5 * (a + r), false) + hermite(i, r, false));
    }

    std::vector<double> x_;
    std::vector<double> y_;
    std::vector<double> slope_;
    std::vector<double> cumulative_;
};

}  // namespace
}  // namespace detail

std::string_view family_name(Family family) noexcept {
    switch (family) {
        case Family::gaussian: return "gaussian";
        case Family::laplace: return "laplace";
        case Family::logistic: return "logistic";
        case Family::uniform: return "uniform";
        case Family::triangular: return "triangular";
        case Family::truncated_exp_inverse: return "truncated_exp_inverse";
        case Family::tabulated: return "tabulated";
    }
    return "unknown";
}

Family parse_family(std::string_view name) {
    for (Family f : {Family::gaussian, Family::laplace, Family::logistic, Family::uniform,
                     Family::triangular, Family::truncated_exp_inverse, Family::tabulated}) {
        if (family_name(f) == name) {
            return f;
        }
    }
    throw ConfigError("unknown density family '" + std::string(name) + "'");
}

SignalDensity::SignalDensity(std::shared_ptr<const detail::Profile> profile, int dimension)
    : profile_(std::move(profile)), kinks_(profile_->kinks()), dimension_(dimension) {
    if (dimension < 1) {
        throw DomainError("density dimension must be a positive integer");
    }
    const double n = dimension;
    volume_coefficient_ = std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n + 1.0);

    // The 1-D truncation point: where the two-sided tail drops below the threshold.
    double one_dim_cut = profile_->halfwidth();
    if (!std::isfinite(one_dim_cut)) {
        double hi = 1.0;
        while (profile_->tail_mass(hi) >= kTailMass) {
            hi *= 2.0;
        }
        one_dim_cut = numeric::first_true(
            [&](double r) { return profile_->tail_mass(r) < kTailMass; }, 0.0, hi, 1e-10);
    }
    integration_limit_ = compact() ? one_dim_cut : 2.0 * one_dim_cut;
    if (dimension_ == 1) {
        truncation_radius_ = one_dim_cut;
        return;
    }
    if (profile_->family() == Family::gaussian) {
        radial_constant_ = std::pow(2.0 * std::numbers::pi, 0.5 * (1.0 - n));
    } else {
        const double window = integration_limit_;
        const double shell = numeric::integrate_piecewise(
            [&](double r) { return profile_->shape(r) * n * volume_coefficient_ * std::pow(r, n - 1.0); },
            0.0, window, profile_->kinks());
        radial_constant_ = 1.0 / shell;
    }
    if (compact()) {
        truncation_radius_ = one_dim_cut;
    } else {
        double hi = one_dim_cut;
        while (tail_mass(hi) >= kTailMass) {
            hi *= 1.5;
        }
        truncation_radius_ =
            numeric::first_true([&](double r) { return tail_mass(r) < kTailMass; }, 0.0, hi, 1e-10);
    }
}

SignalDensity SignalDensity::gaussian(int dimension) {
    return {std::make_shared<detail::Gaussian>(), dimension};
}
SignalDensity SignalDensity::laplace(int dimension) {
    return {std::make_shared<detail::Laplace>(), dimension};
}
SignalDensity SignalDensity::logistic(int dimension) {
    return {std::make_shared<detail::Logistic>(), dimension};
}
SignalDensity SignalDensity::uniform(double halfwidth, int dimension) {
    if (!(halfwidth > 0.0 && std::isfinite(halfwidth))) {
        throw DomainError("uniform halfwidth must be positive and finite");
    }
    return {std::make_shared<detail::Uniform>(halfwidth), dimension};
}
SignalDensity SignalDensity::triangular(double halfwidth, int dimension) {
    if (!(halfwidth > 0.0 && std::isfinite(halfwidth))) {
        throw DomainError("triangular halfwidth must be positive and finite");
    }
    return {std::make_shared<detail::Triangular>(halfwidth), dimension};
}
SignalDensity SignalDensity::truncated_exp_inverse(double epsilon, int dimension) {
    return {std::make_shared<detail::TruncatedExpInverse>(epsilon), dimension};
}

SignalDensity SignalDensity::tabulated(std::vector<double> x, std::vector<double> phi, int dimension) {
    if (x.size() != phi.size() || x.size() < 2) {
        throw DomainError("tabulated density needs matching x and phi columns with at least two rows");
    }
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!std::isfinite(x[i]) || !std::isfinite(phi[i]) || phi[i] < 0.0) {
            throw DomainError("tabulated density values must be finite and nonnegative");
        }
        if (i > 0 && !(x[i] > x[i - 1])) {
            throw DomainError("tabulated density grid must be strictly increasing");
        }
    }
    std::vector<double> half_x;
    std::vector<double> half_phi;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] >= 0.0) {
            half_x.push_back(x[i]);
            half_phi.push_back(phi[i]);
        }
    }
    if (half_x.size() < 2 || half_x.front() != 0.0) {
        throw DomainError("tabulated density grid must contain x = 0 and at least one positive node");
    }
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] >= 0.0) {
            continue;
        }
        const auto it = std::lower_bound(half_x.begin(), half_x.end(), -x[i] - 1e-12);
        if (it == half_x.end() || std::abs(*it + x[i]) > 1e-12 ||
            std::abs(half_phi[static_cast<std::size_t>(it - half_x.begin())] - phi[i]) > 1e-10) {
            throw DomainError("tabulated density is not symmetric about 0");
        }
    }
    for (std::size_t i = 1; i < half_phi.size(); ++i) {
        if (half_phi[i] > half_phi[i - 1]) {
            throw DomainError("tabulated density is not single-peaked (increases away from 0)");
        }
    }
    return {std::make_shared<detail::Tabulated>(std::move(half_x), std::move(half_phi)), dimension};
}

SignalDensity SignalDensity::tabulated_csv(const std::filesystem::path& path, int dimension) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open tabulated density file " + path.string());
    }
    std::vector<double> x;
    std::vector<double> phi;
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
        x.push_back(a);
        phi.push_back(b);
    }
    return tabulated(std::move(x), std::move(phi), dimension);
}

Family SignalDensity::family() const noexcept { return profile_->family(); }
double SignalDensity::support_halfwidth() const noexcept { return profile_->halfwidth(); }
bool SignalDensity::compact() const noexcept { return std::isfinite(profile_->halfwidth()); }
double SignalDensity::scale() const noexcept { return compact() ? profile_->halfwidth() : 1.0; }

std::span<const double> SignalDensity::kinks() const noexcept { return kinks_; }

std::map<std::string, double> SignalDensity::parameters() const {
    auto out = profile_->parameters();
    out["dimension"] = dimension_;
    if (dimension_ > 1) {
        out["radial_constant"] = radial_constant_;
    }
    return out;
}

double SignalDensity::pdf(double x) const {
    const double u = std::abs(x);
    if (profile_->rejects_outside_hull() && u > profile_->halfwidth()) {
        throw ExtrapolationError("tabulated density queried outside its grid hull");
    }
    return radial_constant_ * profile_->shape(u);
}

double SignalDensity::log_slope(double x) const {
    const double u = std::abs(x);
    if (!profile_->inside(u)) {
        if (profile_->rejects_outside_hull()) {
            throw ExtrapolationError("tabulated density queried outside its grid hull");
        }
        return -kInf;
    }
    // Right limit at x < 0 is the left limit of the profile at |x|, mirrored.
    return x >= 0.0 ? profile_->log_slope(u, false) : -profile_->log_slope(u, true);
}

double SignalDensity::dpdf(double x) const {
    const double value = pdf(x);
    return value > 0.0 ? value * log_slope(x) : 0.0;
}

double SignalDensity::cdf(double x) const {
    if (profile_->rejects_outside_hull() && std::abs(x) > profile_->halfwidth()) {
        throw ExtrapolationError("tabulated density queried outside its grid hull");
    }
    return probability_below(x);
}

double SignalDensity::probability_below(double x) const {
    if (dimension_ > 1) {
        return x <= 0.0 ? 0.0 : central_mass(x);
    }
    if (profile_->family() == Family::gaussian) {
        return 0.5 * std::erfc(-x / std::numbers::sqrt2);
    }
    const double u = std::abs(x);
    const double tail = u >= profile_->halfwidth() ? 0.0 : profile_->tail_mass(u);
    return x >= 0.0 ? 1.0 - 0.5 * tail : 0.5 * tail;
}

DensityPoint SignalDensity::evaluate(double x) const { return {pdf(x), cdf(x), dpdf(x)}; }

double SignalDensity::radial_density(double r) const {
    const double n = dimension_;
    return radial_constant_ * profile_->shape(r) * n * volume_coefficient_ * std::pow(r, n - 1.0);
}

double SignalDensity::radial_mass(double r0, double r1) const {
    const double hi = std::min(r1, integration_limit_);
    if (hi <= r0) {
        return 0.0;
    }
    return numeric::integrate_piecewise([&](double r) { return radial_density(r); }, r0, hi,
                                        profile_->kinks());
}

double SignalDensity::central_mass(double r) const {
    if (r <= 0.0) {
        return 0.0;
    }
    if (dimension_ == 1) {
        return r >= profile_->halfwidth() ? 1.0 : profile_->central_mass(r);
    }
    if (profile_->family() == Family::gaussian) {
        return boost::math::gamma_p(0.5 * dimension_, 0.5 * r * r);
    }
    return std::clamp(radial_mass(0.0, r), 0.0, 1.0);
}

double SignalDensity::tail_mass(double r) const {
    if (r <= 0.0) {
        return 1.0;
    }
    if (dimension_ == 1) {
        return r >= profile_->halfwidth() ? 0.0 : profile_->tail_mass(r);
    }
    if (profile_->family() == Family::gaussian) {
        return boost::math::gamma_q(0.5 * dimension_, 0.5 * r * r);
    }
    if (compact() && r >= profile_->halfwidth()) {
        return 0.0;
    }
    return std::clamp(radial_mass(r, kInf), 0.0, 1.0);
}

double SignalDensity::mass_between(double r0, double r1) const {
    r0 = std::max(r0, 0.0);
    if (r1 <= r0) {
        return 0.0;
    }
    const bool closed_form = dimension_ == 1 || profile_->family() == Family::gaussian;
    if (!closed_form) {
        return radial_mass(r0, r1);
    }
    const double lower = central_mass(r0);
    if (lower > 0.5) {
        return tail_mass(r0) - tail_mass(r1);
    }
    return central_mass(r1) - lower;
}

double SignalDensity::scaled_pdf(double x, double theta, double lambda) const {
    if (!(lambda > 0.0)) {
        throw DomainError("scaled_pdf needs a positive precision");
    }
    return std::pow(lambda, dimension_) * pdf(lambda * (x - theta));
}

}  // namespace infocontract
