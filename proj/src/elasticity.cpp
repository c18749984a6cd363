#include "infocontract/elasticity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "infocontract/error.hpp"
#include "infocontract/numeric.hpp"

namespace infocontract {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

ElasticityAnalyzer::ElasticityAnalyzer(SignalDensity density, ElasticityScanOptions options)
    : density_(std::move(density)), options_(options) {
    const double upper = density_.compact() ? density_.support_halfwidth() * (1.0 + 1e-3)
                                            : density_.truncation_radius();
    xs_ = numeric::log_space(options_.lower_fraction * density_.scale(), upper, options_.points);
    etas_.resize(xs_.size());
    std::transform(xs_.begin(), xs_.end(), etas_.begin(), [this](double x) { return eta(x); });
}

double elasticity(const SignalDensity& density, double x) {
    if (!(x > 0.0)) {
        throw DomainError("elasticity is defined for x > 0");
    }
    if (x > density.support_halfwidth() || density.pdf(x) <= 0.0) {
        return kInf;
    }
    return -x * density.log_slope(x);
}

double ElasticityAnalyzer::eta(double x) const { return elasticity(density_, x); }

EtaThreshold ElasticityAnalyzer::eta_inverse(double n) const {
    const auto it = std::find_if(etas_.begin(), etas_.end(), [n](double e) { return e > n; });
    if (it == etas_.end()) {
        return {xs_.back(), true};
    }
    const auto i = static_cast<std::size_t>(it - etas_.begin());
    const double lo = i == 0 ? 0.0 : xs_[i - 1];
    const double x = numeric::first_true([&](double v) { return v > 0.0 && eta(v) > n; }, lo, xs_[i],
                                         options_.bisection_tol);
    return {x, false};
}

double ElasticityAnalyzer::crossing_point(double n) const {
    std::size_t last_low = etas_.size();
    for (std::size_t i = etas_.size(); i-- > 0;) {
        if (etas_[i] <= n) {
            last_low = i;
            break;
        }
    }
    if (last_low == etas_.size()) {
        return eta_inverse(n).value;
    }
    if (last_low + 1 == etas_.size()) {
        return xs_.back();
    }
    return numeric::first_true([&](double v) { return eta(v) > n; }, xs_[last_low],
                               xs_[last_low + 1], options_.bisection_tol);
}

IeaCheck ElasticityAnalyzer::check_iea(double n) const {
    const std::size_t count = etas_.size();
    std::vector<std::size_t> suffix_argmin(count);
    suffix_argmin[count - 1] = count - 1;
    for (std::size_t i = count - 1; i-- > 0;) {
        const std::size_t next = suffix_argmin[i + 1];
        suffix_argmin[i] = etas_[i] < etas_[next] ? i : next;
    }
    for (std::size_t i = 0; i + 1 < count; ++i) {
        if (!(etas_[i] > n)) {
            continue;
        }
        const std::size_t j = suffix_argmin[i + 1];
        if (etas_[j] < etas_[i] - options_.monotonicity_tol) {
            return {false, std::make_pair(xs_[i], xs_[j])};
        }
    }
    return {true, std::nullopt};
}

bool ElasticityAnalyzer::check_global_mlrp() const {
    for (std::size_t i = 0; i + 1 < etas_.size(); ++i) {
        if (etas_[i + 1] < etas_[i] - options_.monotonicity_tol) {
            return false;
        }
    }
    return true;
}

bool ElasticityAnalyzer::check_strong_unimodality() const {
    double previous = 0.0;
    for (double x : xs_) {
        if (x > density_.support_halfwidth()) {
            break;
        }
        const double slope = density_.log_slope(x);
        if (slope > previous + options_.monotonicity_tol) {
            return false;
        }
        previous = slope;
    }
    return true;
}

ElasticityProfile ElasticityAnalyzer::profile(double n) const {
    const EtaThreshold threshold = eta_inverse(n);
    const IeaCheck iea = check_iea(n);
    const bool mlrp = check_global_mlrp();
    auto eta_fn = [density = density_](double x) { return elasticity(density, x); };
    return {n,
            eta_fn,
            threshold.value,
            threshold.overflow,
            crossing_point(n),
            iea.holds,
            iea.witness,
            mlrp,
            check_strong_unimodality()};
}

}  // namespace infocontract
