#include "infocontract/transfer.hpp"

#include <algorithm>
#include <cmath>

#include "infocontract/error.hpp"

namespace infocontract {

namespace {

void require_unit_interval(const std::vector<double>& values) {
    for (double v : values) {
        if (!(v >= 0.0 && v <= 1.0)) {
            throw DomainError("transfer values must lie in [0, 1]");
        }
    }
}

}  // namespace

Transfer Transfer::cutoff(double d) {
    if (!(d >= 0.0) || !std::isfinite(d)) {
        throw DomainError("cutoff radius must be finite and nonnegative");
    }
    Transfer t;
    t.cutoff_ = d;
    if (d > 0.0) {
        t.edges_ = {-d, d};
        t.values_ = {1.0};
    }
    return t;
}

Transfer Transfer::steps(std::vector<double> edges, std::vector<double> values) {
    if (edges.size() != values.size() + 1 && !(edges.empty() && values.empty())) {
        throw DomainError("a step transfer needs one more edge than values");
    }
    for (std::size_t i = 0; i < edges.size(); ++i) {
        if (!std::isfinite(edges[i]) || (i > 0 && !(edges[i] > edges[i - 1]))) {
            throw DomainError("transfer edges must be finite and strictly increasing");
        }
    }
    require_unit_interval(values);
    Transfer t;
    t.edges_ = std::move(edges);
    t.values_ = std::move(values);
    t.normalize();
    return t;
}

Transfer Transfer::symmetric(std::vector<double> radii, std::vector<double> values) {
    if (radii.size() != values.size() + 1 || radii.empty() || radii.front() != 0.0) {
        throw DomainError("a symmetric transfer needs radii starting at 0 and one more radius than values");
    }
    const std::size_t k = values.size();
    std::vector<double> edges(2 * k + 1);
    std::vector<double> full(2 * k);
    for (std::size_t i = 0; i <= k; ++i) {
        edges[k + i] = radii[i];
        edges[k - i] = -radii[i];
    }
    for (std::size_t i = 0; i < k; ++i) {
        full[k + i] = values[i];
        full[k - 1 - i] = values[i];
    }
    return steps(std::move(edges), std::move(full));
}

Transfer Transfer::symmetric_cells(double reach, const std::vector<double>& values) {
    if (!(reach > 0.0) || values.empty()) {
        throw DomainError("symmetric cells need a positive reach and at least one value");
    }
    std::vector<double> radii(values.size() + 1);
    for (std::size_t i = 0; i < radii.size(); ++i) {
        radii[i] = reach * static_cast<double>(i) / static_cast<double>(values.size());
    }
    return symmetric(std::move(radii), values);
}

Transfer Transfer::uniform_cells(double left, double width, std::vector<double> values) {
    if (!(width > 0.0) || values.empty()) {
        throw DomainError("uniform cells need a positive width and at least one value");
    }
    std::vector<double> edges(values.size() + 1);
    for (std::size_t i = 0; i < edges.size(); ++i) {
        edges[i] = left + width * static_cast<double>(i);
    }
    return steps(std::move(edges), std::move(values));
}

void Transfer::normalize() {
    // Trim zero cells at both ends so the reach reflects where the transfer pays.
    std::size_t first = 0;
    while (first < values_.size() && values_[first] == 0.0) {
        ++first;
    }
    std::size_t last = values_.size();
    while (last > first && values_[last - 1] == 0.0) {
        --last;
    }
    if (first == last) {
        edges_.clear();
        values_.clear();
    } else {
        values_ = std::vector<double>(values_.begin() + static_cast<std::ptrdiff_t>(first),
                                      values_.begin() + static_cast<std::ptrdiff_t>(last));
        edges_ = std::vector<double>(edges_.begin() + static_cast<std::ptrdiff_t>(first),
                                     edges_.begin() + static_cast<std::ptrdiff_t>(last + 1));
    }
    cutoff_.reset();
    if (values_.empty()) {
        cutoff_ = 0.0;
    } else if (edges_.front() == -edges_.back() &&
               std::all_of(values_.begin(), values_.end(), [](double v) { return v == 1.0; })) {
        cutoff_ = edges_.back();
    }
}

double Transfer::cutoff_radius() const {
    if (!cutoff_) {
        throw DomainError("transfer is not a cutoff");
    }
    return *cutoff_;
}

std::vector<double> Transfer::jumps() const {
    std::vector<double> out(edges_.size());
    for (std::size_t j = 0; j < edges_.size(); ++j) {
        const double left = j == 0 ? 0.0 : values_[j - 1];
        const double right = j == values_.size() ? 0.0 : values_[j];
        out[j] = left - right;
    }
    return out;
}

double Transfer::operator()(double x) const {
    if (edges_.empty() || x < edges_.front() || x >= edges_.back()) {
        return 0.0;
    }
    const auto it = std::upper_bound(edges_.begin(), edges_.end(), x);
    return values_[static_cast<std::size_t>(it - edges_.begin()) - 1];
}

double Transfer::reach() const noexcept {
    return edges_.empty() ? 0.0 : std::max(-edges_.front(), edges_.back());
}

double Transfer::min_cell_width() const noexcept {
    double width = edges_.empty() ? 0.0 : edges_.back() - edges_.front();
    for (std::size_t i = 0; i + 1 < edges_.size(); ++i) {
        width = std::min(width, edges_[i + 1] - edges_[i]);
    }
    return width;
}

bool Transfer::is_symmetric(double tol) const {
    const std::size_t n = edges_.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (std::abs(edges_[i] + edges_[n - 1 - i]) > tol) {
            return false;
        }
    }
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (std::abs(values_[i] - values_[values_.size() - 1 - i]) > tol) {
            return false;
        }
    }
    return true;
}

std::optional<double> Transfer::lattice_width(double rel_tol) const {
    if (edges_.size() < 2) {
        return std::nullopt;
    }
    const double width = (edges_.back() - edges_.front()) / static_cast<double>(edges_.size() - 1);
    for (std::size_t i = 0; i + 1 < edges_.size(); ++i) {
        if (std::abs(edges_[i + 1] - edges_[i] - width) > rel_tol * width) {
            return std::nullopt;
        }
    }
    return width;
}

template <class F>
Transfer Transfer::from_breakpoints(std::vector<double> breakpoints, F&& f) {
    std::sort(breakpoints.begin(), breakpoints.end());
    const double span = breakpoints.empty() ? 0.0 : breakpoints.back() - breakpoints.front();
    const double merge_tol = 1e-13 * std::max(span, 1.0);
    std::vector<double> edges;
    for (double b : breakpoints) {
        if (edges.empty() || b - edges.back() > merge_tol) {
            edges.push_back(b);
        }
    }
    if (edges.size() < 2) {
        return steps({}, {});
    }
    std::vector<double> values(edges.size() - 1);
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        values[i] = std::clamp(f(0.5 * (edges[i] + edges[i + 1])), 0.0, 1.0);
    }
    // Merge neighbours with equal values.
    std::vector<double> merged_edges{edges.front()};
    std::vector<double> merged_values;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!merged_values.empty() && merged_values.back() == values[i]) {
            merged_edges.back() = edges[i + 1];
        } else {
            merged_values.push_back(values[i]);
            merged_edges.push_back(edges[i + 1]);
        }
    }
    return steps(std::move(merged_edges), std::move(merged_values));
}

Transfer Transfer::shifted(double shift) const {
    if (is_cutoff() && shift == 0.0) {
        return *this;
    }
    Transfer t = *this;
    for (double& e : t.edges_) {
        e += shift;
    }
    t.normalize();
    return t;
}

Transfer Transfer::symmetrized() const {
    std::vector<double> points = edges_;
    for (double e : edges_) {
        points.push_back(-e);
    }
    return from_breakpoints(std::move(points),
                            [this](double x) { return 0.5 * ((*this)(x) + (*this)(-x)); });
}

Transfer Transfer::saturated_within(double radius) const {
    if (!(radius >= 0.0)) {
        throw DomainError("saturation radius must be nonnegative");
    }
    if (radius == 0.0) {
        return *this;
    }
    std::vector<double> points = edges_;
    points.push_back(-radius);
    points.push_back(radius);
    return from_breakpoints(std::move(points), [this, radius](double x) {
        return std::abs(x) < radius ? 1.0 : (*this)(x);
    });
}

}  // namespace infocontract
