#pragma once

#include <optional>
#include <vector>

namespace infocontract {

/// A transfer rule t(x) in [0, 1] of the report error x = report - state.
///
/// Represented as a step function: values[i] on [edges[i], edges[i+1]) and zero outside
/// [edges.front(), edges.back()). A cutoff pays 1 on |x| <= d. The rule is immutable;
/// transformations return new transfers.
class Transfer {
public:
    static Transfer cutoff(double d);
    static Transfer steps(std::vector<double> edges, std::vector<double> values);
    /// Symmetric step function: values[i] on radii[i] <= |x| < radii[i+1], radii[0] = 0.
    static Transfer symmetric(std::vector<double> radii, std::vector<double> values);
    /// Symmetric step function on `values.size()` equal cells covering [0, reach).
    static Transfer symmetric_cells(double reach, const std::vector<double>& values);
    /// Full-line step function on `values.size()` equal cells covering [left, left + count*width).
    static Transfer uniform_cells(double left, double width, std::vector<double> values);

    [[nodiscard]] bool is_cutoff() const noexcept { return cutoff_.has_value(); }
    /// Throws DomainError unless this is a cutoff.
    [[nodiscard]] double cutoff_radius() const;

    [[nodiscard]] const std::vector<double>& edges() const noexcept { return edges_; }
    [[nodiscard]] const std::vector<double>& values() const noexcept { return values_; }
    /// Jump sizes at each edge: value just left of the edge minus value just right of it.
    [[nodiscard]] std::vector<double> jumps() const;

    [[nodiscard]] double operator()(double x) const;
    [[nodiscard]] bool is_zero() const noexcept { return edges_.empty(); }
    /// Largest |edge|; 0 for the zero transfer.
    [[nodiscard]] double reach() const noexcept;
    [[nodiscard]] double min_cell_width() const noexcept;
    [[nodiscard]] bool is_symmetric(double tol = 1e-12) const;
    /// Common cell width when all edges are equally spaced.
    [[nodiscard]] std::optional<double> lattice_width(double rel_tol = 1e-9) const;

    /// x -> t(x - shift)
    [[nodiscard]] Transfer shifted(double shift) const;
    /// x -> (t(x) + t(-x)) / 2
    [[nodiscard]] Transfer symmetrized() const;
    /// Sets the value to 1 on |x| < radius and keeps it elsewhere.
    [[nodiscard]] Transfer saturated_within(double radius) const;

private:
    Transfer() = default;
    /// Builds the step function whose value on each gap between sorted breakpoints is f(midpoint).
    template <class F>
    static Transfer from_breakpoints(std::vector<double> breakpoints, F&& f);
    void normalize();

    std::vector<double> edges_;
    std::vector<double> values_;
    std::optional<double> cutoff_;
};

}  // namespace infocontract
