#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace infocontract::numeric {

[[nodiscard]] std::vector<double> log_space(double lo, double hi, std::size_t count);
[[nodiscard]] std::vector<double> lin_space(double lo, double hi, std::size_t count);

struct Extremum {
    double x;
    double value;
};

/// Local maximum of `f` on [lo, hi] by Brent's method (golden section with parabolic steps).
[[nodiscard]] Extremum maximize_on(const std::function<double(double)>& f, double lo, double hi);

struct PeakSearch {
    /// Maximizers within this tolerance tie; the largest x wins.
    double tie_tol = 1e-9;
    /// Grid peaks within this much of the best grid value are refined.
    double peak_slack = 1e-3;
    std::size_t max_peaks = 8;
};

/// Largest global maximizer of f on an increasing grid, where gain - loss holds samples of f
/// (gain may be a lower bound). Each grid peak near the top is refined by Brent on its two
/// neighbouring cells.
[[nodiscard]] Extremum largest_maximizer(std::span<const double> grid, std::span<const double> gain,
                                         std::span<const double> loss, const std::function<double(double)>& f,
                                         const PeakSearch& options = {});

/// Leftmost point of [lo, hi] where a monotone false-to-true predicate flips, to width `tol`.
/// Returns the true side of the final bracket. `pred(hi)` must hold.
[[nodiscard]] double first_true(const std::function<bool(double)>& pred, double lo, double hi,
                                double tol);

/// Adaptive Gauss-Kronrod integral of a smooth integrand on a finite interval.
[[nodiscard]] double integrate(const std::function<double(double)>& f, double a, double b,
                               double rel_tol = 1e-12);

/// Integral over [a, b] split at the given breakpoints so each panel is smooth.
[[nodiscard]] double integrate_piecewise(const std::function<double(double)>& f, double a, double b,
                                         const std::vector<double>& breaks, double rel_tol = 1e-12);

/// Runs body(i) for i in [0, count) on up to `threads` workers in contiguous blocks.
/// Results must be written by index so output does not depend on the thread count.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body);

}  // namespace infocontract::numeric
