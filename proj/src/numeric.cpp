#include "infocontract/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <thread>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/minima.hpp>

#include "infocontract/error.hpp"
#include "infocontract/kernels.hpp"

namespace infocontract::numeric {

std::vector<double> log_space(double lo, double hi, std::size_t count) {
    if (!(lo > 0.0) || !(hi > lo) || count < 2) {
        throw DomainError("log_space needs 0 < lo < hi and at least two points");
    }
    std::vector<double> out(count);
    const double step = std::log(hi / lo) / static_cast<double>(count - 1);
    for (std::size_t i = 0; i < count; ++i) {
        out[i] = lo * std::exp(step * static_cast<double>(i));
    }
    out.back() = hi;
    return out;
}

std::vector<double> lin_space(double lo, double hi, std::size_t count) {
    if (!(hi >= lo) || count < 2) {
        throw DomainError("lin_space needs lo <= hi and at least two points");
    }
    std::vector<double> out(count);
    const double step = (hi - lo) / static_cast<double>(count - 1);
    for (std::size_t i = 0; i < count; ++i) {
        out[i] = lo + step * static_cast<double>(i);
    }
    out.back() = hi;
    return out;
}

Extremum maximize_on(const std::function<double(double)>& f, double lo, double hi) {
    if (!(hi > lo)) {
        return {lo, f(lo)};
    }
    std::uintmax_t iterations = 200;
    const auto [x, neg] = boost::math::tools::brent_find_minima(
        [&](double v) { return -f(v); }, lo, hi, std::numeric_limits<double>::digits, iterations);
    return {x, -neg};
}

Extremum largest_maximizer(std::span<const double> grid, std::span<const double> gain,
                           std::span<const double> loss, const std::function<double(double)>& f,
                           const PeakSearch& options) {
    const std::size_t n = grid.size();
    if (n == 0 || gain.size() != n || loss.size() != n) {
        throw std::invalid_argument("largest_maximizer needs matching nonempty grids");
    }
    const double grid_best = kernels::argmax_difference_last(gain, loss, 0.0).value;
    auto sample = [&](std::size_t k) { return gain[k] - loss[k]; };

    std::vector<std::size_t> peaks;
    for (std::size_t k = 0; k < n; ++k) {
        const double p = sample(k);
        const bool rises_into = k == 0 || p >= sample(k - 1);
        const bool falls_after = k + 1 == n || p > sample(k + 1);
        if (rises_into && falls_after && p >= grid_best - options.peak_slack) {
            peaks.push_back(k);
        }
    }
    std::stable_sort(peaks.begin(), peaks.end(), [&](std::size_t a, std::size_t b) { return sample(a) > sample(b); });
    if (peaks.size() > options.max_peaks) {
        peaks.resize(options.max_peaks);
    }

    std::vector<Extremum> candidates;
    for (std::size_t k : peaks) {
        Extremum c{grid[k], f(grid[k])};
        const double lo = grid[k == 0 ? 0 : k - 1];
        const double hi = grid[k + 1 == n ? n - 1 : k + 1];
        if (lo < hi) {
            const Extremum refined = maximize_on(f, lo, hi);
            if (refined.value > c.value + options.tie_tol ||
                (refined.value >= c.value - options.tie_tol && refined.x > c.x)) {
                c = refined;
            }
        }
        candidates.push_back(c);
    }

    double best = candidates.front().value;
    for (const auto& c : candidates) {
        best = std::max(best, c.value);
    }
    Extremum chosen{-std::numeric_limits<double>::infinity(), best};
    for (const auto& c : candidates) {
        if (c.value >= best - options.tie_tol && c.x > chosen.x) {
            chosen = c;
        }
    }
    return chosen;
}

double first_true(const std::function<bool(double)>& pred, double lo, double hi, double tol) {
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) {
            break;
        }
        (pred(mid) ? hi : lo) = mid;
    }
    return hi;
}

double integrate(const std::function<double(double)>& f, double a, double b, double rel_tol) {
    if (b <= a) {
        return 0.0;
    }
    double error = 0.0;
    return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 12, rel_tol,
                                                                          &error);
}

double integrate_piecewise(const std::function<double(double)>& f, double a, double b,
                           const std::vector<double>& breaks, double rel_tol) {
    std::vector<double> nodes{a};
    for (double x : breaks) {
        if (x > a && x < b) {
            nodes.push_back(x);
        }
    }
    nodes.push_back(b);
    std::sort(nodes.begin(), nodes.end());
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
        total += integrate(f, nodes[i], nodes[i + 1], rel_tol);
    }
    return total;
}

void parallel_for(std::size_t count, unsigned threads,
                  const std::function<void(std::size_t)>& body) {
    const std::size_t workers = std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(count, 1));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) {
            body(i);
        }
        return;
    }
    std::exception_ptr failure;
    std::mutex failure_mutex;
    {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        const std::size_t block = (count + workers - 1) / workers;
        for (std::size_t w = 0; w < workers; ++w) {
            const std::size_t begin = w * block;
            const std::size_t end = std::min(count, begin + block);
            pool.emplace_back([&, begin, end] {
                try {
                    for (std::size_t i = begin; i < end; ++i) {
                        body(i);
                    }
                } catch (...) {
                    const std::lock_guard lock(failure_mutex);
                    if (!failure) {
                        failure = std::current_exception();
                    }
                }
            });
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
}

}  // namespace infocontract::numeric
