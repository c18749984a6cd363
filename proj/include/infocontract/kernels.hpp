#pragma once

// Data-parallel inner loops with a scalar reference and an AVX2/FMA variant.
// The variant is picked once from CPU features; tests can pin either one.

#include <cstddef>
#include <span>
#include <string_view>

namespace infocontract::kernels {

enum class Backend { scalar, avx2 };

struct ArgMax {
    double value;
    std::size_t index;
};

[[nodiscard]] bool avx2_available() noexcept;
[[nodiscard]] Backend active_backend() noexcept;
[[nodiscard]] std::string_view backend_name(Backend backend) noexcept;

/// Throws DomainError when the requested backend is not supported by this CPU.
void set_backend(Backend backend);

/// Pins a backend for the lifetime of the guard.
class BackendGuard {
public:
    explicit BackendGuard(Backend backend);
    ~BackendGuard();
    BackendGuard(const BackendGuard&) = delete;
    BackendGuard& operator=(const BackendGuard&) = delete;

private:
    Backend previous_;
};

[[nodiscard]] double dot(std::span<const double> a, std::span<const double> b);

/// out = matrix * x for a row-major matrix with x.size() columns.
void matvec(std::span<const double> matrix, std::span<const double> x, std::span<double> out);

/// Sliding correlation out[m] = sum_j weights[j] * table[m + j] for m in [0, out.size()).
/// Returns the maximum and its first index. table.size() must be >= out.size() + weights.size() - 1.
ArgMax correlate_max(std::span<const double> weights, std::span<const double> table,
                     std::span<double> out);

/// Maximum of gain[k] - loss[k], reported with the largest k whose difference is within `tol` of it.
[[nodiscard]] ArgMax argmax_difference_last(std::span<const double> gain,
                                            std::span<const double> loss, double tol);

namespace detail {

struct Table {
    double (*dot)(const double*, const double*, std::size_t);
    void (*matvec)(const double*, std::size_t, std::size_t, const double*, double*);
    void (*correlate)(const double*, std::size_t, const double*, double*, std::size_t);
    double (*max_difference)(const double*, const double*, std::size_t);
};

const Table& scalar_table() noexcept;
const Table* avx2_table() noexcept;

}  // namespace detail
}  // namespace infocontract::kernels
