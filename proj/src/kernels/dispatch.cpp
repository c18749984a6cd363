#include <atomic>
#include <cstdlib>
#include <string_view>

#include "infocontract/error.hpp"
#include "infocontract/kernels.hpp"

namespace infocontract::kernels {
namespace {

Backend initial_backend() noexcept {
    if (const char* forced = std::getenv("INFOCONTRACT_KERNELS");
        forced != nullptr && std::string_view(forced) == "scalar") {
        return Backend::scalar;
    }
    return detail::avx2_table() != nullptr ? Backend::avx2 : Backend::scalar;
}

std::atomic<Backend>& current() noexcept {
    static std::atomic<Backend> backend{initial_backend()};
    return backend;
}

const detail::Table& table() noexcept {
    return current().load(std::memory_order_relaxed) == Backend::avx2 ? *detail::avx2_table()
                                                                      : detail::scalar_table();
}

void require_same_size(std::size_t a, std::size_t b, const char* what) {
    if (a != b) {
        throw DomainError(std::string(what) + ": size mismatch");
    }
}

}  // namespace

bool avx2_available() noexcept { return detail::avx2_table() != nullptr; }

Backend active_backend() noexcept { return current().load(std::memory_order_relaxed); }

std::string_view backend_name(Backend backend) noexcept {
    return backend == Backend::avx2 ? "avx2" : "scalar";
}

void set_backend(Backend backend) {
    if (backend == Backend::avx2 && !avx2_available()) {
        throw DomainError("AVX2 kernels are not supported on this CPU");
    }
    current().store(backend, std::memory_order_relaxed);
}

BackendGuard::BackendGuard(Backend backend) : previous_(active_backend()) { set_backend(backend); }

BackendGuard::~BackendGuard() { current().store(previous_, std::memory_order_relaxed); }

double dot(std::span<const double> a, std::span<const double> b) {
    require_same_size(a.size(), b.size(), "dot");
    return table().dot(a.data(), b.data(), a.size());
}

void matvec(std::span<const double> matrix, std::span<const double> x, std::span<double> out) {
    require_same_size(matrix.size(), x.size() * out.size(), "matvec");
    table().matvec(matrix.data(), out.size(), x.size(), x.data(), out.data());
}

ArgMax correlate_max(std::span<const double> weights, std::span<const double> table_values,
                     std::span<double> out) {
    if (out.empty() || weights.empty() || table_values.size() + 1 < out.size() + weights.size()) {
        throw DomainError("correlate_max: table too short for the requested offsets");
    }
    table().correlate(weights.data(), weights.size(), table_values.data(), out.data(), out.size());
    ArgMax best{out[0], 0};
    for (std::size_t m = 1; m < out.size(); ++m) {
        if (out[m] > best.value) {
            best = {out[m], m};
        }
    }
    return best;
}

ArgMax argmax_difference_last(std::span<const double> gain, std::span<const double> loss,
                              double tol) {
    require_same_size(gain.size(), loss.size(), "argmax_difference_last");
    if (gain.empty()) {
        throw DomainError("argmax_difference_last: empty input");
    }
    const double best = table().max_difference(gain.data(), loss.data(), gain.size());
    std::size_t k = gain.size();
    while (k-- > 0) {
        if (gain[k] - loss[k] >= best - tol) {
            return {best, k};
        }
    }
    return {best, 0};
}

}  // namespace infocontract::kernels
