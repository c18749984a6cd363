#include <algorithm>
#include <limits>

#include "infocontract/kernels.hpp"

namespace infocontract::kernels::detail {
namespace {

double dot_scalar(const double* a, const double* b, std::size_t n) {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sum += a[i] * b[i];
    }
    return sum;
}

void matvec_scalar(const double* m, std::size_t rows, std::size_t cols, const double* x,
                   double* out) {
    for (std::size_t r = 0; r < rows; ++r) {
        out[r] = dot_scalar(m + r * cols, x, cols);
    }
}

void correlate_scalar(const double* w, std::size_t nw, const double* table, double* out,
                      std::size_t nout) {
    for (std::size_t m = 0; m < nout; ++m) {
        out[m] = dot_scalar(w, table + m, nw);
    }
}

double max_difference_scalar(const double* gain, const double* loss, std::size_t n) {
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        best = std::max(best, gain[i] - loss[i]);
    }
    return best;
}

}  // namespace

const Table& scalar_table() noexcept {
    static const Table table{dot_scalar, matvec_scalar, correlate_scalar, max_difference_scalar};
    return table;
}

}  // namespace infocontract::kernels::detail
