#include "infocontract/kernels.hpp"

#if defined(__x86_64__) || defined(__i386__)
#include <immintrin.h>

#include <limits>

namespace infocontract::kernels::detail {
namespace {

#define IC_AVX2 __attribute__((target("avx2,fma")))

IC_AVX2 double horizontal_sum(__m256d v) {
    const __m128d low = _mm256_castpd256_pd128(v);
    const __m128d high = _mm256_extractf128_pd(v, 1);
    const __m128d pair = _mm_add_pd(low, high);
    return _mm_cvtsd_f64(_mm_add_sd(pair, _mm_unpackhi_pd(pair, pair)));
}

IC_AVX2 double dot_avx2(const double* a, const double* b, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
        acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
    }
    if (i + 4 <= n) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
        i += 4;
    }
    double sum = horizontal_sum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) {
        sum += a[i] * b[i];
    }
    return sum;
}

IC_AVX2 void matvec_avx2(const double* m, std::size_t rows, std::size_t cols, const double* x,
                         double* out) {
    for (std::size_t r = 0; r < rows; ++r) {
        out[r] = dot_avx2(m + r * cols, x, cols);
    }
}

// Four output offsets per register: broadcast one weight, slide an unaligned table load.
IC_AVX2 void correlate_avx2(const double* w, std::size_t nw, const double* table, double* out,
                            std::size_t nout) {
    std::size_t m = 0;
    for (; m + 8 <= nout; m += 8) {
        __m256d acc0 = _mm256_setzero_pd();
        __m256d acc1 = _mm256_setzero_pd();
        for (std::size_t j = 0; j < nw; ++j) {
            const __m256d wj = _mm256_broadcast_sd(w + j);
            acc0 = _mm256_fmadd_pd(wj, _mm256_loadu_pd(table + m + j), acc0);
            acc1 = _mm256_fmadd_pd(wj, _mm256_loadu_pd(table + m + j + 4), acc1);
        }
        _mm256_storeu_pd(out + m, acc0);
        _mm256_storeu_pd(out + m + 4, acc1);
    }
    for (; m + 4 <= nout; m += 4) {
        __m256d acc = _mm256_setzero_pd();
        for (std::size_t j = 0; j < nw; ++j) {
            acc = _mm256_fmadd_pd(_mm256_broadcast_sd(w + j), _mm256_loadu_pd(table + m + j), acc);
        }
        _mm256_storeu_pd(out + m, acc);
    }
    for (; m < nout; ++m) {
        out[m] = dot_avx2(w, table + m, nw);
    }
}

IC_AVX2 double max_difference_avx2(const double* gain, const double* loss, std::size_t n) {
    __m256d best = _mm256_set1_pd(-std::numeric_limits<double>::infinity());
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        best = _mm256_max_pd(best, _mm256_sub_pd(_mm256_loadu_pd(gain + i), _mm256_loadu_pd(loss + i)));
    }
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, best);
    double result = lanes[0];
    for (int k = 1; k < 4; ++k) {
        result = lanes[k] > result ? lanes[k] : result;
    }
    for (; i < n; ++i) {
        const double v = gain[i] - loss[i];
        result = v > result ? v : result;
    }
    return result;
}

#undef IC_AVX2

}  // namespace

const Table* avx2_table() noexcept {
    static const Table table{dot_avx2, matvec_avx2, correlate_avx2, max_difference_avx2};
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma") ? &table : nullptr;
}

}  // namespace infocontract::kernels::detail

#else

namespace infocontract::kernels::detail {
const Table* avx2_table() noexcept { return nullptr; }
}  // namespace infocontract::kernels::detail

#endif
