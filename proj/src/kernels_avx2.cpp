// AVX2 kernel variants. This translation unit is compiled with -mavx2; the
// dispatcher only routes here after checking CPU support at runtime.

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include <cstddef>

#include "kernels_detail.hpp"

namespace etp::kernels {

namespace {

constexpr std::size_t kWidth = 4;  // doubles per 256-bit register

double hsum(__m256d v) {
    double lanes[4];
    _mm256_storeu_pd(lanes, v);
    return (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
}

double sum_avx2(const double* a, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    const std::size_t end = (n / kWidth) * kWidth;
    for (std::size_t i = 0; i < end; i += kWidth)
        acc = _mm256_add_pd(acc, _mm256_loadu_pd(a + i));
    double r = hsum(acc);
    for (std::size_t i = end; i < n; ++i) r += a[i];
    return r;
}

double dot_avx2(const double* a, const double* b, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    const std::size_t end = (n / kWidth) * kWidth;
    for (std::size_t i = 0; i < end; i += kWidth) {
        const __m256d prod = _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
        acc = _mm256_add_pd(acc, prod);
    }
    double r = hsum(acc);
    for (std::size_t i = end; i < n; ++i) r += a[i] * b[i];
    return r;
}

double sum_sq_diff_avx2(const double* a, const double* b, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    const std::size_t end = (n / kWidth) * kWidth;
    for (std::size_t i = 0; i < end; i += kWidth) {
        const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
        acc = _mm256_add_pd(acc, _mm256_mul_pd(d, d));
    }
    double r = hsum(acc);
    for (std::size_t i = end; i < n; ++i) {
        const double d = a[i] - b[i];
        r += d * d;
    }
    return r;
}

double sum_sq_dev_avx2(const double* a, std::size_t n, double m) {
    const __m256d vm = _mm256_set1_pd(m);
    __m256d acc = _mm256_setzero_pd();
    const std::size_t end = (n / kWidth) * kWidth;
    for (std::size_t i = 0; i < end; i += kWidth) {
        const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), vm);
        acc = _mm256_add_pd(acc, _mm256_mul_pd(d, d));
    }
    double r = hsum(acc);
    for (std::size_t i = end; i < n; ++i) {
        const double d = a[i] - m;
        r += d * d;
    }
    return r;
}

double centered_dot_avx2(const double* a, const double* b, std::size_t n,
                         double ma, double mb) {
    const __m256d vma = _mm256_set1_pd(ma);
    const __m256d vmb = _mm256_set1_pd(mb);
    __m256d acc = _mm256_setzero_pd();
    const std::size_t end = (n / kWidth) * kWidth;
    for (std::size_t i = 0; i < end; i += kWidth) {
        const __m256d da = _mm256_sub_pd(_mm256_loadu_pd(a + i), vma);
        const __m256d db = _mm256_sub_pd(_mm256_loadu_pd(b + i), vmb);
        acc = _mm256_add_pd(acc, _mm256_mul_pd(da, db));
    }
    double r = hsum(acc);
    for (std::size_t i = end; i < n; ++i) r += (a[i] - ma) * (b[i] - mb);
    return r;
}

void axpy_avx2(double alpha, const double* x, double* y, std::size_t n) {
    const __m256d va = _mm256_set1_pd(alpha);
    const std::size_t end = (n / kWidth) * kWidth;
    for (std::size_t i = 0; i < end; i += kWidth) {
        const __m256d r = _mm256_add_pd(_mm256_loadu_pd(y + i),
                                        _mm256_mul_pd(va, _mm256_loadu_pd(x + i)));
        _mm256_storeu_pd(y + i, r);
    }
    for (std::size_t i = end; i < n; ++i) y[i] += alpha * x[i];
}

void sub_avx2(const double* a, const double* b, double* out, std::size_t n) {
    const std::size_t end = (n / kWidth) * kWidth;
    for (std::size_t i = 0; i < end; i += kWidth)
        _mm256_storeu_pd(out + i,
                         _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
    for (std::size_t i = end; i < n; ++i) out[i] = a[i] - b[i];
}

const KernelTable kAvx2Table = {
    sum_avx2,        dot_avx2,  sum_sq_diff_avx2, sum_sq_dev_avx2,
    centered_dot_avx2, axpy_avx2, sub_avx2,
};

}  // namespace

const KernelTable& avx2_table() { return kAvx2Table; }

}  // namespace etp::kernels

#endif  // x86-64
