// NEON kernel variants for aarch64.

#if defined(__aarch64__)

#include <arm_neon.h>

#include <cstddef>

#include "kernels_detail.hpp"

namespace etp::kernels {

namespace {

constexpr std::size_t kWidth = 2;  // doubles per 128-bit register

double sum_neon(const double* a, std::size_t n) {
    float64x2_t acc = vdupq_n_f64(0.0);
    const std::size_t end = (n / kWidth) * kWidth;
    for (std::size_t i = 0; i < end; i += kWidth) acc = vaddq_f64(acc, vld1q_f64(a + i));
    double r = vgetq_lane_f64(acc, 0) + vgetq_lane_f64(acc, 1);
    for (std::size_t i = end; i < n; ++i) r += a[i];
    return r;
}

double dot_neon(const double* a, const double* b, std::size_t n) {
    float64x2_t acc = vdupq_n_f64(0.0);
    const std::size_t end = (n / kWidth) * kWidth;
    for (std::size_t i = 0; i < end; i += kWidth)
        acc = vaddq_f64(acc, vmulq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
    double r = vgetq_lane_f64(acc, 0) + vgetq_lane_f64(acc, 1);
    for (std::size_t i = end; i < n; ++i) r += a[i] * b[i];
    return r;
}

double sum_sq_diff_neon(const double* a, const double* b, std::size_t n) {
    float64x2_t acc = vdupq_n_f64(0.0);
    const std::size_t end = (n / kWidth) * kWidth;
    for (std::size_t i = 0; i < end; i += kWidth) {
        const float64x2_t d = vsubq_f64(vld1q_f64(a + i), vld1q_f64(b + i));
        acc = vaddq_f64(acc, vmulq_f64(d, d));
    }
    double r = vgetq_lane_f64(acc, 0) + vgetq_lane_f64(acc, 1);
    for (std::size_t i = end; i < n; ++i) {
        const double d = a[i] - b[i];
        r += d * d;
    }
    return r;
}

double sum_sq_dev_neon(const double* a, std::size_t n, double m) {
    const float64x2_t vm = vdupq_n_f64(m);
    float64x2_t acc = vdupq_n_f64(0.0);
    const std::size_t end = (n / kWidth) * kWidth;
    for (std::size_t i = 0; i < end; i += kWidth) {
        const float64x2_t d = vsubq_f64(vld1q_f64(a + i), vm);
        acc = vaddq_f64(acc, vmulq_f64(d, d));
    }
    double r = vgetq_lane_f64(acc, 0) + vgetq_lane_f64(acc, 1);
    for (std::size_t i = end; i < n; ++i) {
        const double d = a[i] - m;
        r += d * d;
    }
    return r;
}

double centered_dot_neon(const double* a, const double* b, std::size_t n,
                         double ma, double mb) {
    const float64x2_t vma = vdupq_n_f64(ma);
    const float64x2_t vmb = vdupq_n_f64(mb);
    float64x2_t acc = vdupq_n_f64(0.0);
    const std::size_t end = (n / kWidth) * kWidth;
    for (std::size_t i = 0; i < end; i += kWidth) {
        const float64x2_t da = vsubq_f64(vld1q_f64(a + i), vma);
        const float64x2_t db = vsubq_f64(vld1q_f64(b + i), vmb);
        acc = vaddq_f64(acc, vmulq_f64(da, db));
    }
    double r = vgetq_lane_f64(acc, 0) + vgetq_lane_f64(acc, 1);
    for (std::size_t i = end; i < n; ++i) r += (a[i] - ma) * (b[i] - mb);
    return r;
}

void axpy_neon(double alpha, const double* x, double* y, std::size_t n) {
    const float64x2_t va = vdupq_n_f64(alpha);
    const std::size_t end = (n / kWidth) * kWidth;
    for (std::size_t i = 0; i < end; i += kWidth) {
        const float64x2_t r =
            vaddq_f64(vld1q_f64(y + i), vmulq_f64(va, vld1q_f64(x + i)));
        vst1q_f64(y + i, r);
    }
    for (std::size_t i = end; i < n; ++i) y[i] += alpha * x[i];
}

void sub_neon(const double* a, const double* b, double* out, std::size_t n) {
    const std::size_t end = (n / kWidth) * kWidth;
    for (std::size_t i = 0; i < end; i += kWidth)
        vst1q_f64(out + i, vsubq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
    for (std::size_t i = end; i < n; ++i) out[i] = a[i] - b[i];
}

const KernelTable kNeonTable = {
    sum_neon,        dot_neon,  sum_sq_diff_neon, sum_sq_dev_neon,
    centered_dot_neon, axpy_neon, sub_neon,
};

}  // namespace

const KernelTable& neon_table() { return kNeonTable; }

}  // namespace etp::kernels

#endif  // aarch64
