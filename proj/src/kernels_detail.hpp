#pragma once

// Internal dispatch table shared between the kernel dispatcher and the
// per-ISA translation units.

#include <cstddef>

namespace etp::kernels {

struct KernelTable {
    double (*sum)(const double*, std::size_t);
    double (*dot)(const double*, const double*, std::size_t);
    double (*sum_sq_diff)(const double*, const double*, std::size_t);
    double (*sum_sq_dev)(const double*, std::size_t, double);
    double (*centered_dot)(const double*, const double*, std::size_t, double, double);
    void (*axpy)(double, const double*, double*, std::size_t);
    void (*sub)(const double*, const double*, double*, std::size_t);
};

}  // namespace etp::kernels
