#pragma once

// Runtime-dispatched numeric kernels. Every kernel has a scalar reference
// implementation plus SIMD variants (AVX2 on x86-64, NEON on aarch64); the
// backend is chosen once at startup from CPU capabilities and can be
// overridden with set_backend() or the ETPART_KERNELS environment variable
// (values: scalar, avx2, neon). Within a process one backend serves all
// calls, so results are reproducible run to run on the same machine.

#include <cstddef>
#include <span>
#include <string_view>

namespace etp::kernels {

enum class Backend { scalar, avx2, neon };

Backend detected_backend();
Backend active_backend();
bool backend_supported(Backend b);
void set_backend(Backend b);
std::string_view backend_name(Backend b);

/// Sum of all elements.
double sum(std::span<const double> a);

/// Dot product; spans must have equal length.
double dot(std::span<const double> a, std::span<const double> b);

/// Sum of squared differences, sum((a-b)^2); also the squared Euclidean
/// distance between a and b.
double sum_sq_diff(std::span<const double> a, std::span<const double> b);

/// Sum of squared deviations from a given center, sum((a-m)^2).
double sum_sq_dev(std::span<const double> a, double mean);

/// Centered cross product, sum((a-ma)*(b-mb)).
double centered_dot(std::span<const double> a, double mean_a,
                    std::span<const double> b, double mean_b);

/// y += alpha * x
void axpy(double alpha, std::span<const double> x, std::span<double> y);

/// out = a - b (aliasing with a or b is allowed)
void sub(std::span<const double> a, std::span<const double> b, std::span<double> out);

}  // namespace etp::kernels
