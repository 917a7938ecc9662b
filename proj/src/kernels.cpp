#include "etp/kernels.hpp"

#include <cstdlib>
#include <stdexcept>
#include <string>

#include "kernels_detail.hpp"

namespace etp::kernels {

namespace detail {

double sum_scalar(const double* a, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += a[i];
    return acc;
}

double dot_scalar(const double* a, const double* b, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
    return acc;
}

double sum_sq_diff_scalar(const double* a, const double* b, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = a[i] - b[i];
        acc += d * d;
    }
    return acc;
}

double sum_sq_dev_scalar(const double* a, std::size_t n, double m) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = a[i] - m;
        acc += d * d;
    }
    return acc;
}

double centered_dot_scalar(const double* a, const double* b, std::size_t n,
                           double ma, double mb) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += (a[i] - ma) * (b[i] - mb);
    return acc;
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void sub_scalar(const double* a, const double* b, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = a[i] - b[i];
}

}  // namespace detail

static const KernelTable kScalarTable = {
    detail::sum_scalar,     detail::dot_scalar,          detail::sum_sq_diff_scalar,
    detail::sum_sq_dev_scalar, detail::centered_dot_scalar, detail::axpy_scalar,
    detail::sub_scalar,
};

#if defined(__x86_64__) || defined(_M_X64)
// Defined in kernels_avx2.cpp, compiled with -mavx2.
const KernelTable& avx2_table();
#endif
#if defined(__aarch64__)
// Defined in kernels_neon.cpp.
const KernelTable& neon_table();
#endif

bool backend_supported(Backend b) {
    switch (b) {
        case Backend::scalar:
            return true;
        case Backend::avx2:
#if defined(__x86_64__) || defined(_M_X64)
            return __builtin_cpu_supports("avx2") != 0;
#else
            return false;
#endif
        case Backend::neon:
#if defined(__aarch64__)
            return true;
#else
            return false;
#endif
    }
    return false;
}

Backend detected_backend() {
    if (backend_supported(Backend::avx2)) return Backend::avx2;
    if (backend_supported(Backend::neon)) return Backend::neon;
    return Backend::scalar;
}

std::string_view backend_name(Backend b) {
    switch (b) {
        case Backend::scalar: return "scalar";
        case Backend::avx2: return "avx2";
        case Backend::neon: return "neon";
    }
    return "unknown";
}

namespace {

Backend backend_from_name(const char* name) {
    const std::string_view s(name);
    if (s == "scalar") return Backend::scalar;
    if (s == "avx2") return Backend::avx2;
    if (s == "neon") return Backend::neon;
    throw std::invalid_argument("unknown kernel backend '" + std::string(s) +
                                "' (expected scalar, avx2 or neon)");
}

Backend initial_backend() {
    if (const char* env = std::getenv("ETPART_KERNELS")) {
        const Backend b = backend_from_name(env);
        if (!backend_supported(b))
            throw std::runtime_error("ETPART_KERNELS requests backend '" +
                                     std::string(backend_name(b)) +
                                     "' which this CPU does not support");
        return b;
    }
    return detected_backend();
}

const KernelTable& table_for(Backend b) {
    switch (b) {
#if defined(__x86_64__) || defined(_M_X64)
        case Backend::avx2: return avx2_table();
#endif
#if defined(__aarch64__)
        case Backend::neon: return neon_table();
#endif
        default: return kScalarTable;
    }
}

struct Dispatch {
    Backend active;
    const KernelTable* table;
    Dispatch() : active(initial_backend()), table(&table_for(active)) {}
};

Dispatch& dispatch() {
    static Dispatch d;
    return d;
}

void check_equal_length(std::size_t a, std::size_t b) {
    if (a != b)
        throw std::invalid_argument("kernel span length mismatch: " + std::to_string(a) +
                                    " vs " + std::to_string(b));
}

}  // namespace

Backend active_backend() { return dispatch().active; }

void set_backend(Backend b) {
    if (!backend_supported(b))
        throw std::invalid_argument("kernel backend '" + std::string(backend_name(b)) +
                                    "' is not supported on this CPU");
    dispatch().active = b;
    dispatch().table = &table_for(b);
}

double sum(std::span<const double> a) {
    return dispatch().table->sum(a.data(), a.size());
}

double dot(std::span<const double> a, std::span<const double> b) {
    check_equal_length(a.size(), b.size());
    return dispatch().table->dot(a.data(), b.data(), a.size());
}

double sum_sq_diff(std::span<const double> a, std::span<const double> b) {
    check_equal_length(a.size(), b.size());
    return dispatch().table->sum_sq_diff(a.data(), b.data(), a.size());
}

double sum_sq_dev(std::span<const double> a, double mean) {
    return dispatch().table->sum_sq_dev(a.data(), a.size(), mean);
}

double centered_dot(std::span<const double> a, double mean_a,
                    std::span<const double> b, double mean_b) {
    check_equal_length(a.size(), b.size());
    return dispatch().table->centered_dot(a.data(), b.data(), a.size(), mean_a, mean_b);
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
    check_equal_length(x.size(), y.size());
    dispatch().table->axpy(alpha, x.data(), y.data(), x.size());
}

void sub(std::span<const double> a, std::span<const double> b, std::span<double> out) {
    check_equal_length(a.size(), b.size());
    check_equal_length(a.size(), out.size());
    dispatch().table->sub(a.data(), b.data(), out.data(), a.size());
}

}  // namespace etp::kernels
