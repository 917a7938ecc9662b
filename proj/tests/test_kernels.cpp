#include <doctest.h>

#include <cmath>
#include <vector>

#include "etp/kernels.hpp"
#include "etp/rng.hpp"
#include "oracles.hpp"

using namespace etp;

namespace {

std::vector<double> random_vec(Rng& rng, std::size_t n, double lo = -10.0,
                               double hi = 10.0) {
    std::vector<double> v(n);
    for (auto& x : v) x = rng.uniform(lo, hi);
    return v;
}

struct BackendGuard {
    kernels::Backend saved = kernels::active_backend();
    ~BackendGuard() { kernels::set_backend(saved); }
};

}  // namespace

TEST_SUITE("kernels") {

TEST_CASE("scalar backend always supported") {
    CHECK(kernels::backend_supported(kernels::Backend::scalar));
    CHECK(kernels::backend_name(kernels::Backend::avx2) == "avx2");
}

TEST_CASE("simd variants match scalar reference on awkward lengths") {
    BackendGuard guard;
    Rng rng(7);
    const std::vector<std::size_t> lengths = {0,  1,  2,  3,  4,   5,   7,  8,
                                              9,  15, 16, 17, 31,  32,  33, 63,
                                              64, 100, 255, 1000, 1017};
    for (const auto backend : {kernels::Backend::avx2, kernels::Backend::neon}) {
        if (!kernels::backend_supported(backend)) continue;
        for (const std::size_t n : lengths) {
            const auto a = random_vec(rng, n);
            const auto b = random_vec(rng, n);
            const double ma = n ? oracles::naive_mean(a) : 0.0;
            const double mb = n ? oracles::naive_mean(b) : 0.0;

            kernels::set_backend(kernels::Backend::scalar);
            const double s_sum = kernels::sum(a);
            const double s_dot = kernels::dot(a, b);
            const double s_ssd = kernels::sum_sq_diff(a, b);
            const double s_dev = kernels::sum_sq_dev(a, ma);
            const double s_cd = kernels::centered_dot(a, ma, b, mb);
            std::vector<double> s_axpy = b;
            kernels::axpy(0.37, a, s_axpy);
            std::vector<double> s_sub(n);
            kernels::sub(a, b, s_sub);

            kernels::set_backend(backend);
            const double tol = 1e-12 * (1.0 + static_cast<double>(n));
            CHECK(std::abs(kernels::sum(a) - s_sum) <= tol * (1.0 + std::abs(s_sum)));
            CHECK(std::abs(kernels::dot(a, b) - s_dot) <= tol * (1.0 + std::abs(s_dot)));
            CHECK(std::abs(kernels::sum_sq_diff(a, b) - s_ssd) <=
                  tol * (1.0 + std::abs(s_ssd)));
            CHECK(std::abs(kernels::sum_sq_dev(a, ma) - s_dev) <=
                  tol * (1.0 + std::abs(s_dev)));
            CHECK(std::abs(kernels::centered_dot(a, ma, b, mb) - s_cd) <=
                  tol * (1.0 + std::abs(s_cd)));

            std::vector<double> v_axpy = b;
            kernels::axpy(0.37, a, v_axpy);
            // Elementwise ops have no reassociation; results are identical.
            CHECK(v_axpy == s_axpy);
            std::vector<double> v_sub(n);
            kernels::sub(a, b, v_sub);
            CHECK(v_sub == s_sub);
        }
    }
}

TEST_CASE("sum agrees with compensated reference") {
    Rng rng(11);
    for (const std::size_t n : {10u, 1000u, 100000u}) {
        const auto v = random_vec(rng, n, -1e6, 1e6);
        const double expected = oracles::kahan_sum(v);
        CHECK(std::abs(kernels::sum(v) - expected) <=
              1e-9 * (1.0 + std::abs(expected)));
    }
}

TEST_CASE("length mismatches are rejected") {
    const std::vector<double> a(4, 1.0), b(5, 1.0);
    CHECK_THROWS_AS((void)kernels::dot(a, b), std::invalid_argument);
    std::vector<double> out(4);
    CHECK_THROWS_AS(kernels::sub(a, b, out), std::invalid_argument);
}

TEST_CASE("unsupported backend is rejected") {
#if !defined(__aarch64__)
    CHECK_THROWS_AS(kernels::set_backend(kernels::Backend::neon),
                    std::invalid_argument);
#endif
}

}  // TEST_SUITE
