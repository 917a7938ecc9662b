#pragma once

// Deterministic randomness. Every random decision in the pipeline draws from
// a stream derived from the root seed and a stream name, so results do not
// depend on evaluation order or the number of worker threads. mt19937_64 is
// bit-specified by the standard; the distributions are hand-rolled because
// standard-library distributions are not.

#include <cstdint>
#include <initializer_list>
#include <random>
#include <string_view>
#include <vector>

namespace etp {

/// FNV-1a 64-bit hash.
std::uint64_t fnv1a64(std::string_view s);

/// splitmix64 finalizer; good seed mixing.
std::uint64_t splitmix64(std::uint64_t x);

std::uint64_t derive_seed(std::uint64_t root, std::string_view name);
std::uint64_t derive_seed(std::uint64_t root, std::initializer_list<std::string_view> parts);

class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t next_u64() { return eng_(); }

    /// Uniform in [0, 1).
    double uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Standard normal via Box-Muller; consumes exactly two draws.
    double normal();

    double normal(double mean, double std) { return mean + std * normal(); }

    /// Uniform index in [0, n) without modulo bias.
    std::size_t index(std::size_t n);

    /// Fisher-Yates shuffle.
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            const std::size_t j = index(i);
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    std::mt19937_64 eng_;
};

}  // namespace etp
