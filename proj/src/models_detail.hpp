#pragma once

// Internal helpers shared between the model translation units.

#include <span>

#include "etp/models.hpp"

namespace etp::detail {

double predict_knn(const KnnData& d, std::span<const double> row);

/// Split-gain bookkeeping shared by the exact and histogram tree builders:
/// with node-centered target sums, gain = s_left^2 * (1/n_left + 1/n_right).
inline double split_gain(double centered_left_sum, std::size_t n_left,
                         std::size_t n_right) {
    return centered_left_sum * centered_left_sum *
           (1.0 / static_cast<double>(n_left) + 1.0 / static_cast<double>(n_right));
}

}  // namespace etp::detail
