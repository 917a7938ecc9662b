#pragma once

// Record masks for the periods where transpiration is assumed negligible:
// Night (solar zenith > 90 degrees), Winter (local month Dec/Jan/Feb) and
// Flood (configured interval from initial flooding to greenup). The night
// set is further split into a training part and a seeded hold-out part.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "etp/dataset.hpp"

namespace etp {

using Mask = std::vector<std::uint8_t>;

struct PeriodMasks {
    Mask night;
    Mask winter;
    Mask flood;
    Mask night_train;
    Mask night_holdout;
};

/// Night iff solar zenith is strictly greater than 90 degrees. Throws if the
/// site has no coordinates.
Mask night_mask(const FluxDataset& ds);

/// True iff the record's local calendar month is December, January or
/// February.
Mask winter_mask(const FluxDataset& ds);

/// True iff flood_start <= local record date < greenup_date. A site without
/// a configured window yields an all-false mask and a warning; an inverted
/// window is rejected.
Mask flood_mask(const FluxDataset& ds, std::string* warning = nullptr);

/// Deterministic seeded partition of the night records. The hold-out gets
/// floor(fraction * n_night) records; requires at least 10 night records.
std::pair<Mask, Mask> split_night_holdout(const Mask& night, double fraction,
                                          std::uint64_t seed);

PeriodMasks compute_period_masks(const FluxDataset& ds, double holdout_fraction,
                                 std::uint64_t seed,
                                 std::vector<std::string>* warnings = nullptr);

std::size_t mask_count(const Mask& m);

}  // namespace etp
