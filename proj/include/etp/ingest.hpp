#pragma once

#include "etp/dataset.hpp"

namespace etp {

/// Resamples to a uniform half-hourly grid. Bins are left-closed,
/// right-open, aligned to :00/:30; each feature takes the mean of its
/// present values in the bin, bins with no present values yield missing,
/// and bins with no source records at all are emitted as all-missing so the
/// spacing stays uniform. Idempotent on already half-hourly data.
FluxDataset resample_half_hourly(const FluxDataset& ds);

/// Fraction of records where the feature is present, in [0, 1].
double completeness(const FluxDataset& ds, std::string_view feature);

}  // namespace etp
