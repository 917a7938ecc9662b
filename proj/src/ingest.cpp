#include "etp/ingest.hpp"

#include <stdexcept>

namespace etp {

namespace {

std::int64_t bin_of(TimePoint t) {
    // Floor division so pre-1970 stamps bin correctly.
    std::int64_t q = t / kSecondsPerHalfHour;
    if (t % kSecondsPerHalfHour < 0) --q;
    return q;
}

}  // namespace

FluxDataset resample_half_hourly(const FluxDataset& ds) {
    if (ds.n_records() == 0)
        return FluxDataset(ds.meta(), {}, ds.schema());

    const std::int64_t first_bin = bin_of(ds.timestamps().front());
    const std::int64_t last_bin = bin_of(ds.timestamps().back());
    const std::size_t n_bins = static_cast<std::size_t>(last_bin - first_bin + 1);

    std::vector<TimePoint> stamps(n_bins);
    for (std::size_t b = 0; b < n_bins; ++b)
        stamps[b] = (first_bin + static_cast<std::int64_t>(b)) * kSecondsPerHalfHour;

    FluxDataset out(ds.meta(), std::move(stamps), ds.schema());

    const std::size_t n_features = ds.schema().size();
    std::vector<double> sums(n_bins);
    std::vector<std::uint32_t> counts(n_bins);
    for (std::size_t c = 0; c < n_features; ++c) {
        std::fill(sums.begin(), sums.end(), 0.0);
        std::fill(counts.begin(), counts.end(), 0u);
        const auto& col = ds.column_at(c);
        for (std::size_t i = 0; i < ds.n_records(); ++i) {
            if (!col.is_present(i)) continue;
            const std::size_t b =
                static_cast<std::size_t>(bin_of(ds.timestamps()[i]) - first_bin);
            sums[b] += col.value_unchecked(i);
            counts[b] += 1;
        }
        auto& out_col = out.column_at(c);
        for (std::size_t b = 0; b < n_bins; ++b) {
            if (counts[b] > 0) out_col.set(b, sums[b] / counts[b]);
        }
    }
    return out;
}

double completeness(const FluxDataset& ds, std::string_view feature) {
    const auto& col = ds.column(feature);
    if (ds.n_records() == 0) return 0.0;
    return static_cast<double>(col.present_count()) /
           static_cast<double>(ds.n_records());
}

}  // namespace etp
