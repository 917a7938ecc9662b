#include "etp/periods.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "etp/rng.hpp"
#include "etp/solar.hpp"

namespace etp {

std::size_t mask_count(const Mask& m) {
    return static_cast<std::size_t>(std::accumulate(m.begin(), m.end(), std::size_t{0}));
}

Mask night_mask(const FluxDataset& ds) {
    const auto& meta = ds.meta();
    if (!meta.latitude_deg || !meta.longitude_deg)
        throw std::invalid_argument("site '" + meta.site_id +
                                    "' has no coordinates; night mask needs lat/lon");
    Mask m(ds.n_records(), 0);
    for (std::size_t i = 0; i < ds.n_records(); ++i) {
        const double z =
            solar_zenith_deg(ds.timestamps()[i], *meta.latitude_deg, *meta.longitude_deg);
        m[i] = z > 90.0 ? 1 : 0;
    }
    return m;
}

Mask winter_mask(const FluxDataset& ds) {
    Mask m(ds.n_records(), 0);
    for (std::size_t i = 0; i < ds.n_records(); ++i) {
        const TimePoint local = to_local(ds.timestamps()[i], ds.meta().utc_offset_hours);
        const int month = from_epoch(local).date.month;
        m[i] = (month == 12 || month == 1 || month == 2) ? 1 : 0;
    }
    return m;
}

Mask flood_mask(const FluxDataset& ds, std::string* warning) {
    const auto& meta = ds.meta();
    Mask m(ds.n_records(), 0);
    if (!meta.flood_start || !meta.greenup_date) {
        if (warning)
            *warning = "site '" + meta.site_id +
                       "' has no flood window; flood mask is all-false";
        return m;
    }
    if (!(*meta.flood_start < *meta.greenup_date))
        throw std::invalid_argument("site '" + meta.site_id +
                                    "': greenup_date must be after flood_start");
    const std::int64_t start = days_from_civil(*meta.flood_start);
    const std::int64_t end = days_from_civil(*meta.greenup_date);
    for (std::size_t i = 0; i < ds.n_records(); ++i) {
        const TimePoint local = to_local(ds.timestamps()[i], meta.utc_offset_hours);
        std::int64_t day = local / kSecondsPerDay;
        if (local % kSecondsPerDay < 0) --day;
        m[i] = (day >= start && day < end) ? 1 : 0;
    }
    return m;
}

std::pair<Mask, Mask> split_night_holdout(const Mask& night, double fraction,
                                          std::uint64_t seed) {
    if (!(fraction > 0.0 && fraction < 1.0))
        throw std::invalid_argument("holdout fraction must be in (0, 1)");
    std::vector<std::size_t> night_idx;
    for (std::size_t i = 0; i < night.size(); ++i)
        if (night[i]) night_idx.push_back(i);
    if (night_idx.size() < 10)
        throw std::invalid_argument("need at least 10 night records to split, have " +
                                    std::to_string(night_idx.size()));
    const std::size_t n_holdout =
        static_cast<std::size_t>(std::floor(fraction * static_cast<double>(night_idx.size())));

    Rng rng(seed);
    rng.shuffle(night_idx);

    Mask train(night.size(), 0);
    Mask holdout(night.size(), 0);
    for (std::size_t j = 0; j < night_idx.size(); ++j) {
        if (j < n_holdout)
            holdout[night_idx[j]] = 1;
        else
            train[night_idx[j]] = 1;
    }
    return {train, holdout};
}

PeriodMasks compute_period_masks(const FluxDataset& ds, double holdout_fraction,
                                 std::uint64_t seed,
                                 std::vector<std::string>* warnings) {
    PeriodMasks pm;
    pm.night = night_mask(ds);
    pm.winter = winter_mask(ds);
    std::string flood_warning;
    pm.flood = flood_mask(ds, &flood_warning);
    if (!flood_warning.empty() && warnings) warnings->push_back(flood_warning);
    std::tie(pm.night_train, pm.night_holdout) =
        split_night_holdout(pm.night, holdout_fraction, seed);
    return pm;
}

}  // namespace etp
