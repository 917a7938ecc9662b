#pragma once

// Shared fixture builders for the unit suites.

#include <optional>
#include <string>
#include <vector>

#include "etp/dataset.hpp"

namespace helpers {

inline etp::SiteMeta meta(double lat = 38.1, double lon = -121.65,
                          double utc_offset = 0.0) {
    etp::SiteMeta m;
    m.site_id = "T1";
    m.latitude_deg = lat;
    m.longitude_deg = lon;
    m.utc_offset_hours = utc_offset;
    return m;
}

/// Half-hourly dataset starting at the given ISO instant with empty columns.
inline etp::FluxDataset dataset(const etp::SiteMeta& m, const std::string& start_iso,
                                std::size_t n, std::vector<std::string> schema) {
    const auto start = etp::parse_iso8601(start_iso);
    std::vector<etp::TimePoint> stamps(n);
    for (std::size_t i = 0; i < n; ++i)
        stamps[i] = *start + static_cast<etp::TimePoint>(i) * etp::kSecondsPerHalfHour;
    return etp::FluxDataset(m, std::move(stamps), std::move(schema));
}

inline void fill(etp::FluxDataset& ds, const std::string& name,
                 const std::vector<std::optional<double>>& values) {
    auto& col = ds.column(name);
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (values[i])
            col.set(i, *values[i]);
        else
            col.set_missing(i);
    }
}

inline void fill(etp::FluxDataset& ds, const std::string& name,
                 const std::vector<double>& values) {
    auto& col = ds.column(name);
    for (std::size_t i = 0; i < values.size(); ++i) col.set(i, values[i]);
}

}  // namespace helpers
