#pragma once

// CSV ingestion and dataset serialization. Input files are UTF-8,
// comma-separated, with a header row and one timestamp column. Empty cells,
// "NA", "NaN" (case-insensitive) and the flux-network sentinel -9999 all map
// to missing. Serialization writes the same dialect with ISO-8601 UTC
// timestamps and missing values as empty cells.

#include <iosfwd>
#include <map>
#include <string>

#include "etp/dataset.hpp"

namespace etp {

enum class TimestampFormat { iso8601, epoch_seconds };

struct CsvSchemaConfig {
    std::string timestamp_column = "timestamp";
    TimestampFormat timestamp_format = TimestampFormat::iso8601;
    /// Timestamps in the file are site-local; this shift converts to UTC.
    double utc_offset_hours = 0.0;
    /// Optional header -> feature-name renames.
    std::map<std::string, std::string> column_renames;
};

/// Parses a CSV stream into a dataset. Rows are ordered by timestamp;
/// duplicate timestamps, non-numeric cells and a missing timestamp column
/// are rejected with messages naming the offending location.
FluxDataset parse_csv(std::istream& in, const SiteMeta& meta, const CsvSchemaConfig& cfg);

void serialize_csv(const FluxDataset& ds, std::ostream& out);

FluxDataset load_csv_file(const std::string& path, const SiteMeta& meta,
                          const CsvSchemaConfig& cfg);
void save_csv_file(const FluxDataset& ds, const std::string& path);

}  // namespace etp
