#pragma once

// Artifact emission: the experiment report as CSV and JSON (one row per
// grid cell, columns per test period, mirroring the paper-style result
// tables), RFE traces as JSON, partition output as CSV, and tidy plot-data
// CSVs. Wall times vary run to run, so they are excluded from emitted files
// unless explicitly requested; every writer is deterministic for a given
// in-memory value.

#include <iosfwd>
#include <span>
#include <string>

#include "etp/harness.hpp"
#include "etp/partition.hpp"
#include "etp/rfe.hpp"

namespace etp {

enum class ReportFormat { csv, json };

void emit_report(const ExperimentReport& report, ReportFormat format, std::ostream& out,
                 bool include_times = false);
void write_report(const ExperimentReport& report, ReportFormat format,
                  const std::string& path, bool include_times = false);

std::string report_to_json_text(const ExperimentReport& report,
                                bool include_times = false);
ExperimentReport report_from_json_text(const std::string& text);

/// Field-wise equality ignoring wall times; NaNs compare equal to NaNs.
bool reports_equivalent(const ExperimentReport& a, const ExperimentReport& b);

std::string rfe_trace_to_json_text(const RfeTrace& trace);

void write_partition_csv(std::span<const PartitionRecord> records,
                         const PeriodMasks& masks, const std::string& path);

/// Model-comparison scatter: one row per cell with x = winter adjusted R2,
/// y = flood adjusted R2, size = night adjusted R2. Sites without flood data
/// leave y empty.
void write_plotdata_compare(const ExperimentReport& report, const std::string& path);

/// RFE curves: (n_features, period, adj_r2) per iteration; absent periods
/// are omitted.
void write_plotdata_rfe(const RfeTrace& trace, const std::string& path);

/// Shortest round-trip decimal form; NaN renders as an empty string.
std::string format_metric(double v);

}  // namespace etp
