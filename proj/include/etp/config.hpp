#pragma once

// Run configuration: a single JSON document with site metadata, feature-set
// definitions, model specs and protocol constants. Human-editable, diffable
// and hashable for the run manifest.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "etp/csv.hpp"
#include "etp/models.hpp"
#include "etp/preprocess.hpp"

namespace etp {

struct SiteConfig {
    std::string id;
    std::string csv_path;
    std::optional<double> lat;
    std::optional<double> lon;
    double utc_offset = 0.0;
    std::optional<CivilDate> flood_start;
    std::optional<CivilDate> greenup_date;
    /// output column name -> depth sensor columns consolidated into it
    std::map<std::string, std::vector<std::string>> depth_groups;
    std::string timestamp_column = "timestamp";
    TimestampFormat timestamp_format = TimestampFormat::iso8601;
    /// When true the CSV timestamps are already UTC; otherwise they are
    /// site-local and get shifted by utc_offset on parse.
    bool csv_timestamps_utc = false;

    SiteMeta meta() const;
    CsvSchemaConfig csv_config() const;
};

struct CvConfig {
    int k = 10;
    std::uint64_t seed = 42;
    double holdout_fraction = 0.2;
};

struct ScreeningConfig {
    double completeness_threshold = kDefaultCompletenessThreshold;
    std::size_t top_n = kDefaultScreeningTopN;
    std::size_t target_count = kDefaultScreeningTargetCount;
};

struct RfeConfig {
    double tolerance = 0.01;
    ModelSpec spec;  // tree-based; defaults to gbdt
};

struct RunConfig {
    std::vector<SiteConfig> sites;
    std::vector<std::string> f_e_features = default_f_e_features();
    std::vector<ModelSpec> model_specs;  // empty selects the five defaults
    /// Columns dropped right after ingest (e.g. synthetic ground truth).
    std::vector<std::string> exclude_features;
    ImputeStrategy impute_strategy = ImputeStrategy::mean;
    bool impute_target = false;
    CvConfig cv;
    ScreeningConfig screening;
    RfeConfig rfe;
    std::string output_dir = "out";

    void validate() const;
    std::vector<ModelSpec> effective_model_specs() const;
};

RunConfig load_config(const std::string& path);
RunConfig config_from_json_text(const std::string& text);
std::string config_to_json_text(const RunConfig& cfg);

/// FNV-1a hash of the canonical JSON form, as "fnv1a64:<hex>".
std::string config_hash(const RunConfig& cfg);

}  // namespace etp
