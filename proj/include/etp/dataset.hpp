#pragma once

// Core data model: a FluxDataset is a time-indexed, column-oriented table of
// named real-valued features with explicit missing markers. Once built it is
// treated as immutable; every transformation returns a new dataset.

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "etp/chronoutil.hpp"

namespace etp {

/// Name of the target variable (total ET water flux).
inline constexpr std::string_view kTargetFeature = "wq";

/// One feature column with per-record presence and imputation flags.
/// Missing cells are tracked by the presence bitmap, never by sentinel
/// values; the stored double at a missing slot is unspecified.
class FeatureColumn {
public:
    FeatureColumn() = default;
    explicit FeatureColumn(std::size_t n)
        : values_(n, 0.0), present_(n, 0), imputed_(n, 0) {}

    std::size_t size() const { return values_.size(); }
    bool is_present(std::size_t i) const { return present_[i] != 0; }
    bool is_imputed(std::size_t i) const { return imputed_[i] != 0; }

    std::optional<double> get(std::size_t i) const {
        if (!present_[i]) return std::nullopt;
        return values_[i];
    }

    double value_unchecked(std::size_t i) const { return values_[i]; }

    void set(std::size_t i, double v) {
        values_[i] = v;
        present_[i] = 1;
    }

    void set_missing(std::size_t i) {
        values_[i] = 0.0;
        present_[i] = 0;
        imputed_[i] = 0;
    }

    void set_imputed(std::size_t i, double v) {
        values_[i] = v;
        present_[i] = 1;
        imputed_[i] = 1;
    }

    void append(std::optional<double> v) {
        values_.push_back(v.value_or(0.0));
        present_.push_back(v.has_value() ? 1 : 0);
        imputed_.push_back(0);
    }

    std::size_t present_count() const;
    bool fully_present() const;

    /// Contiguous value storage; only meaningful when fully_present().
    std::span<const double> raw() const { return values_; }

private:
    std::vector<double> values_;
    std::vector<std::uint8_t> present_;
    std::vector<std::uint8_t> imputed_;
};

struct SiteMeta {
    std::string site_id;
    std::optional<double> latitude_deg;
    std::optional<double> longitude_deg;
    double utc_offset_hours = 0.0;
    std::optional<CivilDate> flood_start;
    std::optional<CivilDate> greenup_date;
};

class FluxDataset {
public:
    /// Builds an empty-column dataset. Throws if timestamps are not strictly
    /// increasing or if the schema is missing wq or contains duplicates.
    FluxDataset(SiteMeta meta, std::vector<TimePoint> timestamps,
                std::vector<std::string> schema);

    const SiteMeta& meta() const { return meta_; }
    const std::string& site_id() const { return meta_.site_id; }
    std::size_t n_records() const { return timestamps_.size(); }
    const std::vector<TimePoint>& timestamps() const { return timestamps_; }
    const std::vector<std::string>& schema() const { return schema_; }

    bool has_feature(std::string_view name) const;
    std::size_t feature_index(std::string_view name) const;  // throws if unknown
    const FeatureColumn& column(std::string_view name) const;
    FeatureColumn& column(std::string_view name);
    const FeatureColumn& column_at(std::size_t idx) const { return columns_[idx]; }
    FeatureColumn& column_at(std::size_t idx) { return columns_[idx]; }

    /// Inserts a column; position defaults to the end of the schema.
    void add_column(std::string name, FeatureColumn col,
                    std::optional<std::size_t> position = std::nullopt);
    void remove_column(std::string_view name);

    bool operator==(const FluxDataset& other) const;

private:
    void rebuild_index();

    SiteMeta meta_;
    std::vector<TimePoint> timestamps_;
    std::vector<std::string> schema_;
    std::vector<FeatureColumn> columns_;
    std::map<std::string, std::size_t, std::less<>> index_;
};

/// Named ordered feature list (F_E, F_25, F_RFE or custom).
struct FeatureSet {
    std::string name;
    std::vector<std::string> features;

    /// Enforces: nonempty, no duplicates, target excluded.
    void validate() const;
    bool contains(std::string_view f) const;
};

}  // namespace etp
