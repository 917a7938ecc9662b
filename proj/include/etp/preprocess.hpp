#pragma once

// Feature engineering: completeness filtering, depth-profile consolidation,
// imputation, correlation screening across sites, and construction of the
// F_E and F_25 feature sets. All operations are pure; datasets are copied,
// never mutated in place.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "etp/dataset.hpp"

namespace etp {

inline constexpr double kDefaultCompletenessThreshold = 0.8;
inline constexpr std::size_t kDefaultScreeningTopN = 50;
inline constexpr std::size_t kDefaultScreeningTargetCount = 25;

/// The 11 expert features: 8 domain drivers plus year/month/DOY.
std::vector<std::string> default_f_e_features();

/// Names of the features with completeness >= threshold, in schema order.
std::vector<std::string> filter_by_completeness(const FluxDataset& ds, double threshold);

/// Replaces the group columns by one column holding the per-record mean of
/// the present group values (missing when the whole group is missing). The
/// new column takes the first group member's schema position.
FluxDataset consolidate_depth_profiles(const FluxDataset& ds,
                                       const std::vector<std::string>& group,
                                       const std::string& out_name);

enum class ImputeStrategy { mean, linear };

ImputeStrategy impute_strategy_from_name(std::string_view name);

/// mean: missing values take the feature's mean over present values.
/// linear: interior gaps interpolate linearly against time; leading and
/// trailing gaps take the nearest present value. A fully missing feature is
/// rejected. Imputed cells are flagged on the returned dataset.
FluxDataset impute(const FluxDataset& ds, std::string_view feature,
                   ImputeStrategy strategy);

struct CorrelationRanking {
    std::string site_id;
    /// (feature, |Pearson r| with the target), sorted descending, ties by
    /// feature name.
    std::vector<std::pair<std::string, double>> entries;
};

/// Pearson correlation of every non-target feature with the target, ranked
/// by absolute value. Zero-variance features rank with r = 0; a
/// zero-variance target is rejected. Requires an imputed dataset.
CorrelationRanking correlation_rank(const FluxDataset& ds, std::string_view target);

/// Intersects the top-top_n entries of every site's ranking and orders the
/// result by mean rank (ties by name). More than target_count survivors are
/// truncated; fewer are returned in full with a warning.
std::vector<std::string> cross_site_common_features(
    std::span<const CorrelationRanking> rankings, std::size_t top_n,
    std::size_t target_count, std::string* warning = nullptr);

struct FeatureSets {
    FeatureSet f_e;
    FeatureSet f_25;
};

/// F_E comes from configuration (default: the 11 expert features) and must
/// exist at every site; F_25 appends the screened features, deduplicated,
/// F_E order first.
FeatureSets build_feature_sets(std::span<const FluxDataset> sites,
                               const std::vector<std::string>& f_e_features,
                               const std::vector<std::string>& screened);

/// Adds calendar/diurnal features derived from timestamps and site
/// coordinates: year, month, DOY, time (local decimal hour) and, when
/// coordinates are present, the solar zenith angle ze.
FluxDataset add_time_features(const FluxDataset& ds);

}  // namespace etp
