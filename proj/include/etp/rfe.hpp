#pragma once

// Recursive feature elimination: iteratively drop the feature with the
// smallest normalized gain importance, cross-validating at every step, stop
// at the set preceding a >1% relative drop in night-holdout R2, and merge
// per-site optima into F_RFE by keeping features optimal at two or more
// sites.

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "etp/harness.hpp"

namespace etp {

inline constexpr double kDefaultRfeTolerance = 0.01;

struct RfeIteration {
    std::vector<std::string> feature_set;
    std::optional<std::string> removed_feature;  // absent on the final singleton
    std::map<std::string, double> normalized_importance;
    PeriodMetrics cv_metrics;
};

struct RfeTrace {
    std::string site_id;
    std::vector<RfeIteration> iterations;  // full set down to one feature
    FeatureSet optimal_set;
};

/// Runs elimination from start_set down to a single feature. Importance for
/// each removal comes from one model fit on all night-train records;
/// minimum-importance ties break lexicographically. Requires a tree-based
/// spec.
RfeTrace rfe_site(const FluxDataset& ds, const PeriodMasks& masks,
                  const FeatureSet& start_set, const ModelSpec& spec,
                  const FoldPlan& plan, double tolerance = kDefaultRfeTolerance);

/// Scans iterations from the full set toward one feature and returns the set
/// preceding the first relative night-holdout R2 drop greater than
/// `tolerance`; with no such drop, the final (smallest) set. A negative R2
/// at the start of the trace is rejected.
FeatureSet select_optimal(const RfeTrace& trace, double tolerance = kDefaultRfeTolerance);

/// Keeps features present in at least two sites' optimal sets, ordered by
/// membership count descending then name. An empty result carries a warning.
FeatureSet merge_sites(std::span<const FeatureSet> optimal_sets,
                       std::string* warning = nullptr);

enum class ImportanceClass { high, significant, minor };
std::string_view importance_class_name(ImportanceClass c);

inline constexpr double kHighImportanceThreshold = 0.2;
/// 0.05 with the 10% band applied downward.
inline constexpr double kSignificantImportanceThreshold = 0.045;

/// high: value >= 0.2; significant: 0.045 <= value < 0.2; else minor.
/// Values must sum to 1 within 1e-6.
std::map<std::string, ImportanceClass> classify_importance(
    const std::map<std::string, double>& normalized);

}  // namespace etp
