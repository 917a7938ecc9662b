#pragma once

// 10-fold cross-validation, the (site x algorithm x feature set) comparison
// grid, and the negative-R2 discard rule. Folds are drawn from the night
// training records only; the night hold-out, winter and flood sets are
// evaluated whole by every fold model and metrics are averaged over folds.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "etp/dataset.hpp"
#include "etp/metrics.hpp"
#include "etp/models.hpp"
#include "etp/periods.hpp"

namespace etp {

struct FoldPlan {
    std::size_t n = 0;
    int k = 10;
    std::uint64_t seed = 0;
    std::vector<int> assignment;  // fold index per record, 0..k-1
};

/// Seeded uniform shuffle then contiguous chunking; fold sizes differ by at
/// most one. Requires 2 <= k <= n.
FoldPlan kfold_split(std::size_t n, int k, std::uint64_t seed);

enum class Period { night, winter, flood };
std::string_view period_name(Period p);
Period period_from_name(std::string_view name);

struct PeriodMetrics {
    std::optional<metrics::MetricReport> night;  // evaluated on the night hold-out
    std::optional<metrics::MetricReport> winter;
    std::optional<metrics::MetricReport> flood;
    const std::optional<metrics::MetricReport>& of(Period p) const;
};

struct ExperimentCell {
    std::string site_id;
    ModelSpec spec;
    std::string feature_set;
    PeriodMetrics metrics;  // mean values across folds
    double wall_time_seconds = 0.0;
};

struct ExperimentReport {
    std::vector<ExperimentCell> cells;
    std::vector<std::pair<std::string, std::string>> discarded;  // (model, reason)
};

struct PreparedSite {
    FluxDataset ds;
    PeriodMasks masks;
};

/// Rows of a mask restricted to records with a present target.
std::vector<std::uint32_t> evaluation_rows(const FluxDataset& ds, const Mask& mask);

/// Trains one model per fold on night_train minus the fold and evaluates
/// each on the night hold-out, all winter records and all flood records;
/// reports the arithmetic mean of each metric across folds. Empty or
/// constant-target periods yield absent metrics.
ExperimentCell cross_validate(const FluxDataset& ds, const PeriodMasks& masks,
                              const FeatureSet& features, const ModelSpec& spec,
                              const FoldPlan& plan);

/// Evaluates the full grid. Any spec whose night-holdout R2 is negative at
/// any site (with any feature set) moves to `discarded` and loses its cells.
/// Cells are deterministic for a given seed regardless of the worker count.
ExperimentReport compare_models(std::span<const PreparedSite> sites,
                                std::span<const ModelSpec> specs,
                                std::span<const FeatureSet> feature_sets,
                                std::uint64_t seed, int k = 10, int jobs = 1);

struct RankEntry {
    std::string site_id;
    std::string model;
    std::string feature_set;
    double value = 0.0;
    double wall_time_seconds = 0.0;
};

/// Orders cells by the chosen metric: descending for r2/adj_r2, ascending
/// for rmse; exact ties break toward the lower wall time. Metric names:
/// "adj_r2", "r2", "rmse".
std::vector<RankEntry> rank_models(const ExperimentReport& report, Period period,
                                   std::string_view metric);

}  // namespace etp
