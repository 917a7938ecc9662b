#pragma once

// ET partitioning: train the evaporation model on night data (where
// transpiration is assumed zero, so measured ET equals E), predict E for
// every record, and derive T as the remainder. Negative T is flagged, never
// clamped; the slope <= 1 constraint validates the result per period.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "etp/harness.hpp"

namespace etp {

struct PartitionRecord {
    TimePoint timestamp = 0;
    std::optional<double> et_measured;  // wq
    std::optional<double> e_predicted;
    std::optional<double> t_derived;
    bool negative_t = false;
    bool imputed_target = false;
};

/// Fits the spec on the night training records only, target wq.
TrainedModel train_e_model(const FluxDataset& ds, const PeriodMasks& masks,
                           const FeatureSet& features, const ModelSpec& spec);

/// Predicts E for every record (day and night) and derives T = wq - E with
/// exact additivity (e_predicted + t_derived reproduces wq bitwise). Records
/// with missing wq are emitted without a partition.
std::vector<PartitionRecord> partition_et(const FluxDataset& ds,
                                          const TrainedModel& model);

struct PartitionPeriodStats {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
    bool slope_violation = false;
    double negative_t_fraction = 0.0;
    std::size_t n = 0;
};

struct PartitionValidation {
    std::optional<PartitionPeriodStats> night_holdout;
    std::optional<PartitionPeriodStats> winter;
    std::optional<PartitionPeriodStats> flood;
    std::optional<std::string> warning;
};

/// Per-period best-fit slope of predicted E against measured ET, the slope
/// violation flag, the negative-T fraction and R2. An input with no
/// partitioned records yields an empty report with a warning.
PartitionValidation validate_partition(std::span<const PartitionRecord> results,
                                       const PeriodMasks& masks);

}  // namespace etp
