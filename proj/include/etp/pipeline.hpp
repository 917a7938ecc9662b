#pragma once

// Orchestration of the full framework: ingest -> preprocess -> period masks
// -> F_E/F_25 -> model comparison -> per-site RFE and cross-site merge ->
// final comparison on F_RFE -> partition with the top-ranked model. Each
// stage writes its artifacts into the output directory; a manifest records
// everything needed to reproduce the run.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "etp/config.hpp"
#include "etp/harness.hpp"
#include "etp/preprocess.hpp"

namespace etp {

enum class Stage { ingest, prep, compare, rfe, partition };
Stage stage_from_name(std::string_view name);
std::string_view stage_name(Stage s);

struct PipelineOptions {
    std::optional<std::uint64_t> seed_override;
    std::optional<std::string> out_override;
    int jobs = 1;
    Stage stage = Stage::partition;  // run up to and including this stage
};

struct PreparedData {
    std::vector<PreparedSite> sites;
    FeatureSets sets;
    std::vector<std::string> warnings;
};

/// Ingest + preprocessing + masks + feature-set construction, no artifacts.
PreparedData prepare_data(const RunConfig& cfg, std::uint64_t seed);

/// Runs the configured stages and writes artifacts under the output
/// directory. Throws std::invalid_argument for validation problems and
/// std::runtime_error for runtime failures; on failure the manifest is
/// written with status "incomplete" and the failing stage.
void run_pipeline(const RunConfig& cfg, const PipelineOptions& options);

}  // namespace etp
