#include "etp/pipeline.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <json.hpp>

#include "etp/ingest.hpp"
#include "etp/kernels.hpp"
#include "etp/partition.hpp"
#include "etp/report.hpp"
#include "etp/rfe.hpp"
#include "etp/rng.hpp"

namespace etp {

namespace fs = std::filesystem;
using nlohmann::json;

Stage stage_from_name(std::string_view name) {
    if (name == "ingest") return Stage::ingest;
    if (name == "prep") return Stage::prep;
    if (name == "compare") return Stage::compare;
    if (name == "rfe") return Stage::rfe;
    if (name == "partition" || name == "run") return Stage::partition;
    throw std::invalid_argument("unknown stage '" + std::string(name) +
                                "' (expected ingest, prep, compare, rfe or partition)");
}

std::string_view stage_name(Stage s) {
    switch (s) {
        case Stage::ingest: return "ingest";
        case Stage::prep: return "prep";
        case Stage::compare: return "compare";
        case Stage::rfe: return "rfe";
        case Stage::partition: return "partition";
    }
    return "unknown";
}

namespace {

void log_line(const std::string& msg) { std::cerr << "[etpart] " << msg << '\n'; }

FluxDataset ingest_site(const SiteConfig& site, const RunConfig& cfg) {
    FluxDataset raw = load_csv_file(site.csv_path, site.meta(), site.csv_config());
    FluxDataset ds = resample_half_hourly(raw);
    for (const auto& f : cfg.exclude_features)
        if (ds.has_feature(f)) ds.remove_column(f);
    return ds;
}

FluxDataset preprocess_site(FluxDataset ds, const SiteConfig& site,
                            const RunConfig& cfg, std::vector<std::string>* warnings) {
    // Depth consolidation first so sparse per-depth sensors survive the
    // completeness filter as a merged column.
    for (const auto& [out_name, group] : site.depth_groups)
        ds = consolidate_depth_profiles(ds, group, out_name);

    const auto retained =
        filter_by_completeness(ds, cfg.screening.completeness_threshold);
    std::vector<std::string> to_drop;
    for (const auto& f : ds.schema()) {
        if (f == kTargetFeature) continue;
        if (std::find(retained.begin(), retained.end(), f) == retained.end())
            to_drop.push_back(f);
    }
    for (const auto& f : to_drop) {
        if (warnings)
            warnings->push_back("site " + site.id + ": dropped '" + f +
                                "' (completeness below threshold)");
        ds.remove_column(f);
    }

    ds = add_time_features(ds);

    for (const auto& f : std::vector<std::string>(ds.schema())) {
        if (f == kTargetFeature && !cfg.impute_target) continue;
        const auto& col = ds.column(f);
        if (col.present_count() < ds.n_records())
            ds = impute(ds, f, cfg.impute_strategy);
    }
    return ds;
}

std::vector<std::string> screen_features(const std::vector<FluxDataset>& datasets,
                                         const RunConfig& cfg,
                                         std::vector<std::string>* warnings) {
    std::vector<CorrelationRanking> rankings;
    rankings.reserve(datasets.size());
    for (const auto& ds : datasets)
        rankings.push_back(correlation_rank(ds, kTargetFeature));

    if (rankings.size() == 1) {
        // Single-site run: no cross-site intersection possible, take the
        // site's own top features.
        const auto& entries = rankings.front().entries;
        const std::size_t limit = std::min(cfg.screening.target_count, entries.size());
        std::vector<std::string> out;
        for (std::size_t i = 0; i < limit; ++i) out.push_back(entries[i].first);
        if (warnings)
            warnings->push_back(
                "single site: screened features taken from its own ranking");
        return out;
    }

    std::string warning;
    auto screened = cross_site_common_features(rankings, cfg.screening.top_n,
                                               cfg.screening.target_count, &warning);
    if (!warning.empty() && warnings) warnings->push_back(warning);
    return screened;
}

struct Artifacts {
    fs::path dir;
    std::vector<std::string> files;

    fs::path path(const std::string& name) {
        files.push_back(name);
        return dir / name;
    }
};

void write_feature_sets_json(const fs::path& path,
                             const std::vector<const FeatureSet*>& sets) {
    json j;
    for (const auto* set : sets) j[set->name] = set->features;
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    out << j.dump(2) << '\n';
}

ExperimentReport merge_reports(ExperimentReport a, ExperimentReport b) {
    ExperimentReport merged;
    std::vector<std::string> dropped;
    for (auto& d : a.discarded) dropped.push_back(d.first);
    for (auto& d : b.discarded) dropped.push_back(d.first);
    auto is_dropped = [&](const ExperimentCell& c) {
        return std::find(dropped.begin(), dropped.end(), c.spec.name()) != dropped.end();
    };
    for (auto& c : a.cells)
        if (!is_dropped(c)) merged.cells.push_back(std::move(c));
    for (auto& c : b.cells)
        if (!is_dropped(c)) merged.cells.push_back(std::move(c));
    merged.discarded = std::move(a.discarded);
    for (auto& d : b.discarded) merged.discarded.push_back(std::move(d));
    return merged;
}

json validation_to_json(const PartitionValidation& v) {
    const auto stats_json = [](const std::optional<PartitionPeriodStats>& s) -> json {
        if (!s) return nullptr;
        return {{"slope", s->slope},
                {"intercept", s->intercept},
                {"r2", s->r2},
                {"slope_violation", s->slope_violation},
                {"negative_t_fraction", s->negative_t_fraction},
                {"n", s->n}};
    };
    json j;
    j["night_holdout"] = stats_json(v.night_holdout);
    j["winter"] = stats_json(v.winter);
    j["flood"] = stats_json(v.flood);
    if (v.warning) j["warning"] = *v.warning;
    return j;
}

}  // namespace

PreparedData prepare_data(const RunConfig& cfg, std::uint64_t seed) {
    PreparedData data;
    std::vector<FluxDataset> datasets;
    for (const auto& site : cfg.sites) {
        FluxDataset ds = ingest_site(site, cfg);
        datasets.push_back(preprocess_site(std::move(ds), site, cfg, &data.warnings));
    }
    const auto screened = screen_features(datasets, cfg, &data.warnings);
    data.sets = build_feature_sets(datasets, cfg.f_e_features, screened);

    for (std::size_t i = 0; i < datasets.size(); ++i) {
        const auto& site = cfg.sites[i];
        PeriodMasks masks = compute_period_masks(
            datasets[i], cfg.cv.holdout_fraction,
            derive_seed(seed, {"holdout", site.id}), &data.warnings);
        data.sites.push_back(PreparedSite{std::move(datasets[i]), std::move(masks)});
    }
    return data;
}

void run_pipeline(const RunConfig& cfg, const PipelineOptions& options) {
    cfg.validate();
    const std::uint64_t seed = options.seed_override.value_or(cfg.cv.seed);
    Artifacts artifacts;
    artifacts.dir = options.out_override.value_or(cfg.output_dir);
    fs::create_directories(artifacts.dir);

    std::string current_stage = "ingest";
    try {
        // --- ingest ---------------------------------------------------------
        log_line("stage ingest: " + std::to_string(cfg.sites.size()) + " site(s)");
        std::vector<FluxDataset> ingested;
        for (const auto& site : cfg.sites) {
            ingested.push_back(ingest_site(site, cfg));
            save_csv_file(ingested.back(),
                          artifacts.path("dataset_" + site.id + ".csv").string());
        }

        json manifest;
        manifest["artifact"] = "etpart";
        manifest["version"] = "0.1.0";
        manifest["config_hash"] = config_hash(cfg);
        manifest["seed"] = seed;
        manifest["kernel_backend"] = std::string(kernels::backend_name(kernels::active_backend()));
        manifest["stage"] = std::string(stage_name(options.stage));
        manifest["config"] = json::parse(config_to_json_text(cfg));

        const auto finish = [&](const std::string& status) {
            manifest["status"] = status;
            std::sort(artifacts.files.begin(), artifacts.files.end());
            manifest["files"] = artifacts.files;
            std::ofstream out(artifacts.dir / "manifest.json");
            out << manifest.dump(2) << '\n';
        };

        if (options.stage == Stage::ingest) {
            finish("complete");
            return;
        }

        // --- prep -----------------------------------------------------------
        current_stage = "prep";
        log_line("stage prep: preprocessing and feature screening");
        PreparedData data;
        {
            std::vector<FluxDataset> datasets;
            std::vector<std::string> warnings;
            for (std::size_t i = 0; i < cfg.sites.size(); ++i)
                datasets.push_back(preprocess_site(std::move(ingested[i]), cfg.sites[i],
                                                   cfg, &warnings));
            const auto screened = screen_features(datasets, cfg, &warnings);
            data.sets = build_feature_sets(datasets, cfg.f_e_features, screened);
            for (std::size_t i = 0; i < datasets.size(); ++i) {
                PeriodMasks masks = compute_period_masks(
                    datasets[i], cfg.cv.holdout_fraction,
                    derive_seed(seed, {"holdout", cfg.sites[i].id}), &warnings);
                data.sites.push_back(
                    PreparedSite{std::move(datasets[i]), std::move(masks)});
            }
            data.warnings = std::move(warnings);
        }
        for (const auto& w : data.warnings) log_line("warning: " + w);
        for (std::size_t i = 0; i < data.sites.size(); ++i)
            save_csv_file(data.sites[i].ds,
                          artifacts.path("prepared_" + cfg.sites[i].id + ".csv").string());
        write_feature_sets_json(artifacts.path("feature_sets.json"),
                                {&data.sets.f_e, &data.sets.f_25});
        manifest["warnings"] = data.warnings;

        if (options.stage == Stage::prep) {
            finish("complete");
            return;
        }

        // --- compare ---------------------------------------------------------
        current_stage = "compare";
        const auto specs = cfg.effective_model_specs();
        std::vector<FeatureSet> base_sets = {data.sets.f_e, data.sets.f_25};
        log_line("stage compare: " + std::to_string(specs.size()) + " spec(s) x " +
                 std::to_string(base_sets.size()) + " feature set(s)");
        ExperimentReport report =
            compare_models(data.sites, specs, base_sets, seed, cfg.cv.k, options.jobs);
        for (const auto& [model, reason] : report.discarded)
            log_line("discarded " + model + ": " + reason);

        write_report(report, ReportFormat::csv, artifacts.path("report.csv").string());
        write_report(report, ReportFormat::json, artifacts.path("report.json").string());
        write_plotdata_compare(report, artifacts.path("plotdata_compare.csv").string());

        if (options.stage == Stage::compare) {
            finish("complete");
            return;
        }

        // --- rfe --------------------------------------------------------------
        current_stage = "rfe";
        log_line("stage rfe: eliminating from " + data.sets.f_25.name + " (" +
                 std::to_string(data.sets.f_25.features.size()) + " features)");
        std::vector<FeatureSet> optimal_sets;
        for (std::size_t i = 0; i < data.sites.size(); ++i) {
            const auto& site = data.sites[i];
            const auto rows = evaluation_rows(site.ds, site.masks.night_train);
            const FoldPlan plan = kfold_split(
                rows.size(), cfg.cv.k,
                derive_seed(seed, {"folds", site.ds.site_id()}));
            const RfeTrace trace = rfe_site(site.ds, site.masks, data.sets.f_25,
                                            cfg.rfe.spec, plan, cfg.rfe.tolerance);
            optimal_sets.push_back(trace.optimal_set);
            const auto trace_path =
                artifacts.path("rfe_" + cfg.sites[i].id + ".json");
            std::ofstream out(trace_path);
            if (!out)
                throw std::runtime_error("cannot write '" + trace_path.string() + "'");
            out << rfe_trace_to_json_text(trace) << '\n';
            write_plotdata_rfe(
                trace, artifacts.path("plotdata_rfe_" + cfg.sites[i].id + ".csv").string());
            log_line("site " + cfg.sites[i].id + ": optimal set has " +
                     std::to_string(trace.optimal_set.features.size()) + " features");
        }

        FeatureSet f_rfe;
        if (optimal_sets.size() == 1) {
            f_rfe = FeatureSet{"F_RFE", optimal_sets.front().features};
            log_line("single site: F_RFE equals its optimal set");
        } else {
            std::string warning;
            f_rfe = merge_sites(optimal_sets, &warning);
            if (!warning.empty()) log_line("warning: " + warning);
        }
        write_feature_sets_json(artifacts.path("feature_sets_final.json"),
                                {&data.sets.f_e, &data.sets.f_25, &f_rfe});

        if (options.stage == Stage::rfe) {
            finish("complete");
            return;
        }

        // --- final comparison + partition -------------------------------------
        current_stage = "partition";
        if (!f_rfe.features.empty()) {
            log_line("stage partition: final comparison on F_RFE");
            std::vector<ModelSpec> surviving;
            for (const auto& spec : specs) {
                const bool dropped =
                    std::any_of(report.discarded.begin(), report.discarded.end(),
                                [&](const auto& d) { return d.first == spec.name(); });
                if (!dropped) surviving.push_back(spec);
            }
            std::vector<FeatureSet> rfe_sets = {f_rfe};
            ExperimentReport final_report = compare_models(
                data.sites, surviving, rfe_sets, seed, cfg.cv.k, options.jobs);
            report = merge_reports(std::move(report), std::move(final_report));
            write_report(report, ReportFormat::csv, (artifacts.dir / "report.csv").string());
            write_report(report, ReportFormat::json,
                         (artifacts.dir / "report.json").string());
            write_plotdata_compare(report, (artifacts.dir / "plotdata_compare.csv").string());
        } else {
            log_line("warning: empty F_RFE, partitioning from the base comparison");
        }

        json validations = json::object();
        for (std::size_t i = 0; i < data.sites.size(); ++i) {
            const auto& site = data.sites[i];
            ExperimentReport site_report;
            for (const auto& cell : report.cells)
                if (cell.site_id == site.ds.site_id()) site_report.cells.push_back(cell);
            const auto ranking = rank_models(site_report, Period::night, "adj_r2");
            if (ranking.empty())
                throw std::runtime_error("no rankable model for site " +
                                         site.ds.site_id());
            const auto& best = ranking.front();
            const auto cell_it = std::find_if(
                site_report.cells.begin(), site_report.cells.end(),
                [&](const ExperimentCell& c) {
                    return c.spec.name() == best.model && c.feature_set == best.feature_set;
                });
            const FeatureSet* chosen_set = nullptr;
            for (const auto* s : {&data.sets.f_e, &data.sets.f_25, &f_rfe})
                if (s->name == best.feature_set) chosen_set = s;
            if (!chosen_set || cell_it == site_report.cells.end())
                throw std::runtime_error("cannot resolve the top-ranked cell for site " +
                                         site.ds.site_id());
            log_line("site " + site.ds.site_id() + ": partitioning with " + best.model +
                     " on " + best.feature_set);

            const TrainedModel model =
                train_e_model(site.ds, site.masks, *chosen_set, cell_it->spec);
            const auto records = partition_et(site.ds, model);
            const auto validation = validate_partition(records, site.masks);
            if (validation.warning) log_line("warning: " + *validation.warning);
            validations[site.ds.site_id()] = validation_to_json(validation);
            validations[site.ds.site_id()]["model"] = best.model;
            validations[site.ds.site_id()]["feature_set"] = best.feature_set;
            write_partition_csv(
                records, site.masks,
                artifacts.path("partition_" + cfg.sites[i].id + ".csv").string());
        }
        manifest["partition_validation"] = validations;
        finish("complete");
    } catch (...) {
        json failed;
        failed["artifact"] = "etpart";
        failed["status"] = "incomplete";
        failed["failed_stage"] = current_stage;
        failed["config_hash"] = config_hash(cfg);
        failed["seed"] = seed;
        std::ofstream out(artifacts.dir / "manifest.json");
        out << failed.dump(2) << '\n';
        throw;
    }
}

}  // namespace etp
