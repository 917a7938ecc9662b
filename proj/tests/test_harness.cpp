#include <doctest.h>

#include <set>
#include <stdexcept>

#include "etp/harness.hpp"
#include "etp/report.hpp"
#include "etp/synthetic.hpp"

using namespace etp;

namespace {

PreparedSite synthetic_site(std::uint64_t seed, const std::string& id,
                            bool with_flood, double noise = 0.0) {
    SyntheticSpec spec;
    spec.site_id = id;
    spec.seed = seed;
    spec.n_days = 8;
    spec.noise_std = noise;
    spec.n_noise_features = 0;
    if (with_flood) {
        spec.flood_start = CivilDate{2021, 2, 15};
        spec.greenup_date = CivilDate{2021, 2, 19};
    }
    FluxDataset ds = generate_synthetic(spec);
    PeriodMasks masks = compute_period_masks(ds, 0.2, seed + 1);
    return PreparedSite{std::move(ds), std::move(masks)};
}

FeatureSet driver_features() {
    return FeatureSet{"drivers", {"RNET", "VPD", "u*", "TW_1"}};
}

}  // namespace

TEST_SUITE("harness") {

TEST_CASE("kfold worked examples") {
    const auto singletons = kfold_split(10, 10, 3);
    std::set<int> folds(singletons.assignment.begin(), singletons.assignment.end());
    CHECK(folds.size() == 10);

    const auto plan = kfold_split(10, 3, 3);
    std::vector<std::size_t> sizes(3, 0);
    for (const int f : plan.assignment) sizes[static_cast<std::size_t>(f)] += 1;
    std::sort(sizes.begin(), sizes.end());
    CHECK(sizes == std::vector<std::size_t>{3, 3, 4});

    const auto again = kfold_split(10, 3, 3);
    CHECK(plan.assignment == again.assignment);

    CHECK_THROWS_AS((void)kfold_split(5, 6, 1), std::invalid_argument);
    CHECK_THROWS_AS((void)kfold_split(5, 1, 1), std::invalid_argument);
}

TEST_CASE("kfold covers every record exactly once with balanced folds") {
    for (const auto [n, k] : std::vector<std::pair<std::size_t, int>>{
             {100, 10}, {101, 10}, {47, 7}, {12, 5}}) {
        const auto plan = kfold_split(n, k, 9);
        std::vector<std::size_t> sizes(static_cast<std::size_t>(k), 0);
        for (const int f : plan.assignment) {
            REQUIRE(f >= 0);
            REQUIRE(f < k);
            sizes[static_cast<std::size_t>(f)] += 1;
        }
        const auto [lo, hi] = std::minmax_element(sizes.begin(), sizes.end());
        CHECK(*hi - *lo <= 1);
    }
}

TEST_CASE("cross_validate recovers an exact linear generator") {
    const auto site = synthetic_site(5, "CV1", true, 0.0);
    const auto rows = evaluation_rows(site.ds, site.masks.night_train);
    const auto plan = kfold_split(rows.size(), 10, 17);
    ModelSpec spec;
    spec.kind = ModelKind::linear;
    const auto cell = cross_validate(site.ds, site.masks, driver_features(), spec, plan);
    REQUIRE(cell.metrics.night.has_value());
    CHECK(cell.metrics.night->r2 >= 0.999);
    REQUIRE(cell.metrics.winter.has_value());
    REQUIRE(cell.metrics.flood.has_value());
    CHECK(cell.wall_time_seconds >= 0.0);
    CHECK(cell.metrics.night->n_features == 4);
}

TEST_CASE("degenerate gbdt scores at or below zero on the holdout") {
    const auto site = synthetic_site(6, "CV2", false, 0.05);
    const auto rows = evaluation_rows(site.ds, site.masks.night_train);
    const auto plan = kfold_split(rows.size(), 10, 18);
    ModelSpec spec;
    spec.kind = ModelKind::gbdt;
    spec.gbdt.learning_rate = 0.0;
    spec.gbdt.n_trees = 1;
    const auto cell = cross_validate(site.ds, site.masks, driver_features(), spec, plan);
    CHECK(cell.metrics.night->r2 <= 0.0);
}

TEST_CASE("site without flood has absent flood metrics") {
    const auto site = synthetic_site(7, "CV3", false, 0.0);
    const auto rows = evaluation_rows(site.ds, site.masks.night_train);
    const auto plan = kfold_split(rows.size(), 5, 19);
    ModelSpec spec;
    spec.kind = ModelKind::linear;
    const auto cell = cross_validate(site.ds, site.masks, driver_features(), spec, plan);
    CHECK(!cell.metrics.flood.has_value());
    CHECK(cell.metrics.night.has_value());
    CHECK(cell.metrics.winter.has_value());
}

TEST_CASE("compare_models grid cardinality and discard rule") {
    const std::vector<PreparedSite> sites = {synthetic_site(8, "S1", true, 0.02),
                                             synthetic_site(9, "S2", false, 0.02)};
    ModelSpec linear;
    linear.kind = ModelKind::linear;
    ModelSpec degenerate;
    degenerate.kind = ModelKind::gbdt;
    degenerate.gbdt.learning_rate = 0.0;
    degenerate.gbdt.n_trees = 1;

    const std::vector<FeatureSet> fsets = {driver_features()};

    SUBCASE("no discards -> full grid") {
        const std::vector<ModelSpec> specs = {linear, linear};
        const auto report = compare_models(sites, specs, fsets, 42, 5);
        CHECK(report.cells.size() == 4);
        CHECK(report.discarded.empty());
    }

    SUBCASE("negative holdout R2 moves the spec to discarded") {
        const std::vector<ModelSpec> specs = {linear, degenerate};
        const auto report = compare_models(sites, specs, fsets, 42, 5);
        CHECK(report.cells.size() == 2);  // only the linear cells survive
        REQUIRE(report.discarded.size() == 1);
        CHECK(report.discarded[0].first == "gbdt");
        CHECK(report.discarded[0].second.find("night-holdout R2") != std::string::npos);
        for (const auto& cell : report.cells) CHECK(cell.spec.name() == "linear");
    }

    SUBCASE("empty spec list -> empty report") {
        const auto report = compare_models(sites, {}, fsets, 42, 5);
        CHECK(report.cells.empty());
        CHECK(report.discarded.empty());
    }
}

TEST_CASE("report content is schedule independent") {
    const std::vector<PreparedSite> sites = {synthetic_site(10, "S1", true, 0.02),
                                             synthetic_site(11, "S2", false, 0.02)};
    ModelSpec linear;
    linear.kind = ModelKind::linear;
    ModelSpec ridge;
    ridge.kind = ModelKind::ridge;
    ModelSpec gbdt;
    gbdt.kind = ModelKind::gbdt;
    gbdt.gbdt.n_trees = 10;
    const std::vector<ModelSpec> specs = {linear, ridge, gbdt};
    const std::vector<FeatureSet> fsets = {driver_features()};

    const auto serial = compare_models(sites, specs, fsets, 42, 5, 1);
    const auto parallel = compare_models(sites, specs, fsets, 42, 5, 4);
    CHECK(reports_equivalent(serial, parallel));
    CHECK(report_to_json_text(serial) == report_to_json_text(parallel));
}

TEST_CASE("rank_models ordering and tie-breaks") {
    ExperimentReport report;
    const auto cell = [](const std::string& site, const std::string& fset, double adj,
                         double rmse, double wall) {
        ExperimentCell c;
        c.site_id = site;
        c.spec.kind = ModelKind::linear;
        c.feature_set = fset;
        metrics::MetricReport m;
        m.r2 = adj;
        m.adj_r2 = adj;
        m.rmse = rmse;
        m.slope = 1.0;
        c.metrics.night = m;
        c.wall_time_seconds = wall;
        return c;
    };
    report.cells.push_back(cell("S", "A", 0.94, 0.19, 22.8));
    report.cells.push_back(cell("S", "B", 0.91, 0.18, 2.2));
    report.cells.push_back(cell("S", "C", 0.94, 0.20, 2.2));

    const auto by_adj = rank_models(report, Period::night, "adj_r2");
    CHECK(by_adj[0].feature_set == "C");  // tie on 0.94 -> faster cell first
    CHECK(by_adj[1].feature_set == "A");
    CHECK(by_adj[2].feature_set == "B");

    const auto by_rmse = rank_models(report, Period::night, "rmse");
    CHECK(by_rmse[0].feature_set == "B");  // ascending

    CHECK_THROWS_AS((void)rank_models(report, Period::night, "mae"),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)period_from_name("dusk"), std::invalid_argument);

    // absent periods are skipped entirely
    const auto flood_rank = rank_models(report, Period::flood, "adj_r2");
    CHECK(flood_rank.empty());
}

}  // TEST_SUITE
