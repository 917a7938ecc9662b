#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "etp/preprocess.hpp"
#include "helpers.hpp"

using namespace etp;

TEST_SUITE("preprocess") {

TEST_CASE("completeness filter boundary") {
    auto ds = helpers::dataset(helpers::meta(), "2021-01-01T00:00:00", 100,
                               {"wq", "A", "B", "C"});
    std::vector<std::optional<double>> a(100, 1.0), b(100, 1.0), wq(100, 1.0);
    for (int i = 0; i < 21; ++i) a[i] = std::nullopt;  // completeness 0.79
    for (int i = 0; i < 20; ++i) b[i] = std::nullopt;  // completeness 0.80
    helpers::fill(ds, "wq", wq);
    helpers::fill(ds, "A", a);
    helpers::fill(ds, "B", b);
    helpers::fill(ds, "C", std::vector<std::optional<double>>(100, 2.0));

    const auto retained = filter_by_completeness(ds, 0.8);
    CHECK(std::find(retained.begin(), retained.end(), "A") == retained.end());
    CHECK(std::find(retained.begin(), retained.end(), "B") != retained.end());
    CHECK(std::find(retained.begin(), retained.end(), "C") != retained.end());

    // fully complete schema stays unchanged
    auto full = helpers::dataset(helpers::meta(), "2021-01-01T00:00:00", 10,
                                 {"wq", "X"});
    helpers::fill(full, "wq", std::vector<std::optional<double>>(10, 1.0));
    helpers::fill(full, "X", std::vector<std::optional<double>>(10, 2.0));
    CHECK(filter_by_completeness(full, 0.8) == full.schema());
    CHECK_THROWS_AS((void)filter_by_completeness(full, 0.0), std::invalid_argument);
}

TEST_CASE("depth consolidation means present values") {
    auto ds = helpers::dataset(helpers::meta(), "2021-01-01T00:00:00", 3,
                               {"wq", "TW_1", "TW_2", "TW_3"});
    helpers::fill(ds, "wq", std::vector<std::optional<double>>(3, 1.0));
    helpers::fill(ds, "TW_1", std::vector<std::optional<double>>{10.0, 10.0, std::nullopt});
    helpers::fill(ds, "TW_2", std::vector<std::optional<double>>{12.0, std::nullopt, std::nullopt});
    helpers::fill(ds, "TW_3", std::vector<std::optional<double>>{14.0, std::nullopt, std::nullopt});

    const auto out = consolidate_depth_profiles(ds, {"TW_1", "TW_2", "TW_3"}, "TW (mean)");
    CHECK(out.column("TW (mean)").get(0) == 12.0);
    CHECK(out.column("TW (mean)").get(1) == 10.0);
    CHECK(!out.column("TW (mean)").get(2).has_value());
    CHECK(!out.has_feature("TW_1"));
    CHECK(out.schema() == std::vector<std::string>{"wq", "TW (mean)"});

    CHECK_THROWS_AS(
        (void)consolidate_depth_profiles(ds, {"TW_1", "missing"}, "x"),
        std::invalid_argument);
}

TEST_CASE("single-member consolidation is a rename in place") {
    auto ds = helpers::dataset(helpers::meta(), "2021-01-01T00:00:00", 2,
                               {"wq", "TS_1", "Z"});
    helpers::fill(ds, "wq", std::vector<std::optional<double>>(2, 1.0));
    helpers::fill(ds, "TS_1", std::vector<std::optional<double>>{3.0, std::nullopt});
    helpers::fill(ds, "Z", std::vector<std::optional<double>>(2, 9.0));
    const auto out = consolidate_depth_profiles(ds, {"TS_1"}, "TS (mean)");
    CHECK(out.schema() == std::vector<std::string>{"wq", "TS (mean)", "Z"});
    CHECK(out.column("TS (mean)").get(0) == 3.0);
    CHECK(!out.column("TS (mean)").get(1).has_value());
}

TEST_CASE("imputation worked examples") {
    auto ds = helpers::dataset(helpers::meta(), "2021-01-01T00:00:00", 3, {"wq", "A"});
    helpers::fill(ds, "wq", std::vector<std::optional<double>>(3, 1.0));
    helpers::fill(ds, "A", std::vector<std::optional<double>>{1.0, std::nullopt, 3.0});

    const auto linear = impute(ds, "A", ImputeStrategy::linear);
    CHECK(linear.column("A").get(1) == 2.0);
    CHECK(linear.column("A").is_imputed(1));
    CHECK(!linear.column("A").is_imputed(0));

    const auto mean = impute(ds, "A", ImputeStrategy::mean);
    CHECK(mean.column("A").get(1) == 2.0);

    auto edges = helpers::dataset(helpers::meta(), "2021-01-01T00:00:00", 3, {"wq", "A"});
    helpers::fill(edges, "wq", std::vector<std::optional<double>>(3, 1.0));
    helpers::fill(edges, "A",
                  std::vector<std::optional<double>>{std::nullopt, 5.0, std::nullopt});
    const auto filled = impute(edges, "A", ImputeStrategy::linear);
    CHECK(filled.column("A").get(0) == 5.0);
    CHECK(filled.column("A").get(2) == 5.0);

    auto empty = helpers::dataset(helpers::meta(), "2021-01-01T00:00:00", 3, {"wq", "A"});
    helpers::fill(empty, "wq", std::vector<std::optional<double>>(3, 1.0));
    CHECK_THROWS_AS((void)impute(empty, "A", ImputeStrategy::mean),
                    std::invalid_argument);
}

TEST_CASE("imputation never alters present values and completes the feature") {
    auto ds = helpers::dataset(helpers::meta(), "2021-01-01T00:00:00", 7, {"wq", "A"});
    helpers::fill(ds, "wq", std::vector<std::optional<double>>(7, 1.0));
    helpers::fill(ds, "A",
                  std::vector<std::optional<double>>{0.5, std::nullopt, 2.5, std::nullopt,
                                                     std::nullopt, 4.0, std::nullopt});
    for (const auto strategy : {ImputeStrategy::mean, ImputeStrategy::linear}) {
        const auto out = impute(ds, "A", strategy);
        CHECK(out.column("A").fully_present());
        CHECK(out.column("A").get(0) == 0.5);
        CHECK(out.column("A").get(2) == 2.5);
        CHECK(out.column("A").get(5) == 4.0);
    }
    // linear interpolates against time between records 2 and 5
    const auto lin = impute(ds, "A", ImputeStrategy::linear);
    CHECK(lin.column("A").get(3) == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(lin.column("A").get(4) == doctest::Approx(3.5).epsilon(1e-12));
}

TEST_CASE("correlation ranking") {
    auto ds = helpers::dataset(helpers::meta(), "2021-01-01T00:00:00", 3,
                               {"wq", "lin", "anti", "flat"});
    helpers::fill(ds, "wq", std::vector<double>{2, 4, 6});
    helpers::fill(ds, "lin", std::vector<double>{1, 2, 3});
    helpers::fill(ds, "anti", std::vector<double>{6, 4, 2});
    helpers::fill(ds, "flat", std::vector<double>{7, 7, 7});

    const auto ranking = correlation_rank(ds, "wq");
    CHECK(ranking.entries.size() == 3);
    // |r| = 1 for both lin and anti; lexicographic tie-break puts anti first
    CHECK(ranking.entries[0].first == "anti");
    CHECK(ranking.entries[0].second == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(ranking.entries[1].first == "lin");
    CHECK(ranking.entries[2].first == "flat");
    CHECK(ranking.entries[2].second == 0.0);
    for (const auto& [name, r] : ranking.entries) {
        CHECK(r >= 0.0);
        CHECK(r <= 1.0);
    }
}

TEST_CASE("correlation rejects zero-variance target and missing values") {
    auto ds = helpers::dataset(helpers::meta(), "2021-01-01T00:00:00", 3, {"wq", "A"});
    helpers::fill(ds, "wq", std::vector<double>{5, 5, 5});
    helpers::fill(ds, "A", std::vector<double>{1, 2, 3});
    CHECK_THROWS_AS((void)correlation_rank(ds, "wq"), std::invalid_argument);

    auto gappy = helpers::dataset(helpers::meta(), "2021-01-01T00:00:00", 3, {"wq", "A"});
    helpers::fill(gappy, "wq", std::vector<double>{1, 2, 3});
    helpers::fill(gappy, "A", std::vector<std::optional<double>>{1.0, std::nullopt, 3.0});
    CHECK_THROWS_AS((void)correlation_rank(gappy, "wq"), std::invalid_argument);
}

TEST_CASE("cross-site common features") {
    CorrelationRanking a{"S1", {{"f1", 0.9}, {"f2", 0.8}, {"f3", 0.7}}};
    CorrelationRanking b{"S2", {{"f2", 0.9}, {"f1", 0.8}, {"f4", 0.7}}};
    const std::vector<CorrelationRanking> rankings = {a, b};
    const auto common = cross_site_common_features(rankings, 3, 2);
    CHECK(common == std::vector<std::string>{"f1", "f2"});

    // identical rankings truncate to target_count by mean rank
    std::vector<CorrelationRanking> same(3);
    for (auto& r : same) {
        r.site_id = "S";
        for (int i = 0; i < 60; ++i)
            r.entries.emplace_back("g" + std::to_string(100 + i), 1.0 - i * 0.01);
    }
    const auto top = cross_site_common_features(same, 50, 25);
    CHECK(top.size() == 25);
    CHECK(top.front() == "g100");

    // disjoint top lists produce an empty result with a warning
    CorrelationRanking c{"S1", {{"x1", 0.9}}};
    CorrelationRanking d{"S2", {{"y1", 0.9}}};
    std::string warning;
    const std::vector<CorrelationRanking> disjoint = {c, d};
    const auto none = cross_site_common_features(disjoint, 3, 2, &warning);
    CHECK(none.empty());
    CHECK(!warning.empty());

    CHECK_THROWS_AS(
        (void)cross_site_common_features(std::span<const CorrelationRanking>{}, 3, 2),
        std::invalid_argument);
    CHECK_THROWS_AS((void)cross_site_common_features(rankings, 2, 3),
                    std::invalid_argument);
}

TEST_CASE("feature set construction") {
    // schema carries the 11 defaults plus extras so validation passes
    std::vector<std::string> schema = {"wq"};
    for (const auto& f : default_f_e_features()) schema.push_back(f);
    schema.push_back("extra1");
    schema.push_back("extra2");
    auto ds = helpers::dataset(helpers::meta(), "2021-01-01T00:00:00", 2, schema);
    const std::vector<FluxDataset> sites = {ds, ds};

    SUBCASE("defaults give 11 features") {
        const auto sets = build_feature_sets(sites, default_f_e_features(), {});
        CHECK(sets.f_e.features.size() == 11);
        CHECK(sets.f_25.features == sets.f_e.features);  // empty screened set
    }

    SUBCASE("union deduplicates, F_E order first") {
        // 25 screened features of which 2 already sit in F_E -> 34 total
        std::vector<std::string> screened = {"VPD", "TA"};
        for (int i = 0; i < 23; ++i) screened.push_back("s" + std::to_string(i));
        const auto sets = build_feature_sets(sites, default_f_e_features(), screened);
        CHECK(sets.f_25.features.size() == 34);
        CHECK(sets.f_25.features[0] == "VPD");  // F_E order preserved
        // F_E is a subset of F_25
        for (const auto& f : sets.f_e.features) CHECK(sets.f_25.contains(f));
    }

    SUBCASE("missing F_E feature names site and feature") {
        auto small = helpers::dataset(helpers::meta(), "2021-01-01T00:00:00", 2,
                                      {"wq", "VPD"});
        const std::vector<FluxDataset> sites2 = {small};
        CHECK_THROWS_WITH_AS(
            (void)build_feature_sets(sites2, default_f_e_features(), {}),
            doctest::Contains("GCC"), std::invalid_argument);
    }
}

TEST_CASE("time features") {
    auto ds = helpers::dataset(helpers::meta(38.1, -121.65, -8.0),
                               "2021-02-15T08:00:00", 2, {"wq"});
    helpers::fill(ds, "wq", std::vector<double>{1, 2});
    const auto out = add_time_features(ds);
    CHECK(out.column("year").get(0) == 2021.0);
    CHECK(out.column("month").get(0) == 2.0);
    CHECK(out.column("DOY").get(0) == 46.0);
    CHECK(out.column("time").get(0) == 0.0);  // local midnight
    CHECK(out.column("time").get(1) == 0.5);
    CHECK(out.has_feature("ze"));
    CHECK(out.column("ze").get(0).value() > 90.0);  // midnight sun below horizon
}

}  // TEST_SUITE
