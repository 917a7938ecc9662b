#include <doctest.h>

#include <algorithm>
#include <set>
#include <stdexcept>

#include "etp/rfe.hpp"
#include "etp/rng.hpp"
#include "etp/synthetic.hpp"

using namespace etp;

namespace {

// Trace with prescribed night-holdout R2 values per iteration; feature sets
// shrink from the full set to a single feature.
RfeTrace fixture_trace(const std::vector<double>& r2s) {
    RfeTrace trace;
    trace.site_id = "FIX";
    std::vector<std::string> features;
    for (std::size_t i = 0; i < r2s.size(); ++i)
        features.push_back("f" + std::to_string(i));
    for (std::size_t i = 0; i < r2s.size(); ++i) {
        RfeIteration iter;
        iter.feature_set.assign(features.begin(),
                                features.end() - static_cast<std::ptrdiff_t>(i));
        metrics::MetricReport m;
        m.r2 = r2s[i];
        m.adj_r2 = r2s[i];
        iter.cv_metrics.night = m;
        if (i + 1 < r2s.size())
            iter.removed_feature = iter.feature_set.back();
        trace.iterations.push_back(std::move(iter));
    }
    return trace;
}

struct RfeFixture {
    FluxDataset ds;
    PeriodMasks masks;
    FoldPlan plan;
};

RfeFixture rfe_site_fixture(std::uint64_t seed) {
    SyntheticSpec spec;
    spec.site_id = "RFE";
    spec.seed = seed;
    spec.n_days = 6;
    spec.noise_std = 0.02;
    spec.n_noise_features = 3;
    FluxDataset ds = generate_synthetic(spec);
    PeriodMasks masks = compute_period_masks(ds, 0.2, seed * 7 + 1);
    const auto rows = evaluation_rows(ds, masks.night_train);
    FoldPlan plan = kfold_split(rows.size(), 5, seed * 13 + 2);
    return {std::move(ds), std::move(masks), std::move(plan)};
}

ModelSpec small_gbdt() {
    ModelSpec spec;
    spec.kind = ModelKind::gbdt;
    spec.gbdt.n_trees = 40;
    spec.gbdt.max_depth = 3;
    spec.gbdt.min_samples_leaf = 5;
    return spec;
}

}  // namespace

TEST_SUITE("rfe") {

TEST_CASE("trace walks from the full set down to one feature") {
    const auto fx = rfe_site_fixture(3);
    const FeatureSet start{"start", {"RNET", "VPD", "u*", "TW_1", "noise_1"}};
    const auto trace = rfe_site(fx.ds, fx.masks, start, small_gbdt(), fx.plan);

    REQUIRE(trace.iterations.size() == 5);
    for (std::size_t i = 0; i < 5; ++i)
        CHECK(trace.iterations[i].feature_set.size() == 5 - i);
    CHECK(!trace.iterations.back().removed_feature.has_value());

    // each step removes exactly the recorded feature and nothing else
    for (std::size_t i = 0; i + 1 < 5; ++i) {
        const auto& cur = trace.iterations[i].feature_set;
        const auto& next = trace.iterations[i + 1].feature_set;
        REQUIRE(trace.iterations[i].removed_feature.has_value());
        const auto& removed = *trace.iterations[i].removed_feature;
        CHECK(std::find(cur.begin(), cur.end(), removed) != cur.end());
        CHECK(std::find(next.begin(), next.end(), removed) == next.end());
        const std::set<std::string> cur_set(cur.begin(), cur.end());
        for (const auto& f : next) CHECK(cur_set.count(f) == 1);
    }

    // importances are normalized over the current set
    for (const auto& iter : trace.iterations) {
        CHECK(iter.normalized_importance.size() == iter.feature_set.size());
        double total = 0.0;
        for (const auto& [_, v] : iter.normalized_importance) {
            CHECK(v >= 0.0);
            total += v;
        }
        CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
    }

    // optimal set is one of the trace's iterations
    bool member = false;
    for (const auto& iter : trace.iterations)
        member = member || iter.feature_set == trace.optimal_set.features;
    CHECK(member);
}

TEST_CASE("zero-importance features go first") {
    const auto fx = rfe_site_fixture(4);
    // noise features carry no signal; one of them must be the first victim
    const FeatureSet start{"start",
                           {"RNET", "VPD", "u*", "TW_1", "noise_1", "noise_2"}};
    const auto trace = rfe_site(fx.ds, fx.masks, start, small_gbdt(), fx.plan);
    REQUIRE(trace.iterations[0].removed_feature.has_value());
    const auto& first = *trace.iterations[0].removed_feature;
    CHECK(first.substr(0, 5) == "noise");
}

TEST_CASE("non-tree specs are rejected") {
    const auto fx = rfe_site_fixture(5);
    ModelSpec linear;
    linear.kind = ModelKind::linear;
    const FeatureSet start{"start", {"RNET", "VPD"}};
    CHECK_THROWS_AS((void)rfe_site(fx.ds, fx.masks, start, linear, fx.plan),
                    std::invalid_argument);
}

TEST_CASE("stopping rule on the hand-walked fixture") {
    const auto trace = fixture_trace({0.900, 0.899, 0.895, 0.800, 0.600});
    const auto optimal = select_optimal(trace, 0.01);
    CHECK(optimal.features.size() == 3);  // the set preceding the 10.6% drop
}

TEST_CASE("constant trace returns the singleton") {
    const auto trace = fixture_trace({0.9, 0.9, 0.9, 0.9});
    CHECK(select_optimal(trace, 0.01).features.size() == 1);
}

TEST_CASE("a drop of exactly one percent does not trigger") {
    const auto trace = fixture_trace({0.900, 0.891, 0.8821});  // two exact 1% drops
    CHECK(select_optimal(trace, 0.01).features.size() == 1);
}

TEST_CASE("negative baseline is rejected") {
    const auto trace = fixture_trace({-0.1, -0.2});
    CHECK_THROWS_AS((void)select_optimal(trace, 0.01), std::invalid_argument);
}

TEST_CASE("cross-site merge fixture") {
    const std::vector<FeatureSet> sets = {{"S1", {"A", "B", "C"}},
                                          {"S2", {"A", "C", "D"}},
                                          {"S3", {"D", "E"}},
                                          {"S4", {"B"}}};
    const auto merged = merge_sites(sets);
    CHECK(merged.features == std::vector<std::string>{"A", "B", "C", "D"});
    CHECK(merged.name == "F_RFE");
}

TEST_CASE("merge is commutative in the input order") {
    const std::vector<FeatureSet> sets = {{"S1", {"A", "B", "C"}},
                                          {"S2", {"A", "C", "D"}},
                                          {"S3", {"D", "E"}},
                                          {"S4", {"B"}}};
    const auto base = merge_sites(sets).features;
    std::vector<std::size_t> order = {0, 1, 2, 3};
    Rng rng(6);
    for (int trial = 0; trial < 8; ++trial) {
        rng.shuffle(order);
        std::vector<FeatureSet> permuted;
        for (const auto i : order) permuted.push_back(sets[i]);
        CHECK(merge_sites(permuted).features == base);
    }
}

TEST_CASE("merge edge cases") {
    const std::vector<FeatureSet> identical = {{"S1", {"X", "Y"}}, {"S2", {"X", "Y"}}};
    CHECK(merge_sites(identical).features == std::vector<std::string>{"X", "Y"});

    const std::vector<FeatureSet> disjoint = {{"S1", {"A"}}, {"S2", {"B"}}};
    std::string warning;
    const auto empty = merge_sites(disjoint, &warning);
    CHECK(empty.features.empty());
    CHECK(!warning.empty());

    const std::vector<FeatureSet> single = {{"S1", {"A"}}};
    CHECK_THROWS_AS((void)merge_sites(single), std::invalid_argument);
}

TEST_CASE("importance classification against the published thresholds") {
    const std::map<std::string, double> wp = {
        {"H", 0.440},   {"u*", 0.186},  {"RNET", 0.097}, {"VPD", 0.054},
        {"RH", 0.047},  {"DOY", 0.034}, {"year", 0.022}, {"TA", 0.017},
        {"uw", 0.017},  {"wm", 0.014},  {"uu", 0.013},   {"WD", 0.010},
        {"TS", 0.009},  {"time", 0.007}, {"TW", 0.006},  {"sos", 0.004},
        {"ER", 0.004},  {"WT", 0.004},  {"ts", 0.004},   {"u", 0.003},
        {"rho", 0.003}, {"vv", 0.003},  {"ze", 0.003}};
    const auto classes = classify_importance(wp);
    CHECK(classes.at("H") == ImportanceClass::high);
    CHECK(classes.at("u*") == ImportanceClass::significant);
    CHECK(classes.at("RNET") == ImportanceClass::significant);
    CHECK(classes.at("VPD") == ImportanceClass::significant);
    CHECK(classes.at("RH") == ImportanceClass::significant);
    CHECK(classes.at("WD") == ImportanceClass::minor);
    CHECK(classes.at("DOY") == ImportanceClass::minor);

    // 5 features rank highly-or-significantly important at WP
    int counted = 0;
    for (const auto& [_, c] : classes)
        if (c != ImportanceClass::minor) ++counted;
    CHECK(counted == 5);
}

TEST_CASE("classification rejects unnormalized input") {
    const std::map<std::string, double> bad = {{"A", 0.5}, {"B", 0.2}};
    CHECK_THROWS_AS((void)classify_importance(bad), std::invalid_argument);
}

}  // TEST_SUITE
