#include <doctest.h>

#include <cmath>

#include "etp/periods.hpp"
#include "etp/rng.hpp"
#include "etp/solar.hpp"
#include "helpers.hpp"
#include "oracles.hpp"

using namespace etp;

TEST_SUITE("periods") {

TEST_CASE("equator equinox noon and midnight") {
    // Scan 2021-03-20 at the prime meridian minute by minute; the daily
    // minimum should graze 0 and the maximum 180 within a degree.
    double min_z = 180.0, max_z = 0.0;
    const TimePoint day = *parse_iso8601("2021-03-20T00:00:00");
    for (int m = 0; m < 1440; ++m) {
        const double z = solar_zenith_deg(day + m * 60, 0.0, 0.0);
        min_z = std::min(min_z, z);
        max_z = std::max(max_z, z);
    }
    CHECK(min_z < 1.0);
    CHECK(max_z > 179.0);
}

TEST_CASE("matches the independent ephemeris near the delta sites") {
    const TimePoint t = *parse_iso8601("2018-06-21T20:00:00");
    const double ours = solar_zenith_deg(t, 38.1, -121.8);
    const double reference = oracles::meeus_zenith_deg(t, 38.1, -121.8);
    CHECK(std::abs(ours - reference) < 0.5);
    CHECK(ours < 20.0);  // near-noon midsummer sun stands high
}

TEST_CASE("agrees with the ephemeris across a coarse grid") {
    int checked = 0;
    for (const double lat : {-75.0, -45.0, -10.0, 0.0, 20.0, 38.1, 55.0, 80.0}) {
        for (const int month : {1, 4, 7, 10}) {
            for (const int hour : {0, 6, 12, 18}) {
                const CivilDateTime dt{{2019, month, 15}, hour, 0, 0};
                const TimePoint t = to_epoch(dt);
                const double a = solar_zenith_deg(t, lat, -121.0);
                const double b = oracles::meeus_zenith_deg(t, lat, -121.0);
                CHECK(std::abs(a - b) < 0.5);
                ++checked;
            }
        }
    }
    CHECK(checked == 128);
}

TEST_CASE("zenith rejects bad coordinates") {
    CHECK_THROWS_AS((void)solar_zenith_deg(0, 91.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS((void)solar_zenith_deg(0, 0.0, 200.0), std::invalid_argument);
}

TEST_CASE("night mask flips between local noon and midnight") {
    // 2021-06-15, site at UTC-8: local noon = 20:00 UTC, local midnight = 08:00 UTC.
    auto ds = helpers::dataset(helpers::meta(38.1, -121.65, -8.0),
                               "2021-06-15T08:00:00", 25, {"wq"});
    const auto mask = night_mask(ds);
    CHECK(mask[0] == 1);   // local midnight
    CHECK(mask[24] == 0);  // local noon
}

TEST_CASE("night mask requires coordinates") {
    SiteMeta m;
    m.site_id = "nocoords";
    auto ds = helpers::dataset(m, "2021-06-15T00:00:00", 4, {"wq"});
    CHECK_THROWS_AS((void)night_mask(ds), std::invalid_argument);
}

TEST_CASE("night mask is pointwise in the timestamp") {
    auto ds = helpers::dataset(helpers::meta(), "2021-06-15T00:00:00", 48, {"wq"});
    const auto mask = night_mask(ds);
    for (std::size_t i = 0; i < ds.n_records(); ++i) {
        const double z = solar_zenith_deg(ds.timestamps()[i], 38.1, -121.65);
        CHECK(mask[i] == (z > 90.0 ? 1 : 0));
    }
    CHECK(mask_count(mask) > 0);
    CHECK(mask_count(mask) < 48);
}

TEST_CASE("winter mask on calendar months") {
    auto jan = helpers::dataset(helpers::meta(), "2015-01-15T12:00:00", 1, {"wq"});
    CHECK(winter_mask(jan)[0] == 1);
    auto mar = helpers::dataset(helpers::meta(), "2015-03-01T00:00:00", 1, {"wq"});
    CHECK(winter_mask(mar)[0] == 0);
    // 2014-12-31 23:30 local at UTC-8 is 2015-01-01 07:30 UTC; still winter.
    auto eve = helpers::dataset(helpers::meta(38.1, -121.65, -8.0),
                                "2015-01-01T07:30:00", 1, {"wq"});
    CHECK(winter_mask(eve)[0] == 1);
}

TEST_CASE("winter mask is periodic under a one-year shift") {
    auto a = helpers::dataset(helpers::meta(), "2021-02-20T00:00:00", 400, {"wq"});
    const auto base = winter_mask(a);
    std::vector<TimePoint> shifted = a.timestamps();
    for (auto& t : shifted) t += 365 * kSecondsPerDay;  // 2021->2022, both common years
    FluxDataset b(a.meta(), std::move(shifted), a.schema());
    CHECK(winter_mask(b) == base);
}

TEST_CASE("flood mask window membership") {
    auto m = helpers::meta();
    m.flood_start = CivilDate{2010, 10, 1};
    m.greenup_date = CivilDate{2011, 6, 1};
    auto ds = helpers::dataset(m, "2011-01-15T10:00:00", 1, {"wq"});
    CHECK(flood_mask(ds)[0] == 1);

    auto at_greenup = helpers::dataset(m, "2011-06-01T00:00:00", 1, {"wq"});
    CHECK(flood_mask(at_greenup)[0] == 0);  // half-open at greenup
    auto before = helpers::dataset(m, "2010-09-30T23:30:00", 1, {"wq"});
    CHECK(flood_mask(before)[0] == 0);
}

TEST_CASE("site without a flood window warns and returns all-false") {
    auto ds = helpers::dataset(helpers::meta(), "2021-01-01T00:00:00", 10, {"wq"});
    std::string warning;
    const auto mask = flood_mask(ds, &warning);
    CHECK(mask_count(mask) == 0);
    CHECK(!warning.empty());
}

TEST_CASE("inverted flood window is rejected") {
    auto m = helpers::meta();
    m.flood_start = CivilDate{2011, 6, 1};
    m.greenup_date = CivilDate{2010, 10, 1};
    auto ds = helpers::dataset(m, "2011-01-15T10:00:00", 1, {"wq"});
    CHECK_THROWS_AS((void)flood_mask(ds), std::invalid_argument);
}

TEST_CASE("night holdout split counts and determinism") {
    Mask night(150, 0);
    for (std::size_t i = 0; i < 100; ++i) night[i] = 1;
    const auto [train, holdout] = split_night_holdout(night, 0.2, 99);
    CHECK(mask_count(holdout) == 20);
    CHECK(mask_count(train) == 80);
    const auto [train2, holdout2] = split_night_holdout(night, 0.2, 99);
    CHECK(train == train2);
    CHECK(holdout == holdout2);

    // disjoint and exhaustive over the night records
    for (std::size_t i = 0; i < night.size(); ++i) {
        CHECK((train[i] & holdout[i]) == 0);
        CHECK((train[i] | holdout[i]) == night[i]);
    }
}

TEST_CASE("holdout count uses floor") {
    Mask night(11, 1);
    const auto [train, holdout] = split_night_holdout(night, 0.5, 1);
    CHECK(mask_count(holdout) == 5);
    CHECK(mask_count(train) == 6);
}

TEST_CASE("too few night records is rejected") {
    Mask night(9, 1);
    CHECK_THROWS_AS((void)split_night_holdout(night, 0.2, 1), std::invalid_argument);
    Mask enough(10, 1);
    CHECK_THROWS_AS((void)split_night_holdout(enough, 0.0, 1), std::invalid_argument);
}

TEST_CASE("compute_period_masks composes the parts") {
    auto m = helpers::meta(38.1, -121.65, -8.0);
    auto ds = helpers::dataset(m, "2021-02-15T00:00:00", 48 * 4, {"wq"});
    std::vector<std::string> warnings;
    const auto pm = compute_period_masks(ds, 0.2, 7, &warnings);
    CHECK(pm.night.size() == ds.n_records());
    CHECK(mask_count(pm.night) ==
          mask_count(pm.night_train) + mask_count(pm.night_holdout));
    CHECK(!warnings.empty());  // no flood window configured
}

}  // TEST_SUITE
