#include <doctest.h>

#include <sstream>

#include "etp/csv.hpp"
#include "etp/ingest.hpp"

using namespace etp;

namespace {

SiteMeta test_meta() {
    SiteMeta m;
    m.site_id = "T1";
    m.latitude_deg = 38.1;
    m.longitude_deg = -121.65;
    return m;
}

FluxDataset parse(const std::string& text, CsvSchemaConfig cfg = {}) {
    std::istringstream in(text);
    return parse_csv(in, test_meta(), cfg);
}

}  // namespace

TEST_SUITE("ingest") {

TEST_CASE("two-row csv with all cells filled") {
    const auto ds = parse(
        "timestamp,wq,TA\n"
        "2021-01-01T00:00:00,1.5,10\n"
        "2021-01-01T00:30:00,2.5,11\n");
    CHECK(ds.n_records() == 2);
    CHECK(ds.schema() == std::vector<std::string>{"wq", "TA"});
    CHECK(ds.column("wq").get(0) == 1.5);
    CHECK(ds.column("TA").get(1) == 11.0);
}

TEST_CASE("empty cell becomes missing") {
    const auto ds = parse(
        "timestamp,wq,TA\n"
        "2021-01-01T00:00:00,1.5,10\n"
        "2021-01-01T00:30:00,,11\n");
    CHECK(!ds.column("wq").get(1).has_value());
    CHECK(ds.column("TA").get(1).has_value());
}

TEST_CASE("missing sentinels") {
    const auto ds = parse(
        "timestamp,wq,TA\n"
        "2021-01-01T00:00:00,NA,-9999\n"
        "2021-01-01T00:30:00,NaN,-9999.0\n");
    CHECK(!ds.column("wq").get(0).has_value());
    CHECK(!ds.column("wq").get(1).has_value());
    CHECK(!ds.column("TA").get(0).has_value());
    CHECK(!ds.column("TA").get(1).has_value());
}

TEST_CASE("duplicate timestamp names the stamp") {
    CHECK_THROWS_WITH_AS(parse("timestamp,wq\n"
                               "2021-01-01T00:00:00,1\n"
                               "2021-01-01T00:30:00,2\n"
                               "2021-01-01T00:30:00,3\n"),
                         doctest::Contains("2021-01-01T00:30:00"),
                         std::invalid_argument);
}

TEST_CASE("non-numeric cell names row and column") {
    CHECK_THROWS_WITH_AS(parse("timestamp,wq\n"
                               "2021-01-01T00:00:00,abc\n"),
                         doctest::Contains("wq"), std::invalid_argument);
}

TEST_CASE("missing timestamp column is rejected") {
    CHECK_THROWS_AS(parse("time,wq\n2021-01-01T00:00:00,1\n"), std::invalid_argument);
}

TEST_CASE("epoch timestamps and local offset") {
    CsvSchemaConfig cfg;
    cfg.timestamp_format = TimestampFormat::epoch_seconds;
    cfg.utc_offset_hours = -8.0;  // file is local, site is UTC-8
    const auto ds = parse("timestamp,wq\n3600,1\n", cfg);
    // local 01:00 means UTC 09:00
    CHECK(ds.timestamps()[0] == 3600 + 8 * 3600);
}

TEST_CASE("round trip through serialization") {
    const auto ds = parse(
        "timestamp,wq,TA,VPD\n"
        "2021-01-01T00:00:00,1.5,10.25,\n"
        "2021-01-01T00:30:00,,11,0.125\n"
        "2021-01-01T01:00:00,2.25,NA,0.5\n");
    std::ostringstream out;
    serialize_csv(ds, out);
    const auto again = parse(out.str());
    CHECK(ds == again);
}

TEST_CASE("resample: two 15-minute values average") {
    const auto ds = parse(
        "timestamp,wq\n"
        "2021-01-01T00:00:00,1\n"
        "2021-01-01T00:15:00,3\n");
    const auto r = resample_half_hourly(ds);
    CHECK(r.n_records() == 1);
    CHECK(r.column("wq").get(0) == 2.0);
}

TEST_CASE("resample: already half-hourly is identity") {
    const auto ds = parse(
        "timestamp,wq\n"
        "2021-01-01T00:00:00,1\n"
        "2021-01-01T00:30:00,2\n"
        "2021-01-01T01:00:00,3\n");
    CHECK(resample_half_hourly(ds) == ds);
}

TEST_CASE("resample: mean over present values only") {
    // bin holds (1.0, missing, 3.0, 5.0) -> 3.0
    const auto ds = parse(
        "timestamp,wq\n"
        "2021-01-01T00:00:00,1\n"
        "2021-01-01T00:07:00,\n"
        "2021-01-01T00:14:00,3\n"
        "2021-01-01T00:21:00,5\n");
    const auto r = resample_half_hourly(ds);
    CHECK(r.n_records() == 1);
    CHECK(r.column("wq").get(0) == 3.0);
}

TEST_CASE("resample: source gaps become all-missing records") {
    const auto ds = parse(
        "timestamp,wq\n"
        "2021-01-01T00:10:00,1\n"
        "2021-01-01T02:10:00,5\n");
    const auto r = resample_half_hourly(ds);
    CHECK(r.n_records() == 5);  // 00:00 .. 02:00 inclusive
    CHECK(r.timestamps().front() == *parse_iso8601("2021-01-01T00:00:00"));
    CHECK(r.column("wq").get(0) == 1.0);
    for (std::size_t i = 1; i < 4; ++i) CHECK(!r.column("wq").get(i).has_value());
    CHECK(r.column("wq").get(4) == 5.0);
}

TEST_CASE("resample is idempotent") {
    const auto ds = parse(
        "timestamp,wq\n"
        "2021-01-01T00:01:00,1\n"
        "2021-01-01T00:16:00,2\n"
        "2021-01-01T00:31:00,3\n"
        "2021-01-01T01:59:00,4\n");
    const auto once = resample_half_hourly(ds);
    CHECK(resample_half_hourly(once) == once);
    // record count equals the number of half-hour bins spanned
    CHECK(once.n_records() == 4);
}

TEST_CASE("completeness fractions") {
    const auto ds = parse(
        "timestamp,wq,TA\n"
        "2021-01-01T00:00:00,1,\n"
        "2021-01-01T00:30:00,2,\n"
        "2021-01-01T01:00:00,,\n"
        "2021-01-01T01:30:00,4,\n"
        "2021-01-01T02:00:00,5,\n");
    CHECK(completeness(ds, "wq") == 0.8);
    CHECK(completeness(ds, "TA") == 0.0);
    CHECK_THROWS_AS((void)completeness(ds, "nope"), std::invalid_argument);
}

TEST_CASE("out-of-order rows are sorted by timestamp") {
    const auto ds = parse(
        "timestamp,wq\n"
        "2021-01-01T01:00:00,2\n"
        "2021-01-01T00:00:00,1\n");
    CHECK(ds.timestamps()[0] < ds.timestamps()[1]);
    CHECK(ds.column("wq").get(0) == 1.0);
}

}  // TEST_SUITE
