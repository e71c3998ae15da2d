#include <doctest.h>

#include <stdexcept>

#include <sstream>

#include "spotcast/series_io.hpp"

using namespace spotcast;

namespace {
IngestResult ingest_text(const std::string& text, IngestOptions opt = {}) {
    std::istringstream in(text);
    return ingest_csv(in, opt);
}
}  // namespace

TEST_CASE("two consecutive rows") {
    const auto r = ingest_text(
        "timestamp,price\n"
        "2013-01-01T00:00:00+01:00,40.5\n"
        "2013-01-01T01:00:00+01:00,-3\n");
    REQUIRE(r.series.size() == 2);
    CHECK(r.series.start() == hour_stamp(2013, 1, 1, 0));
    CHECK(r.series.price(1) == -3.0);
    CHECK(r.series.utc_offset_minutes() == 60);
    CHECK(r.report.rows_read == 2);
}

TEST_CASE("out of order names the first offending line") {
    try {
        (void)ingest_text(
            "timestamp,price\n"
            "2013-01-01T00:00:00+01:00,1\n"
            "2013-01-01T02:00:00+01:00,2\n"
            "2013-01-01T01:00:00+01:00,3\n");
        FAIL("expected an error");
    } catch (const IngestError& e) {
        CHECK(e.line() == 4);
        CHECK(std::string(e.what()).find("line 4") != std::string::npos);
    }
}

TEST_CASE("duplicate hour averaged") {
    const auto r = ingest_text(
        "timestamp,price\n"
        "2013-10-27T01:00:00+02:00,30\n"
        "2013-10-27T02:00:00+02:00,40\n"
        "2013-10-27T02:00:00+01:00,60\n"
        "2013-10-27T03:00:00+01:00,30\n");
    REQUIRE(r.series.size() == 3);
    CHECK(r.series.price(1) == 50.0);
    CHECK(r.report.duplicates_averaged == 1);
    CHECK_THROWS_AS((void)ingest_text("timestamp,price\n"
                                      "2013-10-27T02:00:00+02:00,40\n"
                                      "2013-10-27T02:00:00+01:00,60\n",
                                      IngestOptions{6, true}),
                    IngestError);
}

TEST_CASE("spring-forward gap interpolated") {
    const auto r = ingest_text(
        "timestamp,price\n"
        "2013-03-31T01:00:00+01:00,10\n"
        "2013-03-31T03:00:00+02:00,20\n");
    REQUIRE(r.series.size() == 3);
    CHECK(r.series.price(1) == 15.0);
    CHECK(r.report.gaps_filled == 1);
}

TEST_CASE("long gaps refused with their range") {
    try {
        (void)ingest_text(
            "timestamp,price\n"
            "2013-01-01T00:00:00+01:00,1\n"
            "2013-01-01T08:00:00+01:00,2\n");
        FAIL("expected an error");
    } catch (const IngestError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("gap of 7 hours") != std::string::npos);
        CHECK(msg.find("2013-01-01T01:00:00+01:00") != std::string::npos);
        CHECK(msg.find("2013-01-01T07:00:00+01:00") != std::string::npos);
    }
    // Six missing hours are still filled.
    const auto ok = ingest_text(
        "timestamp,price\n"
        "2013-01-01T00:00:00+01:00,0\n"
        "2013-01-01T07:00:00+01:00,7\n");
    CHECK(ok.series.size() == 8);
    CHECK(ok.series.price(3) == doctest::Approx(3.0));
}

TEST_CASE("malformed input") {
    CHECK_THROWS_AS((void)ingest_text(""), IngestError);
    CHECK_THROWS_AS((void)ingest_text("time,value\n"), IngestError);
    CHECK_THROWS_AS((void)ingest_text("timestamp,price\n"), IngestError);
    try {
        (void)ingest_text("timestamp,price\n2013-01-01T00:00:00+01:00,1\n2013-01-01T01:00,x\n");
        FAIL("expected an error");
    } catch (const IngestError& e) {
        CHECK(e.line() == 3);
    }
    CHECK_THROWS_AS((void)ingest_text("timestamp,price\n2013-01-01T00:00:00+01:00,nan\n"),
                    IngestError);
    CHECK_THROWS_AS((void)ingest_csv(std::filesystem::path("/nonexistent/prices.csv")),
                    IngestError);
}

TEST_CASE("timestamps") {
    WallClockStamp w;
    REQUIRE(parse_timestamp("2013-07-01T05:00:00+02:00", w));
    CHECK(w.wall_clock == hour_stamp(2013, 7, 1, 5));
    CHECK(w.utc_offset_minutes == 120);
    REQUIRE(parse_timestamp("2013-07-01T05:00:00Z", w));
    CHECK(w.utc_offset_minutes == 0);
    CHECK_FALSE(parse_timestamp("2013-07-01T05:30:00Z", w));
    CHECK_FALSE(parse_timestamp("2013-02-30T05:00:00Z", w));
    CHECK_FALSE(parse_timestamp("2013-07-01 05:00", w));
    CHECK(format_timestamp(hour_stamp(2013, 7, 1, 5), -330) == "2013-07-01T05:00:00-05:30");
}

TEST_CASE("prices print shortest round-trip") {
    CHECK(format_price(0.1) == "0.1");
    CHECK(format_price(-3.0) == "-3");
    const double x = 1.0 / 3.0;
    CHECK(std::stod(format_price(x)) == x);
}

TEST_CASE("ingest, write, ingest is the identity") {
    const auto first = ingest_csv(std::filesystem::path(SPOTCAST_SAMPLE_DATA));
    CHECK(first.report.duplicates_averaged > 0);
    CHECK(first.report.gaps_filled > 0);
    std::ostringstream out;
    write_series_csv(out, first.series);
    std::istringstream in(out.str());
    const auto second = ingest_csv(in, IngestOptions{6, true});
    CHECK(second.series == first.series);
}

TEST_CASE("forecast csv round trip") {
    ForecastResult f{"mrjd", {hour_stamp(2014, 1, 1, 0), hour_stamp(2014, 1, 1, 1)}, {40.25, 41.0}};
    f.lower = std::vector<double>{30.0, 31.0};
    f.upper = std::vector<double>{50.0, 51.0};
    std::ostringstream out;
    write_forecast_csv(out, f, 60);
    CHECK(out.str().rfind("timestamp,model_id,value,lower,upper\n", 0) == 0);
    std::istringstream in(out.str());
    const auto back = read_forecast_csv(in);
    CHECK(back.model_id == "mrjd");
    CHECK(back.horizon == f.horizon);
    CHECK(back.values == f.values);
    CHECK(back.lower == f.lower);
    CHECK(back.upper == f.upper);
}
