#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>

#include "spotcast/calendar.hpp"
#include "spotcast/series.hpp"

namespace spotcast {

/// Raised for unreadable or inconsistent price files. line() is 0 when not tied to a row.
class IngestError : public std::runtime_error {
public:
    IngestError(const std::string& message, std::size_t line)
        : std::runtime_error(message), line_(line) {}
    [[nodiscard]] std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

struct IngestOptions {
    /// Longest run of missing hours that is filled by interpolation.
    int max_gap_hours = 6;
    /// Refuse any input that needs normalization.
    bool strict = false;
};

struct IngestReport {
    std::size_t rows_read = 0;
    /// Extra records merged into an earlier record with the same wall-clock hour.
    std::size_t duplicates_averaged = 0;
    /// Hours inserted by linear interpolation.
    std::size_t gaps_filled = 0;
};

struct IngestResult {
    HourlySeries series;
    IngestReport report;
};

/// A parsed `YYYY-MM-DDTHH:00:00(+HH:MM|Z)` timestamp.
struct WallClockStamp {
    HourStamp wall_clock = 0;
    int utc_offset_minutes = 0;
};

/// Parses an ISO-8601 timestamp at hour resolution. Returns false on malformed input.
[[nodiscard]] bool parse_timestamp(std::string_view text, WallClockStamp& out);
[[nodiscard]] std::string format_timestamp(HourStamp wall_clock, int utc_offset_minutes);
/// Shortest decimal representation that parses back to the same double.
[[nodiscard]] std::string format_price(double value);

/**
 * Reads a `timestamp,price` CSV onto the wall-clock hour grid.
 *
 * Timestamps are taken as local wall-clock hours; the offset is parsed and
 * carried to output but does not move points. Repeated hours (DST fall-back)
 * are averaged, runs of up to max_gap_hours missing hours (DST spring-forward)
 * are linearly interpolated, and both are counted in the report.
 */
[[nodiscard]] IngestResult ingest_csv(const std::filesystem::path& path,
                                      const IngestOptions& options = {});
[[nodiscard]] IngestResult ingest_csv(std::istream& input, const IngestOptions& options = {});

void write_series_csv(std::ostream& out, const HourlySeries& series);
void write_series_csv(const std::filesystem::path& path, const HourlySeries& series);

/// `timestamp,model_id,value[,lower,upper]`
void write_forecast_csv(std::ostream& out, const ForecastResult& forecast, int utc_offset_minutes);
/// Reads a forecast file written by write_forecast_csv.
[[nodiscard]] ForecastResult read_forecast_csv(std::istream& input);

}  // namespace spotcast
