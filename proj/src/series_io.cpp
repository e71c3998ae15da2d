#include "spotcast/series_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <vector>

namespace spotcast {

namespace {

bool parse_int(std::string_view text, int& out) {
    if (text.empty()) return false;
    for (char c : text) {
        if (c < '0' || c > '9') return false;
    }
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
    return ec == std::errc{} && ptr == text.data() + text.size();
}

bool parse_double(std::string_view text, double& out) {
    if (text.empty()) return false;
    if (text.front() == '+') text.remove_prefix(1);
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
    return ec == std::errc{} && ptr == text.data() + text.size() && std::isfinite(out);
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t pos = 0;
    while (true) {
        const std::size_t comma = line.find(',', pos);
        fields.push_back(trim(line.substr(pos, comma == std::string_view::npos
                                                   ? std::string_view::npos
                                                   : comma - pos)));
        if (comma == std::string_view::npos) break;
        pos = comma + 1;
    }
    return fields;
}

struct RawRecord {
    HourStamp stamp;
    double price;
    std::size_t line;
};

}  // namespace

bool parse_timestamp(std::string_view text, WallClockStamp& out) {
    // YYYY-MM-DDTHH:MM:SS then Z or +HH:MM / -HH:MM
    if (text.size() < 20) return false;
    if (text[4] != '-' || text[7] != '-' || (text[10] != 'T' && text[10] != ' ') ||
        text[13] != ':' || text[16] != ':') {
        return false;
    }
    int year = 0, month = 0, day = 0, hour = 0, minute = 0, second = 0;
    if (!parse_int(text.substr(0, 4), year) || !parse_int(text.substr(5, 2), month) ||
        !parse_int(text.substr(8, 2), day) || !parse_int(text.substr(11, 2), hour) ||
        !parse_int(text.substr(14, 2), minute) || !parse_int(text.substr(17, 2), second)) {
        return false;
    }
    if (month < 1 || month > 12 || hour > 23 || minute != 0 || second != 0) return false;
    const int month_days[] = {31, is_leap_year(year) ? 29 : 28, 31, 30, 31, 30,
                              31, 31, 30, 31, 30, 31};
    if (day < 1 || day > month_days[month - 1]) return false;

    const std::string_view zone = text.substr(19);
    int offset = 0;
    if (zone == "Z") {
        offset = 0;
    } else {
        if (zone.size() != 6 || (zone[0] != '+' && zone[0] != '-') || zone[3] != ':') return false;
        int oh = 0, om = 0;
        if (!parse_int(zone.substr(1, 2), oh) || !parse_int(zone.substr(4, 2), om)) return false;
        if (oh > 14 || om > 59) return false;
        offset = (oh * 60 + om) * (zone[0] == '-' ? -1 : 1);
    }
    out.wall_clock = hour_stamp(year, month, day, hour);
    out.utc_offset_minutes = offset;
    return true;
}

std::string format_timestamp(HourStamp wall_clock, int utc_offset_minutes) {
    const TimePoint tp = TimePoint::from_stamp(wall_clock);
    const int mag = std::abs(utc_offset_minutes);
    char buf[40];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:00:00%c%02d:%02d", tp.year, tp.month,
                  tp.day_of_month, tp.hour, utc_offset_minutes < 0 ? '-' : '+', mag / 60,
                  mag % 60);
    return buf;
}

std::string format_price(double value) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, ptr);
}

IngestResult ingest_csv(const std::filesystem::path& path, const IngestOptions& options) {
    std::ifstream in(path);
    if (!in) throw IngestError("cannot open '" + path.string() + "'", 0);
    return ingest_csv(in, options);
}

IngestResult ingest_csv(std::istream& input, const IngestOptions& options) {
    std::string line;
    std::size_t line_no = 0;
    if (!std::getline(input, line)) throw IngestError("empty input: missing header", 1);
    ++line_no;
    {
        auto header = split_fields(line);
        if (!header.empty() && header[0].starts_with("\xEF\xBB\xBF")) header[0].remove_prefix(3);
        if (header.size() != 2 || header[0] != "timestamp" || header[1] != "price") {
            throw IngestError("line 1: expected header 'timestamp,price'", 1);
        }
    }

    std::vector<RawRecord> records;
    int offset = 60;
    bool offset_seen = false;
    while (std::getline(input, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto fields = split_fields(line);
        WallClockStamp ts;
        double price = 0.0;
        if (fields.size() != 2 || !parse_timestamp(fields[0], ts) ||
            !parse_double(fields[1], price)) {
            throw IngestError("line " + std::to_string(line_no) + ": malformed row '" +
                                  std::string(trim(line)) + "'",
                              line_no);
        }
        if (!offset_seen) {
            offset = ts.utc_offset_minutes;
            offset_seen = true;
        }
        records.push_back({ts.wall_clock, price, line_no});
    }
    if (records.empty()) throw IngestError("no data rows", line_no);

    IngestResult result;
    result.report.rows_read = records.size();

    // Collapse repeated hours into their mean.
    std::vector<RawRecord> merged;
    merged.reserve(records.size());
    std::size_t run = 1;
    for (const RawRecord& r : records) {
        if (!merged.empty() && r.stamp == merged.back().stamp) {
            merged.back().price += r.price;
            ++run;
            ++result.report.duplicates_averaged;
            continue;
        }
        if (!merged.empty() && r.stamp < merged.back().stamp) {
            throw IngestError("line " + std::to_string(r.line) + ": timestamp out of order",
                              r.line);
        }
        if (!merged.empty() && run > 1) merged.back().price /= static_cast<double>(run);
        run = 1;
        merged.push_back(r);
    }
    if (run > 1) merged.back().price /= static_cast<double>(run);

    std::vector<double> prices;
    prices.reserve(static_cast<std::size_t>(merged.back().stamp - merged.front().stamp + 1));
    prices.push_back(merged.front().price);
    for (std::size_t i = 1; i < merged.size(); ++i) {
        const HourStamp missing = merged[i].stamp - merged[i - 1].stamp - 1;
        if (missing > options.max_gap_hours) {
            throw IngestError("line " + std::to_string(merged[i].line) + ": gap of " +
                                  std::to_string(missing) + " hours from " +
                                  format_timestamp(merged[i - 1].stamp + 1, offset) + " to " +
                                  format_timestamp(merged[i].stamp - 1, offset),
                              merged[i].line);
        }
        const double a = merged[i - 1].price;
        const double b = merged[i].price;
        for (HourStamp k = 1; k <= missing; ++k) {
            const double w = static_cast<double>(k) / static_cast<double>(missing + 1);
            prices.push_back(a + (b - a) * w);
        }
        result.report.gaps_filled += static_cast<std::size_t>(missing);
        prices.push_back(b);
    }

    if (options.strict &&
        (result.report.duplicates_averaged > 0 || result.report.gaps_filled > 0)) {
        throw IngestError("strict mode: input needs normalization (" +
                              std::to_string(result.report.duplicates_averaged) +
                              " duplicate hours, " + std::to_string(result.report.gaps_filled) +
                              " missing hours)",
                          0);
    }

    result.series = HourlySeries(merged.front().stamp, std::move(prices), offset);
    return result;
}

void write_series_csv(std::ostream& out, const HourlySeries& series) {
    out << "timestamp,price\n";
    for (std::size_t i = 0; i < series.size(); ++i) {
        out << format_timestamp(series.stamp(i), series.utc_offset_minutes()) << ','
            << format_price(series.price(i)) << '\n';
    }
}

void write_series_csv(const std::filesystem::path& path, const HourlySeries& series) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    write_series_csv(out, series);
}

void write_forecast_csv(std::ostream& out, const ForecastResult& forecast,
                        int utc_offset_minutes) {
    forecast.validate();
    const bool bands = forecast.lower.has_value();
    out << (bands ? "timestamp,model_id,value,lower,upper\n" : "timestamp,model_id,value\n");
    for (std::size_t i = 0; i < forecast.values.size(); ++i) {
        out << format_timestamp(forecast.horizon[i], utc_offset_minutes) << ','
            << forecast.model_id << ',' << format_price(forecast.values[i]);
        if (bands) {
            out << ',' << format_price((*forecast.lower)[i]) << ','
                << format_price((*forecast.upper)[i]);
        }
        out << '\n';
    }
}

ForecastResult read_forecast_csv(std::istream& input) {
    std::string line;
    std::size_t line_no = 1;
    if (!std::getline(input, line)) throw IngestError("empty forecast file", 1);
    const auto header = split_fields(line);
    const bool bands = header.size() == 5;
    if (header.size() < 3 || header[0] != "timestamp" || header[1] != "model_id" ||
        header[2] != "value" || (bands && (header[3] != "lower" || header[4] != "upper"))) {
        throw IngestError("line 1: expected header 'timestamp,model_id,value[,lower,upper]'", 1);
    }
    ForecastResult fc;
    if (bands) {
        fc.lower.emplace();
        fc.upper.emplace();
    }
    while (std::getline(input, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto f = split_fields(line);
        WallClockStamp ts;
        double v = 0.0, lo = 0.0, hi = 0.0;
        if (f.size() != header.size() || !parse_timestamp(f[0], ts) || !parse_double(f[2], v) ||
            (bands && (!parse_double(f[3], lo) || !parse_double(f[4], hi)))) {
            throw IngestError("line " + std::to_string(line_no) + ": malformed forecast row",
                              line_no);
        }
        if (fc.horizon.empty()) {
            fc.model_id = std::string(f[1]);
        } else if (f[1] != fc.model_id) {
            throw IngestError("line " + std::to_string(line_no) + ": mixed model ids", line_no);
        }
        fc.horizon.push_back(ts.wall_clock);
        fc.values.push_back(v);
        if (bands) {
            fc.lower->push_back(lo);
            fc.upper->push_back(hi);
        }
    }
    fc.validate();
    return fc;
}

}  // namespace spotcast
