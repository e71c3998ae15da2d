// spotcast: batch command-line front end.
//
// Exit codes: 0 success, 1 usage or input error, 2 partial results, 3 internal failure.

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "spotcast/backtest.hpp"
#include "spotcast/ensemble.hpp"
#include "spotcast/models.hpp"
#include "spotcast/mrjd.hpp"
#include "spotcast/random.hpp"
#include "spotcast/report_io.hpp"
#include "spotcast/seasonal.hpp"
#include "spotcast/series_io.hpp"

namespace fs = std::filesystem;
using namespace spotcast;
using models::Json;

namespace {

constexpr int kOk = 0;
constexpr int kInputError = 1;
constexpr int kPartial = 2;
constexpr int kInternal = 3;

// Missing files, bad arguments and unusable input all map to exit code 1.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Globals {
    std::string input;
    std::string out = ".";
    std::uint64_t seed = rng::kDefaultSeed;
    std::string config;
    bool strict = false;
    bool quiet = false;
};

Globals g;

void log(const std::string& line) {
    if (!g.quiet) std::cerr << "spotcast: " << line << '\n';
}

Json load_config() {
    if (g.config.empty()) return Json::object();
    if (!fs::exists(g.config)) throw InputError("config file not found: " + g.config);
    try {
        Json j = io::read_json(g.config);
        if (!j.is_object()) throw InputError("config file " + g.config + " must hold a JSON object");
        return j;
    } catch (const std::runtime_error& e) {
        throw InputError(e.what());
    }
}

Json model_config(const Json& config, const std::string& model) {
    if (config.contains("models") && config["models"].contains(model)) return config["models"][model];
    return Json::object();
}

IngestResult load_input() {
    if (g.input.empty()) throw InputError("--input is required");
    if (!fs::exists(g.input)) throw InputError("input file not found: " + g.input);
    IngestOptions opts;
    opts.strict = g.strict;
    return ingest_csv(fs::path(g.input), opts);
}

fs::path out_path(const std::string& name) {
    std::error_code ec;
    fs::create_directories(g.out, ec);
    if (ec) throw InputError("cannot create output directory " + g.out + ": " + ec.message());
    return fs::path(g.out) / name;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write " + path.string());
    out << text;
}

void write_forecast(const fs::path& path, const ForecastResult& fc, int offset) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write " + path.string());
    write_forecast_csv(out, fc, offset);
}

// --- commands ---------------------------------------------------------------

int cmd_ingest() {
    const auto r = load_input();
    const auto series_path = out_path("series.csv");
    write_series_csv(series_path, r.series);
    Json report = io::to_json(r.report);
    report["hours"] = r.series.size();
    report["start"] = format_timestamp(r.series.start(), r.series.utc_offset_minutes());
    io::write_json(out_path("ingest_report.json"), report);
    log("ingested " + std::to_string(r.report.rows_read) + " rows; " +
        std::to_string(r.report.duplicates_averaged) + " duplicates averaged, " +
        std::to_string(r.report.gaps_filled) + " gap hours filled");
    return kOk;
}

int cmd_decompose(int window) {
    const auto r = load_input();
    const auto daily = daily_average(r.series);
    const auto d = seasonal::decompose(daily, window);
    {
        std::ofstream out(out_path("decomposition.csv"), std::ios::binary);
        seasonal::write_decomposition_csv(out, d);
    }
    const auto verdict = seasonal::dickey_fuller(d.deseasonalized);
    const auto residual_verdict = seasonal::dickey_fuller(d.residual);
    const auto period = seasonal::dominant_period(daily.values, seasonal::PeriodRange{});
    Json j;
    j["days"] = daily.size();
    j["window"] = window;
    j["weekday_profile"] = d.seasonal_profile;
    j["dominant_period"] = period ? Json(*period) : Json(nullptr);
    j["dickey_fuller"] = {{"deseasonalized", {{"statistic", verdict.statistic},
                                              {"critical_value", verdict.critical_value},
                                              {"reject_unit_root", verdict.reject_unit_root}}},
                          {"residual", {{"statistic", residual_verdict.statistic},
                                        {"critical_value", residual_verdict.critical_value},
                                        {"reject_unit_root", residual_verdict.reject_unit_root}}}};
    io::write_json(out_path("decomposition.json"), j);
    log("decomposed " + std::to_string(daily.size()) + " days");
    return kOk;
}

int cmd_fit(const std::string& model) {
    const auto registry = models::Registry::builtin();
    const Json config = load_config();
    const auto forecaster = registry.create(model, model_config(config, model));
    const auto r = load_input();
    const Json fitted = forecaster->fit(r.series, g.seed);
    io::write_json(out_path(model + "_params.json"), fitted);
    log("fitted " + model + " on " + std::to_string(r.series.size()) + " hours");
    return kOk;
}

int cmd_forecast(const std::string& model, int days) {
    if (days < 1) throw InputError("--days must be >= 1");
    const auto registry = models::Registry::builtin();
    const Json config = load_config();
    const auto forecaster = registry.create(model, model_config(config, model));
    const auto r = load_input();
    const auto fc = forecaster->forecast(r.series, days, g.seed);
    write_forecast(out_path("forecast_" + model + ".csv"), fc, r.series.utc_offset_minutes());
    log("forecast " + model + ": " + std::to_string(fc.values.size()) + " hours");
    return kOk;
}

int cmd_simulate(std::size_t paths, int days, bool allow_wide, unsigned threads) {
    if (days < 1) throw InputError("--days must be >= 1");
    if (paths < 1) throw InputError("--paths must be >= 1");
    if (paths > 1000 && !allow_wide) {
        throw InputError("more than 1000 paths requested; pass --allow-wide to write the wide CSV");
    }
    const Json config = load_config();
    const Json mc = model_config(config, "mrjd");
    const double dt = mc.value("dt", 1.0 / 365.0);
    const auto r = load_input();
    if (r.series.end() % 24 != 0) throw InputError("series must end at a day boundary");
    const auto model = mrjd::fit_mrjd_model(daily_average(r.series), dt);
    const auto sim = mrjd::simulate_days(model, static_cast<std::size_t>(days), paths,
                                         rng::derive_seed(g.seed, "mrjd"), threads);
    std::ostringstream os;
    os << "timestamp";
    for (std::size_t p = 0; p < paths; ++p) os << ",path_" << (p + 1);
    os << '\n';
    for (std::size_t k = 0; k < sim.horizon.size(); ++k) {
        os << format_timestamp(sim.horizon[k], r.series.utc_offset_minutes());
        for (std::size_t p = 0; p < paths; ++p) os << ',' << format_price(sim.at(p, k) - sim.shift);
        os << '\n';
    }
    write_text(out_path("paths.csv"), os.str());
    Json fitted = {{"model", "mrjd"}, {"params", io::mrjd_params_json(model)}};
    io::write_json(out_path("mrjd_params.json"), fitted);
    log("simulated " + std::to_string(paths) + " paths over " + std::to_string(days) + " days");
    return kOk;
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

int cmd_backtest(int test_days, std::string granularity, std::string model_list,
                 std::string hybrid_list, unsigned threads, bool timings) {
    const Json config = load_config();
    const Json bc = config.value("backtest", Json::object());
    // Command-line values win over the config file, which wins over defaults.
    if (test_days <= 0) test_days = bc.value("test_days", 28);
    if (granularity.empty()) granularity = bc.value("granularity", std::string("daily"));
    const auto registry = models::Registry::builtin();
    const auto r = load_input();

    auto spec = backtest::BacktestSpec::default_for(r.series, g.seed, test_days);
    spec.granularity = backtest::granularity_from_string(granularity);
    spec.threads = threads;
    std::vector<std::string> ids;
    if (!model_list.empty()) {
        ids = split_list(model_list);
    } else if (bc.contains("models")) {
        ids = bc["models"].get<std::vector<std::string>>();
    }
    if (!ids.empty()) {
        spec.models.clear();
        for (const auto& id : ids) spec.models.push_back({id, Json::object()});
    }
    for (auto& m : spec.models) {
        if (!registry.contains(m.id)) throw models::UnknownModelError(m.id, registry.names());
        m.config = model_config(config, m.id);
    }
    if (!hybrid_list.empty()) {
        spec.hybrid_members = split_list(hybrid_list);
    } else if (bc.contains("hybrid")) {
        spec.hybrid_members = bc["hybrid"].get<std::vector<std::string>>();
    }

    log("backtest: " + std::to_string(spec.models.size()) + " models, test window " +
        std::to_string(test_days) + " days");
    const auto report = backtest::run_backtest(spec, r.series, registry);
    const int offset = r.series.utc_offset_minutes();
    io::write_json(out_path("backtest_report.json"), backtest::to_json(report, offset, timings));

    write_text(out_path("backtest_forecasts.svg"), backtest::forecast_chart_svg(report));
    write_text(out_path("backtest_rmse.svg"), backtest::rmse_chart_svg(report));

    for (const auto& m : report.models) {
        if (!m.ok) log("model " + m.model_id + " failed: " + m.error);
    }
    std::string ranking;
    for (const auto& id : report.ranking) ranking += (ranking.empty() ? "" : " > ") + id;
    log("ranking: " + ranking);
    return report.partial ? kPartial : kOk;
}

int cmd_hybrid(const std::vector<std::string>& files) {
    if (files.empty()) throw InputError("hybrid needs at least one forecast CSV");
    std::vector<ForecastResult> forecasts;
    for (const auto& f : files) {
        std::ifstream in(f, std::ios::binary);
        if (!in) throw InputError("forecast file not found: " + f);
        try {
            forecasts.push_back(read_forecast_csv(in));
        } catch (const std::exception& e) {
            throw InputError(f + ": " + e.what());
        }
    }
    const auto h = ensemble::hybrid_average(forecasts);
    // Offsets are carried by the member files; reuse the first one's if a series is given.
    int offset = 60;
    if (!g.input.empty()) offset = load_input().series.utc_offset_minutes();
    write_forecast(out_path("forecast_hybrid.csv"), h, offset);
    log("hybrid of " + std::to_string(files.size()) + " forecasts");
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"spotcast: electricity spot price forecasting toolkit"};
    app.require_subcommand(1);
    app.fallthrough();
    app.add_option("--input", g.input, "Input CSV (timestamp,price)");
    app.add_option("--out", g.out, "Output directory")->capture_default_str();
    app.add_option("--seed", g.seed, "Root seed for every random component")->capture_default_str();
    app.add_option("--config", g.config, "JSON config file");
    app.add_flag("--strict", g.strict, "Refuse input that needs normalization");
    app.add_flag("--quiet", g.quiet, "No log lines on stderr");

    auto* ingest = app.add_subcommand("ingest", "Normalize a price CSV onto the hourly grid");

    int window = 7;
    auto* decompose = app.add_subcommand("decompose", "Weekday decomposition of daily averages");
    decompose->add_option("--window", window, "Moving-average window in days")->capture_default_str();

    std::string fit_model;
    auto* fit = app.add_subcommand("fit", "Fit a model and write its parameters");
    fit->add_option("model", fit_model, "Model name")->required();

    std::string fc_model;
    int fc_days = 30;
    auto* forecast = app.add_subcommand("forecast", "Fit a model and forecast the following days");
    forecast->add_option("model", fc_model, "Model name")->required();
    forecast->add_option("--days", fc_days, "Horizon in days")->capture_default_str();

    std::size_t sim_paths = 100;
    int sim_days = 30;
    bool allow_wide = false;
    unsigned sim_threads = 1;
    auto* simulate = app.add_subcommand("simulate", "Monte Carlo price paths from a calibrated MRJD");
    simulate->add_option("--paths", sim_paths, "Number of paths")->capture_default_str();
    simulate->add_option("--days", sim_days, "Horizon in days")->capture_default_str();
    simulate->add_option("--threads", sim_threads, "Worker threads")->capture_default_str();
    simulate->add_flag("--allow-wide", allow_wide, "Permit more than 1000 path columns");

    int bt_days = 0;
    std::string bt_granularity, bt_models, bt_hybrid;
    unsigned bt_threads = 1;
    bool bt_timings = false;
    auto* bt = app.add_subcommand("backtest", "Train/test comparison of models and the hybrid");
    bt->add_option("--test-days", bt_days, "Test window length in days (default 28)");
    bt->add_option("--granularity", bt_granularity, "hourly or daily (default daily)");
    bt->add_option("--models", bt_models, "Comma-separated model list");
    bt->add_option("--hybrid", bt_hybrid, "Comma-separated hybrid members (default fourier,garch,mrjd)");
    bt->add_option("--threads", bt_threads, "Models fitted concurrently")->capture_default_str();
    bt->add_flag("--timings", bt_timings, "Record per-model runtime in the report");

    std::vector<std::string> hybrid_files;
    auto* hybrid = app.add_subcommand("hybrid", "Average forecast CSVs with identical horizons");
    hybrid->add_option("files", hybrid_files, "Forecast CSV files")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kInputError;
    }

    try {
        if (*ingest) return cmd_ingest();
        if (*decompose) return cmd_decompose(window);
        if (*fit) return cmd_fit(fit_model);
        if (*forecast) return cmd_forecast(fc_model, fc_days);
        if (*simulate) return cmd_simulate(sim_paths, sim_days, allow_wide, sim_threads);
        if (*bt) return cmd_backtest(bt_days, bt_granularity, bt_models, bt_hybrid, bt_threads, bt_timings);
        if (*hybrid) return cmd_hybrid(hybrid_files);
    } catch (const IngestError& e) {
        std::cerr << "spotcast: input error";
        if (e.line() > 0) std::cerr << " at line " << e.line();
        std::cerr << ": " << e.what() << '\n';
        return kInputError;
    } catch (const InputError& e) {
        std::cerr << "spotcast: " << e.what() << '\n';
        return kInputError;
    } catch (const std::invalid_argument& e) {
        std::cerr << "spotcast: " << e.what() << '\n';
        return kInputError;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "spotcast: config error: " << e.what() << '\n';
        return kInputError;
    } catch (const std::exception& e) {
        std::cerr << "spotcast: internal failure: " << e.what() << '\n';
        return kInternal;
    }
    return kInputError;
}
