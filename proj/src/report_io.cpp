#include "spotcast/report_io.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

namespace spotcast::io {

namespace {

Json number(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

}  // namespace

Json to_json(const ErrorReport& report, int utc_offset_minutes) {
    Json j;
    j["mae"] = number(report.mae);
    j["rmse"] = number(report.rmse);
    j["mape"] = report.mape ? number(*report.mape) : Json(nullptr);
    Json points = Json::array();
    for (const auto& p : report.per_point) {
        points.push_back({{"timestamp", format_timestamp(p.stamp, utc_offset_minutes)},
                          {"error", number(p.error)}});
    }
    j["per_point"] = std::move(points);
    return j;
}

Json to_json(const IngestReport& report) {
    return {{"rows_read", report.rows_read},
            {"duplicates_averaged", report.duplicates_averaged},
            {"gaps_filled", report.gaps_filled}};
}

Json to_json(const linear::LinearPredictor& predictor) {
    return {{"intercept", predictor.intercept},
            {"lag_coeffs", predictor.lag_coeffs},
            {"horizon", predictor.horizon},
            {"mean", predictor.mean}};
}

Json to_json(const linear::ArmaParams& params) {
    return {{"p", params.p()},   {"q", params.q()},           {"ar", params.ar},
            {"ma", params.ma},   {"sigma2", params.sigma2},   {"mean", params.mean}};
}

Json to_json(const linear::GarchParams& params) {
    return {{"omega", params.omega},
            {"alpha", params.alpha},
            {"beta", params.beta},
            {"mean", params.mean},
            {"persistence", params.persistence()}};
}

Json mrjd_params_json(const mrjd::MrjdModel& model) {
    const auto& p = model.calibration.params;
    Json j;
    for (std::size_t i = 0; i < 5; ++i) j["s" + std::to_string(i + 1)] = model.seasonal.s[i];
    j["alpha"] = p.alpha;
    j["phi"] = p.phi;
    j["sigma"] = p.sigma;
    j["mu_j"] = p.mu_j;
    j["sigma_j"] = p.sigma_j;
    j["lambda_dt"] = p.lambda_dt;
    j["dt"] = p.dt;
    j["shift"] = model.shift;
    j["loglik"] = number(model.calibration.log_likelihood);
    j["last_x"] = model.last_x;
    j["last_day"] = model.last_day;
    return j;
}

mrjd::MrjdModel mrjd_model_from_json(const Json& j) {
    mrjd::MrjdModel m;
    for (std::size_t i = 0; i < 5; ++i) m.seasonal.s[i] = j.at("s" + std::to_string(i + 1)).get<double>();
    auto& p = m.calibration.params;
    p.alpha = j.at("alpha").get<double>();
    p.phi = j.at("phi").get<double>();
    p.sigma = j.at("sigma").get<double>();
    p.mu_j = j.at("mu_j").get<double>();
    p.sigma_j = j.at("sigma_j").get<double>();
    p.lambda_dt = j.at("lambda_dt").get<double>();
    p.dt = j.at("dt").get<double>();
    m.shift = j.value("shift", 0.0);
    if (j.contains("loglik") && j["loglik"].is_number()) {
        m.calibration.log_likelihood = j["loglik"].get<double>();
    }
    m.last_x = j.value("last_x", 0.0);
    m.last_day = j.value("last_day", DayStamp{0});
    if (!p.valid()) throw std::invalid_argument("mrjd params violate the model constraints");
    return m;
}

Json to_json(const ann::AnnModel& model) {
    Json topo;
    topo["layer_sizes"] = model.network.topology.layer_sizes;
    Json acts = Json::array();
    for (auto a : model.network.topology.activations) acts.push_back(ann::to_string(a));
    topo["activations"] = std::move(acts);

    Json layers = Json::array();
    for (const auto& l : model.network.layers) {
        layers.push_back({{"rows", l.outputs}, {"cols", l.inputs}, {"weights", l.weights},
                          {"bias", l.bias}});
    }
    const auto& tc = model.train_config;
    return {{"model", "ann"},
            {"topology", std::move(topo)},
            {"layers", std::move(layers)},
            {"standardization",
             {{"input_mean", model.inputs.mean},
              {"input_scale", model.inputs.scale},
              {"target_mean", model.target_mean},
              {"target_scale", model.target_scale}}},
            {"features",
             {{"profile_hours", model.features.profile_hours},
              {"use_load", model.features.use_load}}},
            {"train_config",
             {{"max_epochs", tc.max_epochs},
              {"learning_rate", tc.learning_rate},
              {"momentum", tc.momentum},
              {"conjugate_gradient", tc.conjugate_gradient},
              {"seed", tc.seed},
              {"validation_fraction", tc.validation_fraction},
              {"patience", tc.patience},
              {"loss_tolerance", tc.loss_tolerance}}},
            {"fit_diagnostics",
             {{"epochs", model.trace.train_loss.empty() ? 0 : model.trace.train_loss.size() - 1},
              {"best_epoch", model.trace.best_epoch},
              {"final_train_loss",
               model.trace.train_loss.empty() ? Json(nullptr) : number(model.trace.train_loss.back())},
              {"diverged", model.trace.diverged},
              {"early_stopped", model.trace.early_stopped},
              {"restarts", model.trace.restarts},
              {"dropped_rows", model.dropped_rows}}}};
}

ann::AnnModel ann_model_from_json(const Json& j) {
    ann::AnnModel m;
    ann::Topology topo;
    topo.layer_sizes = j.at("topology").at("layer_sizes").get<std::vector<std::size_t>>();
    for (const auto& a : j.at("topology").at("activations")) {
        topo.activations.push_back(ann::activation_from_string(a.get<std::string>()));
    }
    m.network = ann::make_network(topo);
    const auto& layers = j.at("layers");
    if (layers.size() != m.network.layers.size()) {
        throw std::invalid_argument("ann model: layer count does not match topology");
    }
    for (std::size_t i = 0; i < layers.size(); ++i) {
        auto& l = m.network.layers[i];
        auto w = layers[i].at("weights").get<std::vector<double>>();
        auto b = layers[i].at("bias").get<std::vector<double>>();
        if (w.size() != l.weights.size() || b.size() != l.bias.size()) {
            throw std::invalid_argument("ann model: layer " + std::to_string(i) +
                                        " shape does not match topology");
        }
        l.weights = std::move(w);
        l.bias = std::move(b);
    }
    const auto& st = j.at("standardization");
    m.inputs.mean = st.at("input_mean").get<std::vector<double>>();
    m.inputs.scale = st.at("input_scale").get<std::vector<double>>();
    m.target_mean = st.at("target_mean").get<double>();
    m.target_scale = st.at("target_scale").get<double>();
    const auto& fe = j.at("features");
    m.features.profile_hours = fe.at("profile_hours").get<std::size_t>();
    m.features.use_load = fe.at("use_load").get<bool>();
    if (m.inputs.dim() != topo.layer_sizes.front() ||
        ann::feature_dim(m.features) != topo.layer_sizes.front()) {
        throw std::invalid_argument("ann model: standardization does not match the input layer");
    }
    const auto& tc = j.at("train_config");
    m.train_config.max_epochs = tc.at("max_epochs").get<std::size_t>();
    m.train_config.learning_rate = tc.at("learning_rate").get<double>();
    m.train_config.momentum = tc.at("momentum").get<double>();
    m.train_config.conjugate_gradient = tc.at("conjugate_gradient").get<bool>();
    m.train_config.seed = tc.at("seed").get<std::uint64_t>();
    m.train_config.validation_fraction = tc.at("validation_fraction").get<double>();
    m.train_config.patience = tc.at("patience").get<std::size_t>();
    m.train_config.loss_tolerance = tc.at("loss_tolerance").get<double>();
    return m;
}

void write_json(const std::filesystem::path& path, const Json& j) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << j.dump(2) << '\n';
    if (!out) throw std::runtime_error("failed writing " + path.string());
}

Json read_json(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    try {
        return Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw std::runtime_error(path.string() + ": " + e.what());
    }
}

}  // namespace spotcast::io
