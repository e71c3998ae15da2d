#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "spotcast/ann_features.hpp"
#include "spotcast/linear_models.hpp"
#include "spotcast/mrjd.hpp"
#include "spotcast/series.hpp"
#include "spotcast/series_io.hpp"

namespace spotcast::io {

using Json = nlohmann::json;

/// {"mae", "rmse", "mape" (null when undefined), "per_point": [{"timestamp", "error"}]}.
[[nodiscard]] Json to_json(const ErrorReport& report, int utc_offset_minutes);
[[nodiscard]] Json to_json(const IngestReport& report);

[[nodiscard]] Json to_json(const linear::LinearPredictor& predictor);
[[nodiscard]] Json to_json(const linear::ArmaParams& params);
[[nodiscard]] Json to_json(const linear::GarchParams& params);

/// s1..s5, alpha, phi, sigma, mu_j, sigma_j, lambda_dt, dt, shift, loglik.
[[nodiscard]] Json mrjd_params_json(const mrjd::MrjdModel& model);
[[nodiscard]] mrjd::MrjdModel mrjd_model_from_json(const Json& params);

/// Topology, row-major weights per layer, standardization and the training config.
[[nodiscard]] Json to_json(const ann::AnnModel& model);
[[nodiscard]] ann::AnnModel ann_model_from_json(const Json& j);

/// Pretty-printed with a trailing newline; throws std::runtime_error naming the path on failure.
void write_json(const std::filesystem::path& path, const Json& j);
[[nodiscard]] Json read_json(const std::filesystem::path& path);

}  // namespace spotcast::io
