#include "spotcast/ensemble.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>
#include <vector>

namespace spotcast::ensemble {

ForecastResult hybrid_average(std::span<const ForecastResult> forecasts) {
    if (forecasts.empty()) throw std::invalid_argument("hybrid_average: no forecasts given");
    const ForecastResult& first = forecasts.front();
    ForecastResult out;
    out.model_id = "hybrid(";
    out.horizon = first.horizon;
    // Extended-precision sums keep k identical members exact: k * v and its quotient by k
    // round back to v.
    std::vector<long double> sum(first.horizon.size(), 0.0L);
    for (std::size_t m = 0; m < forecasts.size(); ++m) {
        const ForecastResult& f = forecasts[m];
        if (f.values.size() != f.horizon.size()) {
            throw std::invalid_argument("hybrid_average: forecast '" + f.model_id +
                                        "' has mismatched values and horizon");
        }
        const std::size_t common = std::min(f.horizon.size(), first.horizon.size());
        for (std::size_t i = 0; i < common; ++i) {
            if (f.horizon[i] != first.horizon[i]) {
                throw std::invalid_argument("hybrid_average: horizon of '" + f.model_id +
                                            "' differs at stamp " + std::to_string(f.horizon[i]) +
                                            " (expected " + std::to_string(first.horizon[i]) + ")");
            }
        }
        if (f.horizon.size() != first.horizon.size()) {
            const HourStamp at = common < f.horizon.size() ? f.horizon[common] : first.horizon[common];
            throw std::invalid_argument("hybrid_average: horizon of '" + f.model_id + "' has " +
                                        std::to_string(f.horizon.size()) + " points, expected " +
                                        std::to_string(first.horizon.size()) +
                                        "; first unmatched stamp " + std::to_string(at));
        }
        for (std::size_t i = 0; i < common; ++i) sum[i] += f.values[i];
        out.model_id += (m > 0 ? "," : "") + f.model_id;
    }
    out.model_id += ")";
    const auto n = static_cast<long double>(forecasts.size());
    out.values.resize(sum.size());
    for (std::size_t i = 0; i < sum.size(); ++i) out.values[i] = static_cast<double>(sum[i] / n);
    return out;
}

}  // namespace spotcast::ensemble
