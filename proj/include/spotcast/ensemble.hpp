#pragma once

#include <span>

#include "spotcast/series.hpp"

namespace spotcast::ensemble {

/**
 * Equal-weight pointwise mean of forecasts over a shared horizon.
 *
 * The result is named "hybrid(a,b,...)" after its members and carries no
 * bands. Throws std::invalid_argument on an empty list or when horizons
 * differ, naming the first offending timestamp.
 */
[[nodiscard]] ForecastResult hybrid_average(std::span<const ForecastResult> forecasts);

}  // namespace spotcast::ensemble
