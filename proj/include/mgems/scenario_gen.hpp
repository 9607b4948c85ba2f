#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "mgems/types.hpp"

namespace mgems {

/// Deterministic synthetic disturbance profiles at the parameter sampling
/// time: wind as a bounded smoothed random walk, pv as a clipped half-sine
/// with day-to-day amplitude jitter (renewables alternate wind, pv, wind,
/// ...), load as a negative two-peak diurnal shape. The forecast box is the
/// nominal profile widened by the given fraction, clipped to the sign
/// conventions. Identical seeds produce identical scenarios.
Scenario gen_synthetic_scenario(std::uint64_t seed, int days, const MicrogridParams& params,
                                double uncertainty_width,
                                const std::optional<std::vector<double>>& x0 = std::nullopt);

}  // namespace mgems
