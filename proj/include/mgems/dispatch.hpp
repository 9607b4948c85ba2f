#pragma once

#include <vector>

#include "mgems/types.hpp"

namespace mgems {

/// Auxiliary rho interval: outside of it every droop-participating unit is
/// guaranteed saturated, so the augmented total power is strictly increasing.
struct RhoBounds {
    double rho_min = 0.0;
    double rho_max = 0.0;
};

struct RhoSolution {
    double rho = 0.0;
    bool feasible = true;  // rho within RhoBounds
};

/// rho interval endpoints from the range of power-to-set-point differences
/// over units with chi > 0. Renewable upper power limits come from
/// renewable_cap. Throws NoDroopError if no unit has chi > 0.
RhoBounds rho_bounds(const MicrogridParams& params);

/// Total power mismatch as a function of rho, augmented with
/// min(0, rho-rho_min) + max(0, rho-rho_max) so a root always exists.
/// Continuous, piecewise affine and monotonically increasing in rho.
double augmented_total_power(const std::vector<double>& u, const std::vector<int>& delta,
                             const std::vector<double>& x_prev, const std::vector<double>& w,
                             double rho, const MicrogridParams& params);

/// Maximal root of augmented_total_power in rho, found by a breakpoint scan
/// over the saturation abscissae. On a flat zero run the right endpoint is
/// returned. feasible reports whether the root lies within rho_bounds.
RhoSolution solve_rho(const std::vector<double>& u, const std::vector<int>& delta,
                      const std::vector<double>& x_prev, const std::vector<double>& w,
                      const MicrogridParams& params);

/// Storage response per unit for a demanded power (set-point plus droop
/// share). Direct form: saturate at the state-dependent power limits, then
/// integrate. Transformed form: saturate at the static power limits, clip the
/// energy, recover the power from the energy difference. Both agree for
/// x_prev inside the energy box.
struct StorageStep {
    double power = 0.0;
    double energy = 0.0;
};
StorageStep storage_step_direct(double x_prev, double demand, const MicrogridParams& params,
                                int storage_index);
StorageStep storage_step_transformed(double x_prev, double demand, const MicrogridParams& params,
                                     int storage_index);

/// One EMS sampling instant: solve for rho, evaluate the saturated droop
/// laws, advance storage energies. Infeasibility (rho outside its bounds) is
/// reported through the outcome flag so closed-loop studies can log it.
StepOutcome dispatch_step(const std::vector<double>& u, const std::vector<int>& delta,
                          const std::vector<double>& x_prev, const std::vector<double>& w,
                          const MicrogridParams& params);

/// Chains dispatch_step over a realized disturbance sequence.
std::vector<StepOutcome> simulate_horizon(const std::vector<std::vector<double>>& w_realized,
                                          const ControlPlan& plan, const std::vector<double>& x0,
                                          const MicrogridParams& params);

}  // namespace mgems
