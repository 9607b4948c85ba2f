#pragma once

#include <string>
#include <vector>

#include "mgems/errors.hpp"

namespace mgems {

/// Per-unit-class cost weights of the stage cost. Vector lengths:
/// fuel/fixed_on/switching have one entry per conventional unit, storage one
/// entry per storage unit. All weights are non-negative.
struct CostWeights {
    std::vector<double> fuel;       // cost per pu of conventional power
    std::vector<double> fixed_on;   // cost per step while a unit is on
    std::vector<double> switching;  // cost per on/off transition
    std::vector<double> storage;    // cost per pu of storage power
};

/// Static description of the microgrid. Units are stacked in the order
/// conventional, storage, renewable; loads are separate. Powers are in pu,
/// energies in pu*h, time in hours.
struct MicrogridParams {
    int num_conventional = 0;  // T
    int num_storage = 0;       // S
    int num_renewable = 0;     // R
    int num_loads = 0;         // D

    std::vector<double> u_min, u_max;  // set-point bounds, length T+S+R
    std::vector<double> p_min, p_max;  // power bounds, length T+S+R
    std::vector<double> x_min, x_max;  // storage energy bounds, length S
    std::vector<double> chi;           // inverse droop gains, length T+S+R
    double sampling_time = 0.25;       // hours

    CostWeights cost_weights;

    // Surrogate upper power limit per renewable unit. Only used when deriving
    // rho bounds and big-M constants; the physical cap is the available
    // infeed w_r.
    std::vector<double> renewable_cap;

    int num_units() const { return num_conventional + num_storage + num_renewable; }
    int conv_begin() const { return 0; }
    int storage_begin() const { return num_conventional; }
    int renewable_begin() const { return num_conventional + num_storage; }
    bool is_conventional(int unit) const { return unit < num_conventional; }
    bool is_storage(int unit) const {
        return unit >= storage_begin() && unit < renewable_begin();
    }
    bool is_renewable(int unit) const { return unit >= renewable_begin(); }
};

/// Horizon-indexed disturbance interval bounds plus initial conditions.
/// w vectors stack renewable infeed first (>= 0) then loads (<= 0), one
/// row per step.
struct Scenario {
    int horizon = 0;
    std::vector<std::vector<double>> w_min;  // horizon x (R+D)
    std::vector<std::vector<double>> w_max;  // horizon x (R+D)
    std::vector<double> x0;                  // initial storage energies
    std::vector<int> delta0;                 // initial switch statuses
};

/// Open-loop control profile: set-points and switch statuses per step.
struct ControlPlan {
    int horizon = 0;
    std::vector<std::vector<double>> u;   // horizon x (T+S+R)
    std::vector<std::vector<int>> delta;  // horizon x T
};

enum class SatRegion { at_lower, interior, at_upper };

/// One-step plant response of the droop layer.
struct StepOutcome {
    std::vector<double> p;             // realized unit powers, length T+S+R
    std::vector<double> x;             // post-step storage energies
    double rho = 0.0;                  // power-sharing variable
    std::vector<SatRegion> sat_flags;  // per unit
    bool feasible = true;              // rho within its auxiliary bounds
};

/// Hard limiter: lo if v < lo, hi if v > hi, v otherwise. Throws
/// InvalidBoundsError when lo > hi.
double saturate(double lo, double v, double hi);
std::vector<double> saturate(const std::vector<double>& lo, const std::vector<double>& v,
                             const std::vector<double>& hi);

/// Stage cost: fuel, fixed-generation and switching cost of the conventional
/// units plus the storage power cost. Renewable power is free. Unit-class
/// sizes are inferred from the weight vector lengths.
double stage_cost(const std::vector<double>& p, const std::vector<int>& delta,
                  const std::vector<int>& delta_prev, const CostWeights& w);

/// Sum of stage costs over a trajectory; delta0 seeds the first switching
/// term.
double horizon_cost(const std::vector<StepOutcome>& outcomes, const ControlPlan& plan,
                    const std::vector<int>& delta0, const CostWeights& w);

/// Storage power limits adjusted so that one step at the limit cannot leave
/// the energy box. Returns (lower, upper) per storage unit; always
/// lower <= upper when x_prev is inside the energy box.
std::pair<std::vector<double>, std::vector<double>> dynamic_storage_limits(
    const std::vector<double>& x_prev, const MicrogridParams& params);

/// Checks parameter invariants; returns human-readable violations (empty
/// means valid).
std::vector<std::string> validate_params(const MicrogridParams& params);

/// Checks scenario invariants against the parameters; returns violations.
std::vector<std::string> validate_scenario(const Scenario& scenario,
                                           const MicrogridParams& params);

}  // namespace mgems
