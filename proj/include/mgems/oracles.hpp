#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mgems/types.hpp"

namespace mgems {

struct ControllerConfig;  // mpc.hpp

namespace oracles {

/// Grid resolution for brute-force disturbance-box checks. The total grid
/// size is capped; exceeding the cap is an error, never a truncation.
struct GridSpec {
    int points_per_dim = 5;
    long max_points = 1000000;
};

/// Independent maximal-root finder for the augmented total power: bracket,
/// bisect, then expand rightward over a flat zero run. Shares no code with
/// solve_rho (including the power-function evaluation).
double bisection_rho(const std::vector<double>& u, const std::vector<int>& delta,
                     const std::vector<double>& x_prev, const std::vector<double>& w,
                     const MicrogridParams& params);

struct WorstCostResult {
    double max_cost = 0.0;
    std::vector<std::vector<double>> argmax_w;
};

/// Enumerates the full disturbance grid of the scenario box, simulating
/// dispatch for every realization; returns the maximum horizon cost and a
/// maximizing realization (lowest grid index on ties).
WorstCostResult grid_worst_cost(const ControlPlan& plan, const Scenario& scenario,
                                const GridSpec& grid, const MicrogridParams& params);

struct FeasibilityResult {
    bool all_feasible = true;
    std::string first_violation;  // empty when all feasible
};

/// Checks dispatch feasibility (rho within its auxiliary bounds at every
/// step) across the full disturbance grid.
FeasibilityResult grid_feasibility(const ControlPlan& plan, const Scenario& scenario,
                                   const GridSpec& grid, const MicrogridParams& params);

struct EnumerationResult {
    bool found = false;
    double best_cost = 0.0;
    ControlPlan best_plan;
};

/// Brute-force upper bound on the optimum of a robust set-point problem:
/// enumerate every switch sequence, grid the set-points, simulate dispatch at
/// both disturbance endpoints and keep the cheapest robust-feasible
/// candidate (cost evaluated at the lower endpoint).
EnumerationResult enumerate_small_milp(const ControllerConfig& config, const Scenario& window,
                                       const MicrogridParams& params, int u_grid_points,
                                       long max_points = 20000000);

}  // namespace oracles
}  // namespace mgems
