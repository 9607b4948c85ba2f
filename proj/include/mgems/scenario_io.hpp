#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "mgems/sim.hpp"
#include "mgems/types.hpp"

namespace mgems {

/// Scenario JSON: top-level keys params, horizon, w_min, w_max (row per
/// step, renewables first then loads), x0, delta0. delta0 defaults to
/// all-off and renewable_cap to the per-unit maximum of w_max when absent.
std::pair<MicrogridParams, Scenario> load_scenario_json(std::istream& in);
std::pair<MicrogridParams, Scenario> load_scenario_file(const std::string& path);
void save_scenario_json(const MicrogridParams& params, const Scenario& scenario,
                        std::ostream& out);
void save_scenario_file(const MicrogridParams& params, const Scenario& scenario,
                        const std::string& path);

/// Trajectory CSV: step, x per storage, p per unit, rho, delta per
/// conventional, stage_cost, feasible_flag.
void write_trajectory_csv(const SimRecord& record, const MicrogridParams& params,
                          std::ostream& out);

/// Metrics CSV: one row per controller.
void write_metrics_csv(const std::vector<ControllerComparison>& rows, std::ostream& out);

/// Open-loop comparison CSV: one row per initial condition, one predicted
/// cost column per controller.
void write_openloop_csv(const ComparisonResult& result, std::ostream& out);

/// Realization trace: CSV with one row per step, R+D columns (header
/// ignored when present).
std::vector<std::vector<double>> read_trace_csv(std::istream& in, int row_len);

/// Open-loop solution JSON (plan, predicted cost, endpoint trajectories).
void write_solution_json(const OpenLoopSolution& solution, const MicrogridParams& params,
                         std::ostream& out);

}  // namespace mgems
