#pragma once

#include <memory>
#include <string>
#include <vector>

#include "mgems/backend.hpp"
#include "mgems/mpc.hpp"
#include "mgems/types.hpp"

namespace mgems {

/// Closed-loop aggregate metrics; energies and cost are per sample,
/// switching is the total count over the run.
struct Metrics {
    double per_sample_cost = 0.0;
    double per_sample_res_energy = 0.0;
    double per_sample_conventional_energy = 0.0;
    long switching_count = 0;
};

/// Closed-loop trajectory with applied controls, realized disturbances and
/// per-step costs.
struct SimRecord {
    std::string controller;
    int steps = 0;  // Ns actually simulated
    std::vector<std::vector<double>> applied_u;
    std::vector<std::vector<int>> applied_delta;
    std::vector<std::vector<double>> realized_w;
    std::vector<StepOutcome> outcomes;
    std::vector<double> stage_costs;
    std::vector<double> predicted_costs;  // open-loop optimum per solve
    std::vector<SolveStatus> solve_statuses;
    std::vector<double> solve_seconds;    // not part of any exported file
    Metrics metrics;
    bool aborted = false;
    std::string abort_reason;
};

enum class RealizationRule { lower, upper, trace };

/// Scenario slice starting at step k with fresh initial conditions.
Scenario make_window(const Scenario& scenario, int k, int horizon, const std::vector<double>& x,
                     const std::vector<int>& delta_prev);

struct MpcStepResult {
    std::vector<double> u;
    std::vector<int> delta;
    OpenLoopSolution open_loop;
};

/// One receding-horizon step: build, solve, extract, return the first
/// control action. Infeasibility raises InfeasibleError naming the endpoint
/// scenario that fails on its own.
MpcStepResult mpc_step(const ControllerConfig& config, const Scenario& window,
                       const MicrogridParams& params, MilpBackend& backend,
                       const SolveOptions& options);

/// Receding-horizon closed loop over Ns = scenario.horizon - Np steps. The
/// plant is the saturated droop dispatch under the controller's effective
/// droop gains. Controller infeasibility aborts with the partial record
/// preserved.
SimRecord closed_loop_simulate(const ControllerConfig& config, const Scenario& scenario,
                               RealizationRule rule, const MicrogridParams& params,
                               MilpBackend& backend, const SolveOptions& options,
                               const std::vector<std::vector<double>>* trace = nullptr);

struct ControllerComparison {
    std::string name;
    Metrics metrics;
    std::vector<double> predicted_costs;  // one per shared initial condition
    // per-sample averages of the open-loop predictions across the shared
    // initial conditions
    double avg_predicted_cost = 0.0;
    double avg_predicted_res_energy = 0.0;
    double avg_predicted_conventional_energy = 0.0;
    bool failed = false;
    std::string error;
};

struct ComparisonResult {
    std::vector<int> ic_steps;  // closed-loop steps the ICs were taken from
    std::vector<ControllerComparison> controllers;
};

/// Open-loop cost comparison across controllers at initial conditions
/// replayed from a prescient-driven closed loop, plus each controller's own
/// closed-loop metrics.
ComparisonResult compare_controllers(const std::vector<ControllerConfig>& configs,
                                     const Scenario& scenario, const MicrogridParams& params,
                                     MilpBackend& backend, const SolveOptions& options,
                                     int ic_stride = 1);

/// Metrics recomputed from a record's logged trajectory.
Metrics compute_metrics(const SimRecord& record, const MicrogridParams& params,
                        const std::vector<int>& delta0);

}  // namespace mgems
