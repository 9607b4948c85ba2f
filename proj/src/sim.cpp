#include "mgems/sim.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

#include "mgems/branch_bound.hpp"
#include "mgems/dispatch.hpp"

namespace mgems {

Scenario make_window(const Scenario& scenario, int k, int horizon, const std::vector<double>& x,
                     const std::vector<int>& delta_prev) {
    if (k < 0 || k + horizon > scenario.horizon)
        throw DimensionError("make_window: window reaches past the scenario end");
    Scenario w;
    w.horizon = horizon;
    w.w_min.assign(scenario.w_min.begin() + k, scenario.w_min.begin() + k + horizon);
    w.w_max.assign(scenario.w_max.begin() + k, scenario.w_max.begin() + k + horizon);
    w.x0 = x;
    w.delta0 = delta_prev;
    return w;
}

namespace {

// Feasibility probe for one endpoint on its own: collapse the disturbance
// box onto that endpoint and resolve.
bool endpoint_feasible(const ControllerConfig& config, const Scenario& window,
                       const MicrogridParams& params, MilpBackend& backend,
                       const SolveOptions& options, bool upper) {
    Scenario collapsed = window;
    if (upper)
        collapsed.w_min = collapsed.w_max;
    else
        collapsed.w_max = collapsed.w_min;
    auto built = build_problem(config, collapsed, params);
    const auto sol = backend.solve(built.instance, options);
    return sol.status == SolveStatus::optimal || sol.status == SolveStatus::gap_limit;
}

}  // namespace

MpcStepResult mpc_step(const ControllerConfig& config, const Scenario& window,
                       const MicrogridParams& params, MilpBackend& backend,
                       const SolveOptions& options) {
    auto built = build_problem(config, window, params);
    const MilpSolution sol = backend.solve(built.instance, options);

    if (sol.status == SolveStatus::infeasible) {
        std::ostringstream oss;
        oss << variant_name(config.variant) << ": open-loop problem infeasible";
        const bool lo_ok = endpoint_feasible(config, window, params, backend, options, false);
        const bool hi_ok = endpoint_feasible(config, window, params, backend, options, true);
        oss << " (w_min endpoint " << (lo_ok ? "feasible" : "infeasible") << ", w_max endpoint "
            << (hi_ok ? "feasible" : "infeasible") << ")";
        throw InfeasibleError(oss.str());
    }
    if (sol.status == SolveStatus::resource_limit)
        throw ResourceError("mpc_step: solver hit its resource limit without an incumbent");
    if (sol.status != SolveStatus::optimal && sol.status != SolveStatus::gap_limit)
        throw NumericalError("mpc_step: solver returned " + to_string(sol.status));

    MpcStepResult out;
    out.open_loop = extract_solution(sol, built, window, params);
    out.u = out.open_loop.plan.u[0];
    out.delta = out.open_loop.plan.delta[0];
    return out;
}

SimRecord closed_loop_simulate(const ControllerConfig& config, const Scenario& scenario,
                               RealizationRule rule, const MicrogridParams& params,
                               MilpBackend& backend, const SolveOptions& options,
                               const std::vector<std::vector<double>>* trace) {
    SimRecord rec;
    rec.controller = variant_name(config.variant);
    const int ns = scenario.horizon - config.horizon;
    if (ns < 1)
        throw ValidationError(
            "closed_loop_simulate: scenario too short for one full prediction window");
    if (rule == RealizationRule::trace) {
        if (!trace) throw ValidationError("closed_loop_simulate: trace rule without a trace");
        if (static_cast<int>(trace->size()) < ns)
            throw ValidationError("closed_loop_simulate: trace shorter than the simulation");
    }

    MicrogridParams plant = params;
    plant.chi = effective_chi(config, params);

    std::vector<double> x = scenario.x0;
    std::vector<int> delta_prev = scenario.delta0;

    for (int k = 0; k < ns; ++k) {
        const Scenario window = make_window(scenario, k, config.horizon, x, delta_prev);
        MpcStepResult step;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            step = mpc_step(config, window, params, backend, options);
        } catch (const InfeasibleError& e) {
            rec.aborted = true;
            rec.abort_reason = e.what();
            break;
        }
        rec.solve_seconds.push_back(
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
        rec.predicted_costs.push_back(step.open_loop.predicted_cost);
        rec.solve_statuses.push_back(step.open_loop.status);

        std::vector<double> w;
        switch (rule) {
            case RealizationRule::lower: w = scenario.w_min[k]; break;
            case RealizationRule::upper: w = scenario.w_max[k]; break;
            case RealizationRule::trace: {
                w = (*trace)[k];
                for (std::size_t e = 0; e < w.size(); ++e) {
                    if (w[e] < scenario.w_min[k][e] - 1e-9 || w[e] > scenario.w_max[k][e] + 1e-9)
                        throw ValidationError(
                            "closed_loop_simulate: trace leaves the forecast box at step " +
                            std::to_string(k));
                }
                break;
            }
        }

        const StepOutcome outcome = dispatch_step(step.u, step.delta, x, w, plant);
        rec.applied_u.push_back(step.u);
        rec.applied_delta.push_back(step.delta);
        rec.realized_w.push_back(w);
        rec.outcomes.push_back(outcome);
        rec.stage_costs.push_back(
            stage_cost(outcome.p, step.delta, delta_prev, params.cost_weights));
        x = outcome.x;
        delta_prev = step.delta;
        ++rec.steps;
    }

    rec.metrics = compute_metrics(rec, params, scenario.delta0);
    return rec;
}

Metrics compute_metrics(const SimRecord& record, const MicrogridParams& params,
                        const std::vector<int>& delta0) {
    Metrics m;
    if (record.steps == 0) return m;
    double cost = 0.0, res = 0.0, conv = 0.0;
    long switches = 0;
    const std::vector<int>* prev = &delta0;
    for (int k = 0; k < record.steps; ++k) {
        cost += record.stage_costs[k];
        for (int r = 0; r < params.num_renewable; ++r)
            res += record.outcomes[k].p[params.renewable_begin() + r];
        for (int t = 0; t < params.num_conventional; ++t) {
            conv += record.outcomes[k].p[t];
            switches += std::abs(record.applied_delta[k][t] - (*prev)[t]);
        }
        prev = &record.applied_delta[k];
    }
    m.per_sample_cost = cost / record.steps;
    m.per_sample_res_energy = params.sampling_time * res / record.steps;
    m.per_sample_conventional_energy = params.sampling_time * conv / record.steps;
    m.switching_count = switches;
    return m;
}

ComparisonResult compare_controllers(const std::vector<ControllerConfig>& configs,
                                     const Scenario& scenario, const MicrogridParams& params,
                                     MilpBackend& backend, const SolveOptions& options,
                                     int ic_stride) {
    if (configs.empty()) throw ValidationError("compare_controllers: no controllers given");
    if (ic_stride < 1) throw ValidationError("compare_controllers: stride must be >= 1");
    const int np = configs.front().horizon;
    for (const auto& c : configs)
        if (c.horizon != np)
            throw ValidationError("compare_controllers: controllers must share the horizon");

    // reference closed loop that supplies the initial conditions
    ControllerConfig prescient;
    prescient.variant = ControllerVariant::prescient;
    prescient.horizon = np;
    const SimRecord ref =
        closed_loop_simulate(prescient, scenario, RealizationRule::lower, params, backend,
                             options);
    if (ref.aborted)
        throw InfeasibleError("compare_controllers: prescient reference run aborted: " +
                              ref.abort_reason);

    ComparisonResult out;
    std::vector<std::vector<double>> ic_x;
    std::vector<std::vector<int>> ic_delta;
    {
        std::vector<double> x = scenario.x0;
        std::vector<int> d = scenario.delta0;
        for (int k = 0; k < ref.steps; ++k) {
            if (k % ic_stride == 0) {
                out.ic_steps.push_back(k);
                ic_x.push_back(x);
                ic_delta.push_back(d);
            }
            x = ref.outcomes[k].x;
            d = ref.applied_delta[k];
        }
    }

    for (const auto& config : configs) {
        ControllerComparison cc;
        cc.name = variant_name(config.variant);
        try {
            double res_energy = 0.0, conv_energy = 0.0;
            for (std::size_t i = 0; i < out.ic_steps.size(); ++i) {
                const Scenario window =
                    make_window(scenario, out.ic_steps[i], np, ic_x[i], ic_delta[i]);
                auto built = build_problem(config, window, params);
                const auto sol = backend.solve(built.instance, options);
                if (sol.status != SolveStatus::optimal && sol.status != SolveStatus::gap_limit)
                    throw InfeasibleError(cc.name + ": open-loop solve at step " +
                                          std::to_string(out.ic_steps[i]) + " returned " +
                                          to_string(sol.status));
                cc.predicted_costs.push_back(sol.objective);
                const auto open = extract_solution(sol, built, window, params);
                for (const auto& step : open.trajectory_min) {
                    for (int r = 0; r < params.num_renewable; ++r)
                        res_energy += step.p[params.renewable_begin() + r];
                    for (int t = 0; t < params.num_conventional; ++t) conv_energy += step.p[t];
                }
            }
            if (!out.ic_steps.empty()) {
                const double samples = static_cast<double>(out.ic_steps.size()) * np;
                double cost_sum = 0.0;
                for (double c : cc.predicted_costs) cost_sum += c / np;
                cc.avg_predicted_cost = cost_sum / out.ic_steps.size();
                cc.avg_predicted_res_energy = params.sampling_time * res_energy / samples;
                cc.avg_predicted_conventional_energy =
                    params.sampling_time * conv_energy / samples;
            }
            const SimRecord rec = closed_loop_simulate(config, scenario, RealizationRule::lower,
                                                       params, backend, options);
            if (rec.aborted) throw InfeasibleError(cc.name + ": closed loop aborted");
            cc.metrics = rec.metrics;
        } catch (const std::exception& e) {
            cc.failed = true;
            cc.error = e.what();
        }
        out.controllers.push_back(std::move(cc));
    }
    return out;
}

}  // namespace mgems
