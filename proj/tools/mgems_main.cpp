#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "mgems/backend.hpp"
#include "mgems/branch_bound.hpp"
#include "mgems/mps.hpp"
#include "mgems/mpc.hpp"
#include "mgems/oracles.hpp"
#include "mgems/scenario_gen.hpp"
#include "mgems/scenario_io.hpp"
#include "mgems/sim.hpp"
#include "mgems/verify.hpp"

namespace {

using namespace mgems;

// Case-study-shaped default microgrid: one conventional unit, one storage,
// wind + pv, one load. Renewable caps are derived from the generated
// profiles.
MicrogridParams default_params() {
    MicrogridParams p;
    p.num_conventional = 1;
    p.num_storage = 1;
    p.num_renewable = 2;
    p.num_loads = 1;
    p.u_min = {-5, -5, -5, -5};
    p.u_max = {5, 5, 5, 5};
    p.p_min = {0.2, -1, 0, 0};
    p.p_max = {1, 1, 1, 1};
    p.x_min = {0};
    p.x_max = {6};
    p.chi = {1, 1, 1, 1};
    p.sampling_time = 0.25;
    p.cost_weights.fuel = {1.0};
    p.cost_weights.fixed_on = {0.2};
    p.cost_weights.switching = {0.3};
    p.cost_weights.storage = {0.9};
    p.renewable_cap = {0.0, 0.0};  // derived from the profiles
    return p;
}

std::shared_ptr<MilpBackend> pick_backend(BackendRegistry& registry, const std::string& spec) {
    const std::string prefix = "subprocess:";
    if (spec.rfind(prefix, 0) == 0) {
        auto backend = make_subprocess_backend("external", spec.substr(prefix.size()));
        registry.register_backend(backend);
        return backend;
    }
    if (spec == "mps-roundtrip") {
        auto backend = make_mps_roundtrip_backend();
        registry.register_backend(backend);
        return backend;
    }
    return registry.get(spec);
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot open output file: " + path);
    return out;
}

int run(int argc, char** argv) {
    CLI::App app{"droop-controlled microgrid energy management toolkit"};
    app.require_subcommand(1);

    BackendRegistry registry;

    // gen-scenario
    auto* gen = app.add_subcommand("gen-scenario", "generate a synthetic scenario");
    std::uint64_t seed = 42;
    int days = 2;
    double width = 0.2;
    std::string out_path, params_path;
    std::vector<double> x0_arg;
    gen->add_option("--seed", seed, "rng seed");
    gen->add_option("--days", days, "number of days");
    gen->add_option("--width", width, "uncertainty width fraction");
    gen->add_option("--out", out_path, "output scenario JSON")->required();
    gen->add_option("--params", params_path, "microgrid params JSON (default: built-in)");
    gen->add_option("--x0", x0_arg, "initial storage energies");

    // solve
    auto* solve = app.add_subcommand("solve", "solve one open-loop problem");
    std::string scenario_path, controller = "sat-res-mm", backend_spec = "reference";
    std::string export_mps_path;
    int horizon = 8;
    double gap = 1e-6;
    long node_limit = 2000000;
    solve->add_option("--scenario", scenario_path, "scenario JSON")->required();
    solve->add_option("--controller", controller,
                      "prescient|mm|sat-mm|res-mm|sat-res-mm");
    solve->add_option("--horizon", horizon, "prediction horizon Np");
    solve->add_option("--backend", backend_spec,
                      "reference|mps-roundtrip|subprocess:<cmd with {in} {out}>");
    solve->add_option("--out", out_path, "solution JSON");
    solve->add_option("--export-mps", export_mps_path, "also write the MILP as MPS");
    solve->add_option("--gap", gap, "absolute optimality gap");
    solve->add_option("--node-limit", node_limit, "branch-and-bound node limit");

    // simulate
    auto* sim = app.add_subcommand("simulate", "closed-loop receding-horizon simulation");
    std::string realization = "min";
    sim->add_option("--scenario", scenario_path, "scenario JSON")->required();
    sim->add_option("--controller", controller, "controller variant");
    sim->add_option("--horizon", horizon, "prediction horizon Np");
    sim->add_option("--realization", realization, "min|max|trace:<file>");
    sim->add_option("--backend", backend_spec, "backend");
    sim->add_option("--out", out_path, "trajectory CSV")->required();
    sim->add_option("--gap", gap, "absolute optimality gap");
    sim->add_option("--node-limit", node_limit, "branch-and-bound node limit");

    // compare
    auto* cmp = app.add_subcommand("compare", "open- and closed-loop controller comparison");
    std::vector<std::string> controllers;
    std::string openloop_path;
    int ic_stride = 1;
    cmp->add_option("--scenario", scenario_path, "scenario JSON")->required();
    cmp->add_option("--controllers", controllers, "controller list")->required();
    cmp->add_option("--horizon", horizon, "prediction horizon Np");
    cmp->add_option("--backend", backend_spec, "backend");
    cmp->add_option("--out", out_path, "metrics CSV")->required();
    cmp->add_option("--out-openloop", openloop_path, "per-initial-condition predicted costs CSV");
    cmp->add_option("--ic-stride", ic_stride, "stride over initial conditions");
    cmp->add_option("--gap", gap, "absolute optimality gap");
    cmp->add_option("--node-limit", node_limit, "branch-and-bound node limit");

    // verify
    auto* ver = app.add_subcommand("verify", "run the property verification suites");
    std::string report_path;
    ver->add_option("--seed", seed, "rng seed");
    ver->add_option("--report", report_path, "JSON report path");

    // solve-mps: reference solver behind the subprocess contract
    auto* smps = app.add_subcommand("solve-mps", "solve an MPS file, write a solution file");
    std::string in_path;
    smps->add_option("--in", in_path, "MPS instance")->required();
    smps->add_option("--out", out_path, "solution file")->required();
    smps->add_option("--gap", gap, "absolute optimality gap");
    smps->add_option("--node-limit", node_limit, "branch-and-bound node limit");

    CLI11_PARSE(app, argc, argv);

    SolveOptions options;
    options.abs_gap = gap;
    options.node_limit = node_limit;

    if (gen->parsed()) {
        MicrogridParams params =
            params_path.empty() ? default_params() : load_scenario_file(params_path).first;
        std::optional<std::vector<double>> x0;
        if (!x0_arg.empty()) x0 = x0_arg;
        // caps must exist before validation; derive below from the profiles
        for (auto& c : params.renewable_cap)
            if (c <= 0.0) c = 1.0;
        Scenario sc = gen_synthetic_scenario(seed, days, params, width, x0);
        for (int r = 0; r < params.num_renewable; ++r) {
            double cap = 0.0;
            for (const auto& row : sc.w_max) cap = std::max(cap, row[r]);
            params.renewable_cap[r] = cap > 0.0 ? cap : 1.0;
        }
        auto out = open_out(out_path);
        save_scenario_json(params, sc, out);
        return 0;
    }

    if (solve->parsed()) {
        auto [params, sc] = load_scenario_file(scenario_path);
        ControllerConfig config;
        config.variant = parse_variant(controller);
        config.horizon = horizon;
        const Scenario window = make_window(sc, 0, horizon, sc.x0, sc.delta0);
        auto built = build_problem(config, window, params);
        if (!export_mps_path.empty()) {
            auto mps_out = open_out(export_mps_path);
            write_mps(built.instance, mps_out);
        }
        auto backend = pick_backend(registry, backend_spec);
        const auto sol = backend->solve(built.instance, options);
        if (sol.status == SolveStatus::infeasible) {
            std::cerr << "open-loop problem infeasible\n";
            return 2;
        }
        if (sol.status == SolveStatus::resource_limit) {
            std::cerr << "solver resource limit reached without incumbent\n";
            return 3;
        }
        const auto open_loop = extract_solution(sol, built, window, params);
        std::cout << variant_name(config.variant) << ": status " << to_string(sol.status)
                  << ", predicted cost " << open_loop.predicted_cost << ", nodes " << sol.nodes
                  << "\n";
        if (!out_path.empty()) {
            auto out = open_out(out_path);
            write_solution_json(open_loop, params, out);
        }
        return 0;
    }

    if (sim->parsed()) {
        auto [params, sc] = load_scenario_file(scenario_path);
        ControllerConfig config;
        config.variant = parse_variant(controller);
        config.horizon = horizon;
        auto backend = pick_backend(registry, backend_spec);

        RealizationRule rule = RealizationRule::lower;
        std::vector<std::vector<double>> trace;
        const std::vector<std::vector<double>>* trace_ptr = nullptr;
        if (realization == "min") {
            rule = RealizationRule::lower;
        } else if (realization == "max") {
            rule = RealizationRule::upper;
        } else if (realization.rfind("trace:", 0) == 0) {
            rule = RealizationRule::trace;
            std::ifstream tf(realization.substr(6));
            if (!tf) throw ValidationError("cannot open trace file");
            trace = read_trace_csv(tf, params.num_renewable + params.num_loads);
            trace_ptr = &trace;
        } else {
            throw ValidationError("unknown realization rule: " + realization);
        }

        const SimRecord rec =
            closed_loop_simulate(config, sc, rule, params, *backend, options, trace_ptr);
        auto out = open_out(out_path);
        write_trajectory_csv(rec, params, out);
        std::cout << rec.controller << ": " << rec.steps << " steps, per-sample cost "
                  << rec.metrics.per_sample_cost << ", switches " << rec.metrics.switching_count
                  << "\n";
        if (rec.aborted) {
            std::cerr << "aborted: " << rec.abort_reason << "\n";
            return 2;
        }
        return 0;
    }

    if (cmp->parsed()) {
        auto [params, sc] = load_scenario_file(scenario_path);
        std::vector<ControllerConfig> configs;
        for (const auto& name : controllers) {
            ControllerConfig c;
            c.variant = parse_variant(name);
            c.horizon = horizon;
            configs.push_back(c);
        }
        auto backend = pick_backend(registry, backend_spec);
        const auto result =
            compare_controllers(configs, sc, params, *backend, options, ic_stride);
        auto out = open_out(out_path);
        write_metrics_csv(result.controllers, out);
        if (!openloop_path.empty()) {
            auto out2 = open_out(openloop_path);
            write_openloop_csv(result, out2);
        }
        bool any_failed = false;
        for (const auto& c : result.controllers) {
            if (c.failed) {
                any_failed = true;
                std::cerr << c.name << ": " << c.error << "\n";
            }
        }
        return any_failed ? 2 : 0;
    }

    if (ver->parsed()) {
        const auto results = run_verification_suite(seed);
        for (const auto& r : results) {
            std::cout << (r.failures == 0 ? "[PASS] " : "[FAIL] ") << r.name << " ("
                      << r.instances << " instances";
            if (r.failures > 0) std::cout << ", " << r.failures << " failures";
            std::cout << ")\n";
            if (r.failures > 0) std::cout << "  first failure: " << r.first_failure << "\n";
        }
        if (!report_path.empty()) {
            auto out = open_out(report_path);
            out << "{\n  \"seed\": " << seed << ",\n  \"suites\": [\n";
            for (std::size_t i = 0; i < results.size(); ++i) {
                const auto& r = results[i];
                out << "    {\"name\": \"" << r.name << "\", \"instances\": " << r.instances
                    << ", \"failures\": " << r.failures << "}"
                    << (i + 1 < results.size() ? "," : "") << "\n";
            }
            out << "  ]\n}\n";
        }
        return all_passed(results) ? 0 : 1;
    }

    if (smps->parsed()) {
        std::ifstream in(in_path);
        if (!in) throw ValidationError("cannot open MPS file: " + in_path);
        const MilpInstance instance = read_mps(in);
        const MilpSolution sol = solve_milp(instance, options);
        auto out = open_out(out_path);
        write_solution(sol, instance, out);
        return sol.status == SolveStatus::resource_limit ? 3 : 0;
    }

    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const InfeasibleError& e) {
        std::cerr << "infeasible: " << e.what() << "\n";
        return 2;
    } catch (const ResourceError& e) {
        std::cerr << "resource limit: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
