// Acceptance suite: runs every gate criterion at its stated tolerance and
// prints one pass/fail line per criterion. Exit code 0 iff all pass.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "mgems/backend.hpp"
#include "mgems/branch_bound.hpp"
#include "mgems/dispatch.hpp"
#include "mgems/mpc.hpp"
#include "mgems/mps.hpp"
#include "mgems/oracles.hpp"
#include "mgems/rng.hpp"
#include "mgems/scenario_gen.hpp"
#include "mgems/sim.hpp"
#include "mgems/verify.hpp"

using namespace mgems;

namespace {

int g_failures = 0;

void report(int criterion, const std::string& what, bool pass, const std::string& detail,
            double seconds) {
    std::printf("[%s] criterion %2d: %s — %s (%.1f s)\n", pass ? "PASS" : "FAIL", criterion,
                what.c_str(), detail.c_str(), seconds);
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

void run_criterion(int criterion, const std::string& what,
                   const std::function<std::pair<bool, std::string>()>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    bool pass = false;
    std::string detail;
    try {
        auto [p, d] = body();
        pass = p;
        detail = d;
    } catch (const std::exception& e) {
        pass = false;
        detail = std::string("exception: ") + e.what();
    }
    const double sec =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    report(criterion, what, pass, detail, sec);
}

MicrogridParams case_params(int renewables) {
    MicrogridParams p;
    p.num_conventional = 1;
    p.num_storage = 1;
    p.num_renewable = renewables;
    p.num_loads = 1;
    p.u_min.assign(2 + renewables, -5.0);
    p.u_max.assign(2 + renewables, 5.0);
    p.p_min = {0.2, -1.0};
    p.p_max = {1.0, 1.0};
    for (int r = 0; r < renewables; ++r) {
        p.p_min.push_back(0.0);
        p.p_max.push_back(1.0);
        p.renewable_cap.push_back(1.0);
    }
    p.x_min = {0.0};
    p.x_max = {6.0};
    p.chi.assign(2 + renewables, 1.0);
    p.sampling_time = 0.25;
    p.cost_weights.fuel = {1.0};
    p.cost_weights.fixed_on = {0.2};
    p.cost_weights.switching = {0.3};
    p.cost_weights.storage = {0.9};
    return p;
}

MicrogridParams random_params(XorShift& rng, int t, int s, int r, int d) {
    MicrogridParams p;
    p.num_conventional = t;
    p.num_storage = s;
    p.num_renewable = r;
    p.num_loads = d;
    const int n = t + s + r;
    for (int i = 0; i < n; ++i) {
        const double span = rng.uniform(2.0, 6.0);
        p.u_min.push_back(-span);
        p.u_max.push_back(span);
        p.chi.push_back(rng.uniform(0.2, 2.0));
    }
    for (int i = 0; i < t; ++i) {
        p.p_min.push_back(rng.uniform(0.0, 0.3));
        p.p_max.push_back(rng.uniform(0.8, 1.5));
        p.cost_weights.fuel.push_back(rng.uniform(0.2, 2.0));
        p.cost_weights.fixed_on.push_back(rng.uniform(0.0, 0.5));
        p.cost_weights.switching.push_back(rng.uniform(0.0, 0.5));
    }
    for (int i = 0; i < s; ++i) {
        p.p_min.push_back(-rng.uniform(0.5, 1.5));
        p.p_max.push_back(rng.uniform(0.5, 1.5));
        p.x_min.push_back(0.0);
        p.x_max.push_back(rng.uniform(1.0, 6.0));
        p.cost_weights.storage.push_back(rng.uniform(0.0, 1.0));
    }
    for (int i = 0; i < r; ++i) {
        p.p_min.push_back(0.0);
        p.p_max.push_back(rng.uniform(0.8, 1.5));
        p.renewable_cap.push_back(p.p_max.back());
    }
    p.sampling_time = rng.uniform(0.1, 0.5);
    return p;
}

Scenario random_window(XorShift& rng, const MicrogridParams& p, int np, double width) {
    Scenario sc;
    sc.horizon = np;
    const int r = p.num_renewable;
    const int d = p.num_loads;
    sc.w_min.assign(np, std::vector<double>(r + d));
    sc.w_max.assign(np, std::vector<double>(r + d));
    for (int j = 0; j < np; ++j) {
        for (int e = 0; e < r; ++e) {
            const double nom = rng.uniform(0.0, p.renewable_cap[e]);
            sc.w_min[j][e] = std::max(0.0, nom - width * rng.uniform(0.0, 1.0));
            sc.w_max[j][e] = nom + width * rng.uniform(0.0, 1.0);
        }
        for (int e = 0; e < d; ++e) {
            const double nom = -rng.uniform(0.1, 1.2);
            sc.w_max[j][r + e] = std::min(0.0, nom + width * rng.uniform(0.0, 1.0));
            sc.w_min[j][r + e] = nom - width * rng.uniform(0.0, 1.0);
        }
    }
    for (int s = 0; s < p.num_storage; ++s) sc.x0.push_back(rng.uniform(p.x_min[s], p.x_max[s]));
    sc.delta0.assign(p.num_conventional, 0);
    return sc;
}

ControlPlan random_plan(XorShift& rng, const MicrogridParams& p, int np) {
    ControlPlan plan;
    plan.horizon = np;
    for (int j = 0; j < np; ++j) {
        std::vector<double> u;
        for (int i = 0; i < p.num_units(); ++i)
            u.push_back(rng.uniform(0.4 * p.u_min[i], 0.4 * p.u_max[i]));
        plan.u.push_back(std::move(u));
        std::vector<int> delta;
        for (int t = 0; t < p.num_conventional; ++t) delta.push_back(rng.coin() ? 1 : 0);
        plan.delta.push_back(std::move(delta));
    }
    return plan;
}

bool endpoints_feasible(const ControlPlan& plan, const Scenario& sc, const MicrogridParams& p) {
    for (const auto* w : {&sc.w_min, &sc.w_max}) {
        const auto traj = simulate_horizon(*w, plan, sc.x0, p);
        for (const auto& step : traj)
            if (!step.feasible) return false;
    }
    return true;
}

// criterion 1: worst-case cost sits at the lower disturbance endpoint
std::pair<bool, std::string> criterion1() {
    XorShift rng(101);
    oracles::GridSpec grid;
    grid.points_per_dim = 5;
    int done = 0;
    double max_dev = 0.0;
    for (int it = 0; it < 20000 && done < 200; ++it) {
        // at most two disturbance dimensions per step, Np <= 3
        const int r = rng.uniform_int(0, 1);
        auto p = random_params(rng, rng.uniform_int(0, 1), 1, r, rng.uniform_int(1, 2 - r));
        const int np = rng.uniform_int(1, 3);
        const auto sc = random_window(rng, p, np, 0.2);
        const auto plan = random_plan(rng, p, np);
        if (!endpoints_feasible(plan, sc, p)) continue;
        ++done;
        const auto worst = oracles::grid_worst_cost(plan, sc, grid, p);
        const auto at_min = simulate_horizon(sc.w_min, plan, sc.x0, p);
        const double cost_min = horizon_cost(at_min, plan, sc.delta0, p.cost_weights);
        max_dev = std::max(max_dev, std::abs(worst.max_cost - cost_min));
    }
    std::ostringstream oss;
    oss << done << " instances, max |grid max - cost(w_min)| = " << max_dev;
    return {done >= 200 && max_dev <= 1e-6, oss.str()};
}

// criterion 2: endpoint feasibility implies feasibility on the whole box
std::pair<bool, std::string> criterion2() {
    XorShift rng(102);
    oracles::GridSpec grid;
    grid.points_per_dim = 5;
    int done = 0, violations = 0;
    for (int it = 0; it < 20000 && done < 200; ++it) {
        const int r = rng.uniform_int(0, 1);
        auto p = random_params(rng, rng.uniform_int(0, 1), 1, r, rng.uniform_int(1, 2 - r));
        const int np = rng.uniform_int(1, 3);
        const auto sc = random_window(rng, p, np, 0.2);
        const auto plan = random_plan(rng, p, np);
        if (!endpoints_feasible(plan, sc, p)) continue;
        ++done;
        const auto res = oracles::grid_feasibility(plan, sc, grid, p);
        if (!res.all_feasible) ++violations;
    }
    std::ostringstream oss;
    oss << done << " endpoint-feasible plans, " << violations << " interior violations";
    return {done >= 200 && violations == 0, oss.str()};
}

// criterion 3: feasible-set inclusion plus the strict-inclusion witness
std::pair<bool, std::string> criterion3() {
    XorShift rng(103);
    SolveOptions opts;
    int done = 0, bad = 0;
    double max_gap = 0.0;
    for (int it = 0; it < 2000 && done < 100; ++it) {
        auto p = random_params(rng, rng.uniform_int(0, 1), 1, rng.uniform_int(0, 1), 1);
        const int np = rng.uniform_int(1, 2);
        const auto sc = random_window(rng, p, np, 0.15);
        ControllerConfig p1;
        p1.variant = ControllerVariant::res_droop_mm;
        p1.horizon = np;
        BuiltProblem built1;
        MilpSolution sol1;
        try {
            built1 = build_problem(p1, sc, p);
            sol1 = solve_milp(built1.instance, opts);
        } catch (const std::exception&) {
            continue;
        }
        if (sol1.status != SolveStatus::optimal) continue;
        ++done;
        const auto open1 = extract_solution(sol1, built1, sc, p);
        ControllerConfig p2 = p1;
        p2.variant = ControllerVariant::sat_res_droop_mm;
        auto built2 = build_problem(p2, sc, p);
        pin_controls(built2, open1.plan);
        const auto sol2 = solve_milp(built2.instance, opts);
        if (sol2.status != SolveStatus::optimal) {
            ++bad;
            continue;
        }
        max_gap = std::max(max_gap, std::abs(sol2.objective - sol1.objective));
        if (std::abs(sol2.objective - sol1.objective) > 1e-9) ++bad;
    }

    // proof witness: set-points pinned to opposite power corners
    MicrogridParams p;
    p.num_conventional = 0;
    p.num_storage = 2;
    p.num_renewable = 0;
    p.num_loads = 1;
    p.u_min = {-5, -5};
    p.u_max = {5, 5};
    p.p_min = {-1, -1};
    p.p_max = {1, 1};
    p.x_min = {0, 0};
    p.x_max = {6, 6};
    p.chi = {1, 1};
    p.sampling_time = 0.25;
    p.cost_weights.storage = {0.9, 0.9};
    Scenario sc;
    sc.horizon = 1;
    sc.w_min = {{-0.6}};
    sc.w_max = {{-0.4}};
    sc.x0 = {3.0, 3.0};
    sc.delta0 = {};
    ControlPlan pinned;
    pinned.horizon = 1;
    pinned.u = {{-1.0, 1.0}};
    pinned.delta = {{}};
    ControllerConfig satc;
    satc.variant = ControllerVariant::sat_res_droop_mm;
    satc.horizon = 1;
    auto sat_built = build_problem(satc, sc, p);
    pin_controls(sat_built, pinned);
    const bool sat_ok = solve_milp(sat_built.instance).status == SolveStatus::optimal;
    ControllerConfig linc;
    linc.variant = ControllerVariant::res_droop_mm;
    linc.horizon = 1;
    auto lin_built = build_problem(linc, sc, p);
    pin_controls(lin_built, pinned);
    const bool lin_infeasible =
        solve_milp(lin_built.instance).status == SolveStatus::infeasible;

    std::ostringstream oss;
    oss << done << " problem-1 points, " << bad << " inclusion failures, max cost gap "
        << max_gap << "; witness saturated=" << (sat_ok ? "feasible" : "INFEASIBLE")
        << " unsaturated=" << (lin_infeasible ? "infeasible" : "FEASIBLE");
    return {done >= 100 && bad == 0 && sat_ok && lin_infeasible, oss.str()};
}

// criterion 4: rho and step monotonicity
std::pair<bool, std::string> criterion4() {
    XorShift rng(104);
    int violations = 0;
    for (int it = 0; it < 1000; ++it) {
        auto p = random_params(rng, rng.uniform_int(0, 2), rng.uniform_int(1, 2),
                               rng.uniform_int(0, 2), rng.uniform_int(1, 2));
        std::vector<double> u, x, w;
        std::vector<int> delta;
        for (int i = 0; i < p.num_units(); ++i)
            u.push_back(rng.uniform(0.4 * p.u_min[i], 0.4 * p.u_max[i]));
        for (int i = 0; i < p.num_conventional; ++i) delta.push_back(rng.coin() ? 1 : 0);
        for (int i = 0; i < p.num_storage; ++i)
            x.push_back(rng.uniform(p.x_min[i], p.x_max[i]));
        for (int i = 0; i < p.num_renewable; ++i)
            w.push_back(rng.uniform(0.0, p.renewable_cap[i]));
        for (int i = 0; i < p.num_loads; ++i) w.push_back(-rng.uniform(0.0, 1.5));

        auto x2 = x;
        auto w2 = w;
        for (std::size_t i = 0; i < x2.size(); ++i)
            x2[i] = std::min(x2[i] + rng.uniform(0.0, 0.5), p.x_max[i]);
        for (std::size_t i = 0; i < w2.size(); ++i) {
            if (static_cast<int>(i) < p.num_renewable)
                w2[i] += rng.uniform(0.0, 0.5);
            else
                w2[i] = std::min(0.0, w2[i] + rng.uniform(0.0, 0.5));
        }
        const double r1 = solve_rho(u, delta, x, w, p).rho;
        if (solve_rho(u, delta, x2, w, p).rho > r1 + 1e-9) ++violations;
        if (solve_rho(u, delta, x, w2, p).rho > r1 + 1e-9) ++violations;

        const auto o1 = dispatch_step(u, delta, x, w, p);
        const auto o2 = dispatch_step(u, delta, x2, w2, p);
        if (o2.rho > o1.rho + 1e-9) ++violations;
        for (int i = 0; i < p.num_conventional; ++i)
            if (o2.p[i] > o1.p[i] + 1e-9) ++violations;
        for (int i = 0; i < p.num_storage; ++i)
            if (o2.x[i] < o1.x[i] - 1e-9) ++violations;
    }
    std::ostringstream oss;
    oss << "1000 lemma-1 and 1000 lemma-2 comparisons, " << violations << " violations";
    return {violations == 0, oss.str()};
}

// criterion 5: breakpoint scan vs bisection oracle
std::pair<bool, std::string> criterion5() {
    XorShift rng(105);
    int flat_runs = 0;
    double max_dev = 0.0;
    for (int it = 0; it < 1000; ++it) {
        auto p = random_params(rng, rng.uniform_int(0, 2), rng.uniform_int(1, 2),
                               rng.uniform_int(0, 2), rng.uniform_int(1, 2));
        std::vector<double> u, x, w;
        std::vector<int> delta;
        for (int i = 0; i < p.num_units(); ++i)
            u.push_back(rng.uniform(0.4 * p.u_min[i], 0.4 * p.u_max[i]));
        for (int i = 0; i < p.num_conventional; ++i) delta.push_back(1);
        for (int i = 0; i < p.num_storage; ++i)
            x.push_back(rng.uniform(p.x_min[i], p.x_max[i]));
        for (int i = 0; i < p.num_renewable; ++i)
            w.push_back(rng.uniform(0.0, p.renewable_cap[i]));
        for (int i = 0; i < p.num_loads; ++i) w.push_back(-rng.uniform(0.0, 1.5));

        if (it % 4 == 0) {
            // force a flat zero run: load exactly the saturated total output
            auto [lo, hi] = dynamic_storage_limits(x, p);
            double cap = 0.0;
            for (double h : hi) cap += h;
            for (int i = 0; i < p.num_conventional; ++i) cap += p.p_max[i];
            for (int i = 0; i < p.num_renewable; ++i) cap += w[i];
            for (std::size_t i = p.num_renewable; i < w.size(); ++i) w[i] = 0.0;
            w.back() = -cap;
            ++flat_runs;
        }
        const double a = solve_rho(u, delta, x, w, p).rho;
        const double b = oracles::bisection_rho(u, delta, x, w, p);
        max_dev = std::max(max_dev, std::abs(a - b) / std::max(1.0, std::abs(b)));
    }
    std::ostringstream oss;
    oss << "1000 instances (" << flat_runs << " forced flat runs), max rel dev " << max_dev;
    return {max_dev <= 1e-9, oss.str()};
}

// criterion 6: direct vs transformed storage step
std::pair<bool, std::string> criterion6() {
    XorShift rng(106);
    double max_dev = 0.0;
    for (int it = 0; it < 1000; ++it) {
        auto p = random_params(rng, 0, 1, 0, 1);
        const double x = rng.uniform(p.x_min[0], p.x_max[0]);
        const double demand = rng.uniform(-3.0, 3.0);
        const auto a = storage_step_direct(x, demand, p, 0);
        const auto b = storage_step_transformed(x, demand, p, 0);
        max_dev = std::max({max_dev, std::abs(a.power - b.power), std::abs(a.energy - b.energy)});
    }
    std::ostringstream oss;
    oss << "1000 steps, max deviation " << max_dev;
    return {max_dev <= 1e-12, oss.str()};
}

// criterion 7: solver vs brute-force enumeration on desk-scale instances
std::pair<bool, std::string> criterion7() {
    XorShift rng(107);
    SolveOptions opts;
    int done = 0, bad = 0;
    double worst_excess = 0.0;
    for (int it = 0; it < 600 && done < 50; ++it) {
        const int r = rng.uniform_int(0, 1);
        auto p = random_params(rng, 1, 1, r, 1);
        const int np = rng.uniform_int(1, 2);
        const auto sc = random_window(rng, p, np, 0.1);
        ControllerConfig cfg;
        cfg.horizon = np;
        switch (it % 3) {
            case 0: cfg.variant = ControllerVariant::prescient; break;
            case 1: cfg.variant = ControllerVariant::sat_mm; break;
            default: cfg.variant = ControllerVariant::sat_res_droop_mm; break;
        }
        BuiltProblem built;
        MilpSolution sol;
        try {
            built = build_problem(cfg, sc, p);
            sol = solve_milp(built.instance, opts);
        } catch (const std::exception&) {
            continue;
        }
        const auto enumerated = oracles::enumerate_small_milp(cfg, sc, p, 5);
        if (sol.status != SolveStatus::optimal) {
            // solver infeasible: the oracle must not find a robust candidate
            if (enumerated.found) ++bad;
            continue;
        }
        ++done;
        try {
            (void)extract_solution(sol, built, sc, p);  // round-trip agreement
        } catch (const EncodingDefectError&) {
            ++bad;
            continue;
        }
        if (!enumerated.found) continue;  // optimum exists off the oracle grid
        const double excess = sol.objective - enumerated.best_cost;
        worst_excess = std::max(worst_excess, excess);
        if (excess > 1e-6) ++bad;
    }
    std::ostringstream oss;
    oss << done << " solved toys, " << bad
        << " violations, worst (milp - enumeration) = " << worst_excess;
    return {done >= 50 && bad == 0, oss.str()};
}

// criterion 8: qualitative case-study reproduction on a seeded scenario
std::pair<bool, std::string> criterion8() {
    const auto params = case_params(2);
    const Scenario scenario = gen_synthetic_scenario(2024, 2, params, 0.15);
    const int np = 8;
    SolveOptions opts;
    BackendRegistry registry;
    auto backend = registry.get("reference");

    ControllerConfig prescient;
    prescient.variant = ControllerVariant::prescient;
    prescient.horizon = np;
    const SimRecord ref = closed_loop_simulate(prescient, scenario, RealizationRule::lower,
                                               params, *backend, opts);
    if (ref.aborted) return {false, "prescient reference closed loop aborted"};

    // shared initial conditions along the prescient-driven loop
    std::vector<int> ic_steps;
    std::vector<std::vector<double>> ic_x;
    std::vector<std::vector<int>> ic_delta;
    {
        std::vector<double> x = scenario.x0;
        std::vector<int> d = scenario.delta0;
        for (int k = 0; k < ref.steps; ++k) {
            if (k % 16 == 0) {
                ic_steps.push_back(k);
                ic_x.push_back(x);
                ic_delta.push_back(d);
            }
            x = ref.outcomes[k].x;
            d = ref.applied_delta[k];
        }
    }

    const std::vector<ControllerVariant> variants{
        ControllerVariant::prescient, ControllerVariant::mm, ControllerVariant::sat_mm,
        ControllerVariant::res_droop_mm, ControllerVariant::sat_res_droop_mm};
    std::vector<std::vector<double>> cost(variants.size());
    for (std::size_t v = 0; v < variants.size(); ++v) {
        ControllerConfig cfg;
        cfg.variant = variants[v];
        cfg.horizon = np;
        for (std::size_t i = 0; i < ic_steps.size(); ++i) {
            const Scenario window = make_window(scenario, ic_steps[i], np, ic_x[i], ic_delta[i]);
            auto built = build_problem(cfg, window, params);
            const auto sol = solve_milp(built.instance, opts);
            if (sol.status != SolveStatus::optimal)
                return {false, variant_name(cfg.variant) + " not optimal at ic " +
                                   std::to_string(ic_steps[i]) + ": " + to_string(sol.status)};
            cost[v].push_back(sol.objective);
        }
    }

    const double tol = 2 * opts.abs_gap;
    int order_bad = 0;
    for (std::size_t i = 0; i < ic_steps.size(); ++i) {
        for (std::size_t v = 1; v < variants.size(); ++v)
            if (cost[0][i] > cost[v][i] + tol) ++order_bad;  // prescient lower bound
        if (cost[4][i] > cost[3][i] + tol) ++order_bad;      // sat-res <= res
        if (cost[4][i] > cost[2][i] + tol) ++order_bad;      // sat-res <= sat-mm
    }

    // zero uncertainty: every variant predicts the same cost
    const Scenario zero = gen_synthetic_scenario(2024, 1, params, 0.0);
    int zero_bad = 0;
    for (int k : {0, 30, 60}) {
        std::vector<double> costs;
        const Scenario window = make_window(zero, k, np, zero.x0, zero.delta0);
        for (const auto v : variants) {
            ControllerConfig cfg;
            cfg.variant = v;
            cfg.horizon = np;
            auto built = build_problem(cfg, window, params);
            const auto sol = solve_milp(built.instance, opts);
            if (sol.status != SolveStatus::optimal) return {false, "zero-width solve failed"};
            costs.push_back(sol.objective);
        }
        for (double c : costs)
            if (std::abs(c - costs.front()) > tol) ++zero_bad;
    }

    std::ostringstream oss;
    oss << ic_steps.size() << " initial conditions, " << order_bad << " ordering violations, "
        << zero_bad << " zero-width mismatches";
    return {order_bad == 0 && zero_bad == 0, oss.str()};
}

#ifdef MGEMS_CLI_PATH
std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// criterion 9: byte-identical outputs of seeded CLI runs
std::pair<bool, std::string> criterion9() {
    const std::string cli = MGEMS_CLI_PATH;
    const std::string dir = "/tmp/mgems-acceptance";
    std::system(("rm -rf " + dir + " && mkdir -p " + dir).c_str());

    auto run = [&](const std::string& cmd) {
        const int rc = std::system((cli + " " + cmd + " > /dev/null 2>&1").c_str());
        return rc == 0;
    };

    if (!run("gen-scenario --seed 7 --days 1 --width 0.1 --out " + dir + "/s1.json") ||
        !run("gen-scenario --seed 7 --days 1 --width 0.1 --out " + dir + "/s2.json"))
        return {false, "gen-scenario failed"};
    if (slurp(dir + "/s1.json") != slurp(dir + "/s2.json"))
        return {false, "gen-scenario outputs differ"};

    const std::string sim_args = " --controller sat-res-mm --horizon 4 --realization min";
    if (!run("simulate --scenario " + dir + "/s1.json" + sim_args + " --out " + dir + "/t1.csv") ||
        !run("simulate --scenario " + dir + "/s1.json" + sim_args + " --out " + dir + "/t2.csv"))
        return {false, "simulate failed"};
    if (slurp(dir + "/t1.csv") != slurp(dir + "/t2.csv"))
        return {false, "simulate outputs differ"};

    if (!run("verify --seed 11 --report " + dir + "/r1.json") ||
        !run("verify --seed 11 --report " + dir + "/r2.json"))
        return {false, "verify failed"};
    if (slurp(dir + "/r1.json") != slurp(dir + "/r2.json"))
        return {false, "verify reports differ"};

    return {true, "gen-scenario, simulate and verify outputs byte-identical across reruns"};
}
#endif

// criterion 10: full case-study scale builds and exports
std::pair<bool, std::string> criterion10() {
    const auto params = case_params(2);
    const Scenario scenario = gen_synthetic_scenario(99, 7, params, 0.15);
    const int np = 32;
    const int ns = 576;
    if (scenario.horizon < ns + np) return {false, "scenario too short for Ns=576"};

    std::size_t vars = 0, cons = 0, binaries = 0;
    for (const int k : {0, ns - 1}) {
        const Scenario window = make_window(scenario, k, np, scenario.x0, scenario.delta0);
        ControllerConfig cfg;
        cfg.variant = ControllerVariant::sat_res_droop_mm;
        cfg.horizon = np;
        const auto built = build_problem(cfg, window, params);
        const auto issues = built.instance.validate();
        if (!issues.empty()) return {false, "instance invalid: " + issues.front()};
        std::stringstream buf;
        write_mps(built.instance, buf);
        const auto parsed = read_mps(buf);
        if (parsed.vars.size() != built.instance.vars.size() ||
            parsed.cons.size() != built.instance.cons.size())
            return {false, "MPS round trip lost structure"};
        vars = built.instance.vars.size();
        cons = built.instance.cons.size();
        binaries = static_cast<std::size_t>(built.layout.num_binaries);
    }
    std::ostringstream oss;
    oss << "Np=32 windows at k=0 and k=" << ns - 1 << " build and export; " << vars
        << " variables (" << binaries << " binary), " << cons
        << " constraints; solving at this scale is delegated to an external backend";
    return {true, oss.str()};
}

}  // namespace

int main() {
    std::printf("acceptance suite\n");
    run_criterion(1, "worst-case cost at w_min (grid oracle)", criterion1);
    run_criterion(2, "endpoint feasibility is sufficient (grid oracle)", criterion2);
    run_criterion(3, "feasible-set inclusion and strict witness", criterion3);
    run_criterion(4, "rho/step monotonicity", criterion4);
    run_criterion(5, "breakpoint scan vs bisection oracle", criterion5);
    run_criterion(6, "storage formulation equivalence", criterion6);
    run_criterion(7, "solver optimum vs brute-force enumeration", criterion7);
    run_criterion(8, "case-study cost orderings", criterion8);
#ifdef MGEMS_CLI_PATH
    run_criterion(9, "seeded CLI determinism", criterion9);
#else
    report(9, "seeded CLI determinism", false, "CLI path not configured", 0.0);
#endif
    run_criterion(10, "full-scale build and export", criterion10);

    if (g_failures == 0) {
        std::printf("all criteria passed\n");
        return 0;
    }
    std::printf("%d criteria FAILED\n", g_failures);
    return 1;
}
