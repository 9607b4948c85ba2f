#include "mgems/verify.hpp"

#include <cmath>
#include <functional>
#include <sstream>

#include "mgems/backend.hpp"
#include "mgems/branch_bound.hpp"
#include "mgems/dispatch.hpp"
#include "mgems/mpc.hpp"
#include "mgems/oracles.hpp"
#include "mgems/rng.hpp"

namespace mgems {

namespace {

struct DispatchCase {
    MicrogridParams params;
    std::vector<double> u;
    std::vector<int> delta;
    std::vector<double> x_prev;
    std::vector<double> w;
};

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

DispatchCase random_case(XorShift& rng) {
    DispatchCase c;
    c.params = random_params(rng, rng.uniform_int(0, 2), rng.uniform_int(1, 2),
                             rng.uniform_int(0, 2), rng.uniform_int(1, 2));
    for (int i = 0; i < c.params.num_units(); ++i)
        c.u.push_back(rng.uniform(0.4 * c.params.u_min[i], 0.4 * c.params.u_max[i]));
    for (int i = 0; i < c.params.num_conventional; ++i) c.delta.push_back(rng.coin() ? 1 : 0);
    for (int i = 0; i < c.params.num_storage; ++i)
        c.x_prev.push_back(rng.uniform(c.params.x_min[i], c.params.x_max[i]));
    for (int i = 0; i < c.params.num_renewable; ++i)
        c.w.push_back(rng.uniform(0.0, c.params.renewable_cap[i]));
    for (int i = 0; i < c.params.num_loads; ++i) c.w.push_back(-rng.uniform(0.0, 1.5));
    return c;
}

std::string serialize_case(const DispatchCase& c) {
    std::ostringstream oss;
    oss << "{T=" << c.params.num_conventional << ",S=" << c.params.num_storage
        << ",R=" << c.params.num_renewable << ",D=" << c.params.num_loads << ",Ts="
        << c.params.sampling_time << ",u=[";
    for (double v : c.u) oss << v << " ";
    oss << "],delta=[";
    for (int v : c.delta) oss << v << " ";
    oss << "],x=[";
    for (double v : c.x_prev) oss << v << " ";
    oss << "],w=[";
    for (double v : c.w) oss << v << " ";
    oss << "],chi=[";
    for (double v : c.params.chi) oss << v << " ";
    oss << "]}";
    return oss.str();
}

// Scenario box around a nominal disturbance draw.
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
    for (int s = 0; s < p.num_storage; ++s)
        sc.x0.push_back(rng.uniform(p.x_min[s], p.x_max[s]));
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

bool endpoints_feasible(const ControlPlan& plan, const Scenario& sc,
                        const MicrogridParams& params) {
    for (const auto* w : {&sc.w_min, &sc.w_max}) {
        const auto traj = simulate_horizon(*w, plan, sc.x0, params);
        for (const auto& step : traj)
            if (!step.feasible) return false;
    }
    return true;
}

using WMutator = std::function<std::vector<double>(const std::vector<double>&, int)>;

}  // namespace

std::vector<SuiteResult> run_verification_suite(std::uint64_t seed, FaultInjection fault) {
    std::vector<SuiteResult> out;

    // the injected fault flips the load contribution seen by the model
    const bool flip = fault == FaultInjection::flip_load_sign;
    auto mutate_w = [flip](const std::vector<double>& w, int num_renewable) {
        std::vector<double> v = w;
        if (flip)
            for (std::size_t i = num_renewable; i < v.size(); ++i) v[i] = -v[i];
        return v;
    };

    {
        SuiteResult suite{"lemma1-rho-monotone-in-x-and-w", 0, 0, ""};
        XorShift rng(seed ^ 0x11);
        for (int it = 0; it < 1000; ++it) {
            auto c = random_case(rng);
            auto x2 = c.x_prev;
            auto w2 = c.w;
            for (std::size_t i = 0; i < x2.size(); ++i)
                x2[i] = std::min(x2[i] + rng.uniform(0.0, 0.5), c.params.x_max[i]);
            for (std::size_t i = 0; i < w2.size(); ++i) {
                if (static_cast<int>(i) < c.params.num_renewable)
                    w2[i] += rng.uniform(0.0, 0.5);
                else
                    w2[i] = std::min(0.0, w2[i] + rng.uniform(0.0, 0.5));
            }
            const int r = c.params.num_renewable;
            const double base =
                solve_rho(c.u, c.delta, c.x_prev, mutate_w(c.w, r), c.params).rho;
            const double up_x = solve_rho(c.u, c.delta, x2, mutate_w(c.w, r), c.params).rho;
            const double up_w = solve_rho(c.u, c.delta, c.x_prev, mutate_w(w2, r), c.params).rho;
            ++suite.instances;
            if (up_x > base + 1e-9 || up_w > base + 1e-9) {
                if (suite.failures == 0) suite.first_failure = serialize_case(c);
                ++suite.failures;
            }
        }
        out.push_back(suite);
    }

    {
        SuiteResult suite{"lemma2-step-monotone", 0, 0, ""};
        XorShift rng(seed ^ 0x22);
        for (int it = 0; it < 1000; ++it) {
            auto c = random_case(rng);
            auto x2 = c.x_prev;
            auto w2 = c.w;
            for (std::size_t i = 0; i < x2.size(); ++i)
                x2[i] = std::min(x2[i] + rng.uniform(0.0, 0.4), c.params.x_max[i]);
            for (std::size_t i = 0; i < w2.size(); ++i) {
                if (static_cast<int>(i) < c.params.num_renewable)
                    w2[i] += rng.uniform(0.0, 0.4);
                else
                    w2[i] = std::min(0.0, w2[i] + rng.uniform(0.0, 0.4));
            }
            const int r = c.params.num_renewable;
            const auto o1 = dispatch_step(c.u, c.delta, c.x_prev, mutate_w(c.w, r), c.params);
            const auto o2 = dispatch_step(c.u, c.delta, x2, mutate_w(w2, r), c.params);
            ++suite.instances;
            bool ok = o2.rho <= o1.rho + 1e-9;
            for (int i = 0; i < c.params.num_conventional; ++i)
                ok = ok && o2.p[i] <= o1.p[i] + 1e-9;
            for (int i = 0; i < c.params.num_storage; ++i)
                ok = ok && o2.x[i] >= o1.x[i] - 1e-9;
            if (!ok) {
                if (suite.failures == 0) suite.first_failure = serialize_case(c);
                ++suite.failures;
            }
        }
        out.push_back(suite);
    }

    {
        SuiteResult suite{"rho-root-validity", 0, 0, ""};
        XorShift rng(seed ^ 0x33);
        for (int it = 0; it < 1000; ++it) {
            auto c = random_case(rng);
            const auto sol = solve_rho(c.u, c.delta, c.x_prev, c.w, c.params);
            const double res =
                augmented_total_power(c.u, c.delta, c.x_prev, c.w, sol.rho, c.params);
            const double beyond =
                augmented_total_power(c.u, c.delta, c.x_prev, c.w, sol.rho + 1e-6, c.params);
            ++suite.instances;
            if (std::abs(res) > 1e-9 || beyond <= 0.0) {
                if (suite.failures == 0) suite.first_failure = serialize_case(c);
                ++suite.failures;
            }
        }
        out.push_back(suite);
    }

    {
        SuiteResult suite{"storage-transformation-equivalence", 0, 0, ""};
        XorShift rng(seed ^ 0x44);
        for (int it = 0; it < 1000; ++it) {
            auto p = random_params(rng, 0, 1, 0, 1);
            const double x = rng.uniform(p.x_min[0], p.x_max[0]);
            const double demand = rng.uniform(-3.0, 3.0);
            const auto a = storage_step_direct(x, demand, p, 0);
            const auto b = storage_step_transformed(x, demand, p, 0);
            ++suite.instances;
            if (std::abs(a.power - b.power) > 1e-12 || std::abs(a.energy - b.energy) > 1e-12) {
                if (suite.failures == 0) {
                    std::ostringstream oss;
                    oss << "{x=" << x << ",demand=" << demand << ",Ts=" << p.sampling_time << "}";
                    suite.first_failure = oss.str();
                }
                ++suite.failures;
            }
        }
        out.push_back(suite);
    }

    {
        SuiteResult suite{"bisection-oracle-agreement", 0, 0, ""};
        XorShift rng(seed ^ 0x55);
        for (int it = 0; it < 1000; ++it) {
            auto c = random_case(rng);
            const auto sol = solve_rho(c.u, c.delta, c.x_prev, c.w, c.params);
            const double oracle =
                oracles::bisection_rho(c.u, c.delta, c.x_prev, c.w, c.params);
            ++suite.instances;
            if (std::abs(sol.rho - oracle) > 1e-9 * std::max(1.0, std::abs(oracle))) {
                if (suite.failures == 0) suite.first_failure = serialize_case(c);
                ++suite.failures;
            }
        }
        out.push_back(suite);
    }

    {
        SuiteResult suite{"theorem1-endpoint-sufficiency", 0, 0, ""};
        XorShift rng(seed ^ 0x66);
        oracles::GridSpec grid;
        grid.points_per_dim = 5;
        int found = 0;
        for (int it = 0; it < 4000 && found < 200; ++it) {
            auto p = random_params(rng, rng.uniform_int(0, 1), 1, rng.uniform_int(0, 1), 1);
            const int np = rng.uniform_int(1, 2);
            const auto sc = random_window(rng, p, np, 0.2);
            const auto plan = random_plan(rng, p, np);
            if (!endpoints_feasible(plan, sc, p)) continue;
            ++found;
            ++suite.instances;
            const auto res = oracles::grid_feasibility(plan, sc, grid, p);
            if (!res.all_feasible) {
                if (suite.failures == 0) suite.first_failure = res.first_violation;
                ++suite.failures;
            }
        }
        out.push_back(suite);
    }

    {
        SuiteResult suite{"theorem2-worst-case-at-lower-endpoint", 0, 0, ""};
        XorShift rng(seed ^ 0x77);
        oracles::GridSpec grid;
        grid.points_per_dim = 5;
        int found = 0;
        for (int it = 0; it < 4000 && found < 200; ++it) {
            auto p = random_params(rng, rng.uniform_int(0, 1), 1, rng.uniform_int(0, 1), 1);
            const int np = rng.uniform_int(1, 2);
            const auto sc = random_window(rng, p, np, 0.2);
            const auto plan = random_plan(rng, p, np);
            if (!endpoints_feasible(plan, sc, p)) continue;
            ++found;
            ++suite.instances;
            const auto worst = oracles::grid_worst_cost(plan, sc, grid, p);
            const auto at_min = simulate_horizon(sc.w_min, plan, sc.x0, p);
            const double cost_min = horizon_cost(at_min, plan, sc.delta0, p.cost_weights);
            if (std::abs(worst.max_cost - cost_min) > 1e-6) {
                if (suite.failures == 0) {
                    std::ostringstream oss;
                    oss << "worst=" << worst.max_cost << " at-min=" << cost_min;
                    suite.first_failure = oss.str();
                }
                ++suite.failures;
            }
        }
        out.push_back(suite);
    }

    {
        SuiteResult suite{"theorem3-feasible-set-inclusion", 0, 0, ""};
        XorShift rng(seed ^ 0x88);
        SolveOptions opts;
        int found = 0;
        for (int it = 0; it < 300 && found < 40; ++it) {
            auto p = random_params(rng, rng.uniform_int(0, 1), 1, rng.uniform_int(0, 1), 1);
            const int np = 1;
            const auto sc = random_window(rng, p, np, 0.15);
            ControllerConfig p1;
            p1.variant = ControllerVariant::res_droop_mm;
            p1.horizon = np;
            MilpSolution sol1;
            try {
                auto built1 = build_problem(p1, sc, p);
                sol1 = solve_milp(built1.instance, opts);
            } catch (const std::exception&) {
                continue;
            }
            if (sol1.status != SolveStatus::optimal) continue;
            ++found;
            ++suite.instances;

            ControllerConfig p2 = p1;
            p2.variant = ControllerVariant::sat_res_droop_mm;
            auto built1 = build_problem(p1, sc, p);
            const auto open1 = extract_solution(sol1, built1, sc, p);
            auto built2 = build_problem(p2, sc, p);
            pin_controls(built2, open1.plan);
            const auto sol2 = solve_milp(built2.instance, opts);
            const bool ok = sol2.status == SolveStatus::optimal &&
                            std::abs(sol2.objective - sol1.objective) <= 1e-9;
            if (!ok) {
                if (suite.failures == 0) {
                    std::ostringstream oss;
                    oss << "p1 cost=" << sol1.objective << " pinned p2 status="
                        << to_string(sol2.status) << " cost=" << sol2.objective;
                    suite.first_failure = oss.str();
                }
                ++suite.failures;
            }
        }
        out.push_back(suite);
    }

    {
        SuiteResult suite{"milp-encoding-soundness", 0, 0, ""};
        XorShift rng(seed ^ 0x99);
        SolveOptions opts;
        int found = 0;
        for (int it = 0; it < 200 && found < 30; ++it) {
            auto p = random_params(rng, rng.uniform_int(0, 1), 1, rng.uniform_int(0, 1), 1);
            const int np = rng.uniform_int(1, 2);
            const auto sc = random_window(rng, p, np, 0.15);
            ControllerConfig cfg;
            cfg.variant = rng.coin() ? ControllerVariant::sat_res_droop_mm
                                     : ControllerVariant::prescient;
            cfg.horizon = np;
            MilpSolution sol;
            BuiltProblem built;
            try {
                built = build_problem(cfg, sc, p);
                sol = solve_milp(built.instance, opts);
            } catch (const std::exception&) {
                continue;
            }
            if (sol.status != SolveStatus::optimal) continue;
            ++found;
            ++suite.instances;
            try {
                (void)extract_solution(sol, built, sc, p);
            } catch (const EncodingDefectError& e) {
                if (suite.failures == 0) suite.first_failure = e.what();
                ++suite.failures;
            }
        }
        out.push_back(suite);
    }

    return out;
}

bool all_passed(const std::vector<SuiteResult>& results) {
    for (const auto& r : results)
        if (r.failures > 0) return false;
    return true;
}

}  // namespace mgems
