#include <doctest.h>

#include <cmath>

#include "mgems/branch_bound.hpp"
#include "mgems/lp.hpp"
#include "mgems/mpc.hpp"
#include "mgems/oracles.hpp"
#include "test_util.hpp"

using namespace mgems;
using namespace mgems::testutil;

namespace {

Scenario window_of(const MicrogridParams& p, int np,
                   const std::vector<double>& w_lo_row, const std::vector<double>& w_hi_row,
                   std::vector<double> x0) {
    Scenario sc;
    sc.horizon = np;
    sc.w_min.assign(np, w_lo_row);
    sc.w_max.assign(np, w_hi_row);
    sc.x0 = std::move(x0);
    sc.delta0.assign(p.num_conventional, 0);
    return sc;
}

// Feasibility of a sat-encoding instance under fixed binaries; returns the
// forced y value through the LP.
struct SatProbe {
    MilpInstance m;
    SatEncoding enc;
};

SatProbe make_sat_probe(double expr_value, double lo, double hi) {
    SatProbe probe;
    const int e = probe.m.add_var(expr_value, expr_value, false, "expr");
    AffineExpr expr;
    expr.idx = {e};
    expr.coef = {1.0};
    expr.lo = -2.0;
    expr.hi = 2.0;
    EncodingConstants constants;
    probe.enc = encode_saturation(probe.m, expr, lo, hi, constants, "probe", false);
    return probe;
}

bool probe_feasible(SatProbe probe, int z_lo, int z_hi, double* y_out = nullptr) {
    probe.m.vars[probe.enc.z_lo].lb = probe.m.vars[probe.enc.z_lo].ub = z_lo;
    probe.m.vars[probe.enc.z_hi].lb = probe.m.vars[probe.enc.z_hi].ub = z_hi;
    const auto res = solve_lp(probe.m);
    if (res.status != SolveStatus::optimal) return false;
    if (y_out) *y_out = res.x[probe.enc.output];
    return true;
}

}  // namespace

TEST_CASE("encode_saturation: interior expression forces the pass-through region") {
    double y = 0.0;
    CHECK(probe_feasible(make_sat_probe(0.5, 0.0, 1.0), 0, 0, &y));
    CHECK(y == doctest::Approx(0.5));
    CHECK(!probe_feasible(make_sat_probe(0.5, 0.0, 1.0), 1, 0));
    CHECK(!probe_feasible(make_sat_probe(0.5, 0.0, 1.0), 0, 1));
    CHECK(!probe_feasible(make_sat_probe(0.5, 0.0, 1.0), 1, 1));
}

TEST_CASE("encode_saturation: upper overflow forces the upper region") {
    double y = 0.0;
    CHECK(!probe_feasible(make_sat_probe(1.3, 0.0, 1.0), 0, 0));
    CHECK(!probe_feasible(make_sat_probe(1.3, 0.0, 1.0), 1, 0));
    CHECK(probe_feasible(make_sat_probe(1.3, 0.0, 1.0), 0, 1, &y));
    CHECK(y == doctest::Approx(1.0));
    CHECK(!probe_feasible(make_sat_probe(1.3, 0.0, 1.0), 1, 1));
}

TEST_CASE("encode_saturation: boundary expression admits both indicators harmlessly") {
    double y0 = 0.0, y1 = 0.0;
    CHECK(probe_feasible(make_sat_probe(0.0, 0.0, 1.0), 0, 0, &y0));
    CHECK(probe_feasible(make_sat_probe(0.0, 0.0, 1.0), 1, 0, &y1));
    CHECK(y0 == doctest::Approx(0.0));
    CHECK(y1 == doctest::Approx(0.0));
    CHECK(!probe_feasible(make_sat_probe(0.0, 0.0, 1.0), 0, 1));
}

TEST_CASE("encode_saturation: random enumeration agrees with sat semantics") {
    Rng rng(61);
    for (int it = 0; it < 300; ++it) {
        const double lo = rng.uniform(-1.0, 0.0);
        const double hi = lo + rng.uniform(0.0, 1.5);
        const double e = rng.uniform(-2.0, 2.0);
        const double want = saturate(lo, e, hi);
        int feasible_regions = 0;
        for (int z_lo = 0; z_lo <= 1; ++z_lo) {
            for (int z_hi = 0; z_hi <= 1; ++z_hi) {
                double y = 0.0;
                if (probe_feasible(make_sat_probe(e, lo, hi), z_lo, z_hi, &y)) {
                    ++feasible_regions;
                    CHECK(y == doctest::Approx(want).epsilon(1e-9));
                }
            }
        }
        CHECK(feasible_regions >= 1);
    }
}

TEST_CASE("encode_switch_product: off forces zero, on passes through") {
    for (const double yval : {0.65, 0.2, 1.0}) {
        for (int d = 0; d <= 1; ++d) {
            MilpInstance m;
            const int delta = m.add_var(d, d, true, "delta");
            const int y = m.add_var(yval, yval, false, "y");
            AffineExpr expr;
            expr.idx = {y};
            expr.coef = {1.0};
            expr.lo = 0.2;
            expr.hi = 1.0;
            EncodingConstants constants;
            const int p = encode_switch_product(m, delta, expr, 0.2, 1.0, constants, "p");
            const auto res = solve_lp(m);
            REQUIRE(res.status == SolveStatus::optimal);
            CHECK(res.x[p] == doctest::Approx(d == 0 ? 0.0 : yval));
        }
    }
}

TEST_CASE("encode_abs_switching forces the absolute difference") {
    for (int prev = 0; prev <= 1; ++prev) {
        for (int cur = 0; cur <= 1; ++cur) {
            MilpInstance m;
            const int dj = m.add_var(cur, cur, true, "dj");
            const int dp = m.add_var(prev, prev, true, "dp");
            const int s = encode_abs_switching(m, dj, dp, 0, "s");
            const auto res = solve_lp(m);
            REQUIRE(res.status == SolveStatus::optimal);
            CHECK(res.x[s] == doctest::Approx(std::abs(cur - prev)));

            // first-step variant with the fixed initial status
            MilpInstance m2;
            const int dj2 = m2.add_var(cur, cur, true, "dj");
            const int s2 = encode_abs_switching(m2, dj2, -1, prev, "s");
            const auto res2 = solve_lp(m2);
            REQUIRE(res2.status == SolveStatus::optimal);
            CHECK(res2.x[s2] == doctest::Approx(std::abs(cur - prev)));
        }
    }
}

TEST_CASE("derive_big_m: interval-arithmetic constants") {
    // independent interval computation for the case-study box:
    // |u| <= 5, rho in [-6, 6], chi = 1 -> droop expression in [-11, 11]
    const double expr_lo = -11.0, expr_hi = 11.0;
    const double conv_needed = std::max({1.0 - expr_lo, expr_hi - 0.2, 1.0 - 0.2});
    const double storage_needed = std::max({1.0 - expr_lo, expr_hi + 1.0, 2.0});
    // storage energy clip: x - Ts*ptilde over [0 - 0.25, 6 + 0.25]
    const double x_needed = std::max({6.0 + 0.25, 6.25 - 0.0, 6.0});

    const auto p = case_params();
    ControllerConfig cfg;
    cfg.variant = ControllerVariant::sat_res_droop_mm;
    cfg.horizon = 1;
    cfg.simplify_static_saturation = false;
    cfg.sat_encoding = SatEncodingStyle::big_m;
    const auto win = window_of(p, 1, {0.3, 0.3, -0.6}, {0.6, 0.6, -0.4}, {2.0});
    const auto constants = derive_big_m(cfg, win, p);

    auto find = [&](const std::string& needle) {
        for (const auto& e : constants.entries)
            if (e.role.find(needle) != std::string::npos) return e.value;
        FAIL("missing big-M entry for ", needle);
        return 0.0;
    };
    CHECK(find("sat[p_t0] copy0") == doctest::Approx(1.1 * conv_needed));   // 13.2
    CHECK(find("sat[ps~0] copy0") == doctest::Approx(1.1 * storage_needed));  // 13.2
    CHECK(find("sat[x0] copy0") == doctest::Approx(1.1 * x_needed));        // 6.875
    CHECK(find("sat[p_t0] copy0") == doctest::Approx(13.2));
    CHECK(find("sat[x0] copy0") == doctest::Approx(6.875));
}

TEST_CASE("build_problem: prescient toy structure audit") {
    const auto p = tsr_params();
    ControllerConfig cfg;
    cfg.variant = ControllerVariant::prescient;
    cfg.horizon = 1;
    cfg.simplify_static_saturation = false;
    cfg.sat_encoding = SatEncodingStyle::big_m;
    const auto win = window_of(p, 1, {0.2, -1.0}, {0.2, -1.0}, {2.0});
    const auto built = build_problem(cfg, win, p);

    // delta(1) + switch aux(1) + u(3) + rho(1)
    // + conventional: sat y + 2 binaries + product p        = 4
    // + storage: ptilde + 2z, x + 2z, p_s                   = 7
    // + renewable: sat y + 2 binaries                       = 3
    CHECK(built.instance.vars.size() == 20);
    CHECK(built.layout.num_binaries == 9);
    CHECK(built.layout.num_copies == 1);
    CHECK(built.instance.cons.size() == 46);
    CHECK(built.instance.validate().empty());

    // incremental style: same binaries, three fill variables per saturation
    cfg.sat_encoding = SatEncodingStyle::incremental;
    const auto inc = build_problem(cfg, win, p);
    CHECK(inc.layout.num_binaries == 9);
    CHECK(inc.instance.vars.size() == 32);
    CHECK(inc.instance.cons.size() == 34);
    CHECK(inc.instance.validate().empty());
}

TEST_CASE("build_problem: robust variants duplicate the physical variables") {
    const auto p = tsr_params();
    const auto win = window_of(p, 1, {0.2, -1.0}, {0.4, -0.8}, {2.0});

    ControllerConfig cfg;
    cfg.horizon = 1;
    cfg.simplify_static_saturation = false;
    cfg.sat_encoding = SatEncodingStyle::big_m;

    cfg.variant = ControllerVariant::prescient;
    const auto single = build_problem(cfg, win, p);
    cfg.variant = ControllerVariant::sat_res_droop_mm;
    const auto robust = build_problem(cfg, win, p);

    const std::size_t shared = 1 + 1 + 3;  // delta, switch aux, u
    CHECK(robust.layout.num_copies == 2);
    CHECK(robust.instance.vars.size() - shared == 2 * (single.instance.vars.size() - shared));

    // mm variant: no saturation binaries, one min() binary per renewable per
    // copy per step, shared switch binary
    cfg.variant = ControllerVariant::mm;
    const auto mm = build_problem(cfg, win, p);
    CHECK(mm.layout.num_binaries == 1 + 2 * 1);
    for (const auto& v : mm.instance.vars) {
        if (v.is_binary) CHECK(v.name.find("z_lo") == std::string::npos);
    }
}

TEST_CASE("prescient toy: milp solution reproduces dispatch exactly") {
    const auto p = tsr_params();
    ControllerConfig cfg;
    cfg.variant = ControllerVariant::prescient;
    cfg.horizon = 1;
    const auto win = window_of(p, 1, {0.2, -1.0}, {0.2, -1.0}, {2.0});
    const auto built = build_problem(cfg, win, p);
    const auto sol = solve_milp(built.instance);
    REQUIRE(sol.status == SolveStatus::optimal);
    const auto open = extract_solution(sol, built, win, p);
    CHECK(open.trajectory_min.size() == 1);

    // the enumeration oracle gives an upper bound on the true optimum
    const auto enumerated = oracles::enumerate_small_milp(cfg, win, p, 9);
    REQUIRE(enumerated.found);
    CHECK(sol.objective <= enumerated.best_cost + 1e-6);
}

TEST_CASE("flat-run rho discrepancy is tolerated when powers agree") {
    const auto p = storage_only_params();
    ControllerConfig cfg;
    cfg.variant = ControllerVariant::prescient;
    cfg.horizon = 1;
    // load exactly equal to the storage discharge limit: every rho in [1, 6]
    // solves the balance; dispatch reports the right endpoint
    const auto win = window_of(p, 1, {-1.0}, {-1.0}, {2.0});
    auto built = build_problem(cfg, win, p);
    ControlPlan plan;
    plan.horizon = 1;
    plan.u = {{0.0}};
    plan.delta = {{}};
    pin_controls(built, plan);
    const auto sol = solve_milp(built.instance);
    REQUIRE(sol.status == SolveStatus::optimal);
    const auto open = extract_solution(sol, built, win, p);  // must not throw
    CHECK(open.trajectory_min[0].p[0] == doctest::Approx(1.0));
    CHECK(open.trajectory_min[0].rho == doctest::Approx(6.0));
}

TEST_CASE("theorem 3 counterexample: saturated feasible, unsaturated not") {
    // two storage units pinned to opposite power corners against an
    // uncertain load
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
    REQUIRE(validate_params(p).empty());

    const auto win = window_of(p, 1, {-0.6}, {-0.4}, {3.0, 3.0});
    ControlPlan pinned;
    pinned.horizon = 1;
    pinned.u = {{-1.0, 1.0}};  // u1 = p1_min, u2 = p2_max
    pinned.delta = {{}};

    ControllerConfig sat_cfg;
    sat_cfg.variant = ControllerVariant::sat_res_droop_mm;
    sat_cfg.horizon = 1;
    auto sat_built = build_problem(sat_cfg, win, p);
    pin_controls(sat_built, pinned);
    const auto sat_sol = solve_milp(sat_built.instance);
    CHECK(sat_sol.status == SolveStatus::optimal);

    ControllerConfig lin_cfg;
    lin_cfg.variant = ControllerVariant::res_droop_mm;
    lin_cfg.horizon = 1;
    auto lin_built = build_problem(lin_cfg, win, p);
    pin_controls(lin_built, pinned);
    const auto lin_sol = solve_milp(lin_built.instance);
    CHECK(lin_sol.status == SolveStatus::infeasible);
}

TEST_CASE("problem-1 optima satisfy the problem-2 encoding at equal cost") {
    Rng rng(62);
    SolveOptions opts;
    int found = 0;
    for (int it = 0; it < 120 && found < 25; ++it) {
        auto p = random_params(rng, rng.uniform_int(0, 1), 1, rng.uniform_int(0, 1), 1);
        const int np = rng.uniform_int(1, 2);
        Scenario sc;
        sc.horizon = np;
        for (int j = 0; j < np; ++j) {
            std::vector<double> lo, hi;
            for (int r = 0; r < p.num_renewable; ++r) {
                const double nom = rng.uniform(0.0, p.renewable_cap[r]);
                lo.push_back(std::max(0.0, nom - 0.1));
                hi.push_back(nom + 0.1);
            }
            for (int d = 0; d < p.num_loads; ++d) {
                const double nom = -rng.uniform(0.1, 1.0);
                lo.push_back(nom - 0.1);
                hi.push_back(std::min(0.0, nom + 0.1));
            }
            sc.w_min.push_back(lo);
            sc.w_max.push_back(hi);
        }
        for (int s = 0; s < p.num_storage; ++s)
            sc.x0.push_back(rng.uniform(p.x_min[s], p.x_max[s]));
        sc.delta0.assign(p.num_conventional, 0);

        ControllerConfig p1;
        p1.variant = ControllerVariant::res_droop_mm;
        p1.horizon = np;
        auto built1 = build_problem(p1, sc, p);
        const auto sol1 = solve_milp(built1.instance, opts);
        if (sol1.status != SolveStatus::optimal) continue;
        ++found;
        const auto open1 = extract_solution(sol1, built1, sc, p);

        ControllerConfig p2 = p1;
        p2.variant = ControllerVariant::sat_res_droop_mm;
        auto built2 = build_problem(p2, sc, p);
        pin_controls(built2, open1.plan);
        const auto sol2 = solve_milp(built2.instance, opts);
        REQUIRE(sol2.status == SolveStatus::optimal);
        CHECK(std::abs(sol2.objective - sol1.objective) <= 1e-9);
    }
    CHECK(found >= 25);
}

TEST_CASE("robust solve extracts consistent endpoint trajectories") {
    const auto p = case_params();
    ControllerConfig cfg;
    cfg.variant = ControllerVariant::sat_res_droop_mm;
    cfg.horizon = 2;
    Scenario sc = window_of(p, 2, {0.2, 0.1, -0.7}, {0.5, 0.4, -0.5}, {2.0});
    const auto built = build_problem(cfg, sc, p);
    const auto sol = solve_milp(built.instance);
    REQUIRE(sol.status == SolveStatus::optimal);
    const auto open = extract_solution(sol, built, sc, p);  // throws on defects
    CHECK(open.trajectory_min.size() == 2);
    CHECK(open.trajectory_max.size() == 2);
    const double replay =
        horizon_cost(open.trajectory_min, open.plan, sc.delta0, p.cost_weights);
    CHECK(replay == doctest::Approx(open.predicted_cost).epsilon(1e-9));
}
