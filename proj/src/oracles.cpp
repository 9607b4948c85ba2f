#include "mgems/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "mgems/dispatch.hpp"
#include "mgems/mpc.hpp"

namespace mgems::oracles {

namespace {

constexpr double kZeroBand = 1e-11;

// Self-contained evaluation of the augmented total power, written directly
// from the model equations. Deliberately independent of dispatch.cpp so the
// two can check each other.
double oracle_total_power(const std::vector<double>& u, const std::vector<int>& delta,
                          const std::vector<double>& x_prev, const std::vector<double>& w,
                          double rho, const MicrogridParams& p) {
    const int t = p.num_conventional;
    const int s = p.num_storage;
    const int r = p.num_renewable;

    double rho_lo = std::numeric_limits<double>::infinity();
    double rho_hi = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < t + s + r; ++i) {
        if (p.chi[i] <= 0.0) continue;
        const double hi_cap = i >= t + s ? p.renewable_cap[i - t - s] : p.p_max[i];
        rho_lo = std::min(rho_lo, (p.p_min[i] - p.u_max[i]) / p.chi[i]);
        rho_hi = std::max(rho_hi, (hi_cap - p.u_min[i]) / p.chi[i]);
    }

    double total = std::min(0.0, rho - rho_lo) + std::max(0.0, rho - rho_hi);
    for (int i = 0; i < t; ++i) {
        if (delta[i] == 0) continue;
        total += std::clamp(u[i] + p.chi[i] * rho, p.p_min[i], p.p_max[i]);
    }
    for (int i = 0; i < s; ++i) {
        const int unit = t + i;
        const double lo = std::max(p.p_min[unit], (x_prev[i] - p.x_max[i]) / p.sampling_time);
        const double hi = std::min(p.p_max[unit], (x_prev[i] - p.x_min[i]) / p.sampling_time);
        total += std::clamp(u[unit] + p.chi[unit] * rho, lo, hi);
    }
    for (int i = 0; i < r; ++i) {
        const int unit = t + s + i;
        total += std::clamp(u[unit] + p.chi[unit] * rho, p.p_min[unit], w[i]);
    }
    for (int i = 0; i < p.num_loads; ++i) total += w[r + i];
    return total;
}

long checked_grid_size(const Scenario& scenario, const GridSpec& grid,
                       const MicrogridParams& params) {
    if (grid.points_per_dim < 2) throw ValidationError("grid oracle: need >= 2 points per dim");
    const int dims = (params.num_renewable + params.num_loads) * scenario.horizon;
    double size = 1.0;
    for (int i = 0; i < dims; ++i) {
        size *= grid.points_per_dim;
        if (size > static_cast<double>(grid.max_points))
            throw ResourceError("grid oracle: grid size exceeds cap");
    }
    return static_cast<long>(size);
}

std::vector<std::vector<double>> realization_at(const Scenario& scenario, const GridSpec& grid,
                                                const MicrogridParams& params, long index) {
    const int per_step = params.num_renewable + params.num_loads;
    std::vector<std::vector<double>> w(scenario.horizon, std::vector<double>(per_step));
    long rest = index;
    for (int j = 0; j < scenario.horizon; ++j) {
        for (int e = 0; e < per_step; ++e) {
            const int g = static_cast<int>(rest % grid.points_per_dim);
            rest /= grid.points_per_dim;
            const double lo = scenario.w_min[j][e];
            const double hi = scenario.w_max[j][e];
            w[j][e] = lo + (hi - lo) * g / (grid.points_per_dim - 1);
        }
    }
    return w;
}

}  // namespace

double bisection_rho(const std::vector<double>& u, const std::vector<int>& delta,
                     const std::vector<double>& x_prev, const std::vector<double>& w,
                     const MicrogridParams& params) {
    auto f = [&](double rho) { return oracle_total_power(u, delta, x_prev, w, rho, params); };

    // Outside the auxiliary rho interval the function has slope one, so a
    // bracket always exists.
    double lo = -1.0, hi = 1.0;
    for (double step = 1.0; f(lo) > -kZeroBand; step *= 2) lo -= step;
    for (double step = 1.0; f(hi) < kZeroBand; step *= 2) hi += step;

    double zero_point = std::numeric_limits<double>::quiet_NaN();
    while (hi - lo > 1e-12) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if (fm < -kZeroBand) {
            lo = mid;
        } else if (fm > kZeroBand) {
            hi = mid;
        } else {
            zero_point = mid;
            break;
        }
    }
    double root = std::isnan(zero_point) ? 0.5 * (lo + hi) : zero_point;

    // Expand rightward over a flat zero run, then pin its right edge.
    double good = root;
    double probe = 1e-9;
    while (std::abs(f(good + probe)) <= kZeroBand) {
        good += probe;
        probe *= 2.0;
    }
    double bad = good + probe;
    while (bad - good > 1e-12) {
        const double mid = 0.5 * (good + bad);
        if (std::abs(f(mid)) <= kZeroBand)
            good = mid;
        else
            bad = mid;
    }
    return good;
}

WorstCostResult grid_worst_cost(const ControlPlan& plan, const Scenario& scenario,
                                const GridSpec& grid, const MicrogridParams& params) {
    if (plan.horizon != scenario.horizon)
        throw DimensionError("grid_worst_cost: plan horizon != scenario horizon");
    const long size = checked_grid_size(scenario, grid, params);

    WorstCostResult out;
    out.max_cost = -std::numeric_limits<double>::infinity();
    for (long idx = 0; idx < size; ++idx) {
        const auto w = realization_at(scenario, grid, params, idx);
        const auto traj = simulate_horizon(w, plan, scenario.x0, params);
        const double cost = horizon_cost(traj, plan, scenario.delta0, params.cost_weights);
        if (cost > out.max_cost) {
            out.max_cost = cost;
            out.argmax_w = w;
        }
    }
    return out;
}

EnumerationResult enumerate_small_milp(const ControllerConfig& config, const Scenario& window,
                                       const MicrogridParams& params, int u_grid_points,
                                       long max_points) {
    if (!variant_is_saturated(config.variant))
        throw ValidationError(
            "enumerate_small_milp: defined for the saturated model variants only");
    if (u_grid_points < 2) throw ValidationError("enumerate_small_milp: need >= 2 grid points");
    const int np = config.horizon;
    if (window.horizon < np) throw DimensionError("enumerate_small_milp: window too short");

    const int t = params.num_conventional;
    const int n = params.num_units();
    if (t * np > 12)
        throw ResourceError("enumerate_small_milp: more than 12 switching binaries");
    double grid_size = 1.0;
    for (int i = 0; i < n * np; ++i) {
        grid_size *= u_grid_points;
        if (grid_size * (1L << (t * np)) > static_cast<double>(max_points))
            throw ResourceError("enumerate_small_milp: u-grid exceeds the cap");
    }

    MicrogridParams model = params;
    model.chi = effective_chi(config, params);
    const bool robust = variant_is_robust(config.variant);

    std::vector<std::vector<double>> w_lo(window.w_min.begin(), window.w_min.begin() + np);
    std::vector<std::vector<double>> w_hi(window.w_max.begin(), window.w_max.begin() + np);

    EnumerationResult out;
    out.best_cost = std::numeric_limits<double>::infinity();

    const long u_total = static_cast<long>(grid_size);
    for (long mask = 0; mask < (1L << (t * np)); ++mask) {
        ControlPlan plan;
        plan.horizon = np;
        plan.delta.assign(np, std::vector<int>(t, 0));
        for (int j = 0; j < np; ++j)
            for (int tt = 0; tt < t; ++tt)
                plan.delta[j][tt] = static_cast<int>((mask >> (j * t + tt)) & 1);
        plan.u.assign(np, std::vector<double>(n, 0.0));

        for (long uidx = 0; uidx < u_total; ++uidx) {
            long rest = uidx;
            for (int j = 0; j < np; ++j) {
                for (int i = 0; i < n; ++i) {
                    const int g = static_cast<int>(rest % u_grid_points);
                    rest /= u_grid_points;
                    plan.u[j][i] = params.u_min[i] +
                                   (params.u_max[i] - params.u_min[i]) * g / (u_grid_points - 1);
                }
            }
            const auto lo_traj = simulate_horizon(w_lo, plan, window.x0, model);
            bool ok = true;
            for (const auto& s : lo_traj) ok = ok && s.feasible;
            if (!ok) continue;
            if (robust) {
                const auto hi_traj = simulate_horizon(w_hi, plan, window.x0, model);
                for (const auto& s : hi_traj) ok = ok && s.feasible;
                if (!ok) continue;
            }
            const double cost =
                horizon_cost(lo_traj, plan, window.delta0, params.cost_weights);
            if (cost < out.best_cost - 1e-15) {
                out.best_cost = cost;
                out.best_plan = plan;
                out.found = true;
            }
        }
    }
    return out;
}

FeasibilityResult grid_feasibility(const ControlPlan& plan, const Scenario& scenario,
                                   const GridSpec& grid, const MicrogridParams& params) {
    if (plan.horizon != scenario.horizon)
        throw DimensionError("grid_feasibility: plan horizon != scenario horizon");
    const long size = checked_grid_size(scenario, grid, params);

    FeasibilityResult out;
    for (long idx = 0; idx < size; ++idx) {
        const auto w = realization_at(scenario, grid, params, idx);
        const auto traj = simulate_horizon(w, plan, scenario.x0, params);
        for (int j = 0; j < plan.horizon; ++j) {
            if (!traj[j].feasible) {
                std::ostringstream oss;
                oss << "grid point " << idx << ", step " << j << ": rho=" << traj[j].rho
                    << " outside bounds";
                out.all_feasible = false;
                out.first_violation = oss.str();
                return out;
            }
        }
    }
    return out;
}

}  // namespace mgems::oracles
