#include "mgems/dispatch.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace mgems {

namespace {

constexpr double kBreakpointMergeTol = 1e-12;  // coincident-bound merge
constexpr double kZeroTol = 1e-12;             // flat-run classification
constexpr double kRhoFeasTol = 1e-9;

// Saturation interval of one unit's droop law at a given step. Inactive
// units (conventional with delta = 0) contribute zero power independent of
// rho.
struct UnitLaw {
    bool active = true;
    double lo = 0.0;
    double hi = 0.0;
    double set_point = 0.0;
    double chi = 0.0;
};

std::vector<UnitLaw> unit_laws(const std::vector<double>& u, const std::vector<int>& delta,
                               const std::vector<double>& x_prev, const std::vector<double>& w,
                               const MicrogridParams& params) {
    const int n = params.num_units();
    if (static_cast<int>(u.size()) != n) throw DimensionError("dispatch: u length != T+S+R");
    if (static_cast<int>(delta.size()) != params.num_conventional)
        throw DimensionError("dispatch: delta length != T");
    if (static_cast<int>(w.size()) != params.num_renewable + params.num_loads)
        throw DimensionError("dispatch: w length != R+D");

    auto [ps_lo, ps_hi] = dynamic_storage_limits(x_prev, params);

    std::vector<UnitLaw> laws(n);
    for (int i = 0; i < n; ++i) {
        UnitLaw& law = laws[i];
        law.set_point = u[i];
        law.chi = params.chi[i];
        if (params.is_conventional(i)) {
            law.active = delta[i] != 0;
            law.lo = params.p_min[i];
            law.hi = params.p_max[i];
        } else if (params.is_storage(i)) {
            const int s = i - params.storage_begin();
            law.lo = ps_lo[s];
            law.hi = ps_hi[s];
        } else {
            const int r = i - params.renewable_begin();
            law.lo = params.p_min[i];
            law.hi = w[r];
            if (law.hi < law.lo) {
                std::ostringstream oss;
                oss << "dispatch: available infeed w_r[" << r << "]=" << law.hi
                    << " below renewable p_min=" << law.lo;
                throw InvalidBoundsError(oss.str());
            }
        }
    }
    return laws;
}

double unit_power(const UnitLaw& law, double rho) {
    if (!law.active) return 0.0;
    return saturate(law.lo, law.set_point + law.chi * rho, law.hi);
}

double total_power(const std::vector<UnitLaw>& laws, const std::vector<double>& w,
                   const RhoBounds& box, double rho, const MicrogridParams& params) {
    double total = std::min(0.0, rho - box.rho_min) + std::max(0.0, rho - box.rho_max);
    for (const UnitLaw& law : laws) total += unit_power(law, rho);
    for (int d = 0; d < params.num_loads; ++d) total += w[params.num_renewable + d];
    return total;
}

}  // namespace

RhoBounds rho_bounds(const MicrogridParams& params) {
    RhoBounds box{std::numeric_limits<double>::infinity(),
                  -std::numeric_limits<double>::infinity()};
    for (int i = 0; i < params.num_units(); ++i) {
        if (params.chi[i] <= 0.0) continue;
        double p_hi = params.p_max[i];
        if (params.is_renewable(i)) p_hi = params.renewable_cap[i - params.renewable_begin()];
        box.rho_min = std::min(box.rho_min, (params.p_min[i] - params.u_max[i]) / params.chi[i]);
        box.rho_max = std::max(box.rho_max, (p_hi - params.u_min[i]) / params.chi[i]);
    }
    if (!std::isfinite(box.rho_min) || !std::isfinite(box.rho_max))
        throw NoDroopError("rho_bounds: no unit participates in power sharing (all chi = 0)");
    return box;
}

double augmented_total_power(const std::vector<double>& u, const std::vector<int>& delta,
                             const std::vector<double>& x_prev, const std::vector<double>& w,
                             double rho, const MicrogridParams& params) {
    const RhoBounds box = rho_bounds(params);
    const auto laws = unit_laws(u, delta, x_prev, w, params);
    return total_power(laws, w, box, rho, params);
}

RhoSolution solve_rho(const std::vector<double>& u, const std::vector<int>& delta,
                      const std::vector<double>& x_prev, const std::vector<double>& w,
                      const MicrogridParams& params) {
    const RhoBounds box = rho_bounds(params);
    const auto laws = unit_laws(u, delta, x_prev, w, params);

    // Abscissae where some unit law changes slope, using the per-step
    // dispatch limits, so the function is affine between consecutive points.
    std::vector<double> breaks{box.rho_min, box.rho_max};
    for (const UnitLaw& law : laws) {
        if (!law.active || law.chi <= 0.0) continue;
        breaks.push_back((law.lo - law.set_point) / law.chi);
        breaks.push_back((law.hi - law.set_point) / law.chi);
    }
    std::sort(breaks.begin(), breaks.end());
    std::vector<double> pts;
    for (double b : breaks) {
        if (pts.empty() || b - pts.back() > kBreakpointMergeTol) pts.push_back(b);
    }

    std::vector<double> f(pts.size());
    for (std::size_t k = 0; k < pts.size(); ++k)
        f[k] = total_power(laws, w, box, pts[k], params);

    double rho = 0.0;
    const std::size_t last = pts.size() - 1;
    // Rightmost point at or below zero decides the segment of the maximal
    // root; the slope is exactly 1 outside the breakpoint range.
    std::ptrdiff_t k = static_cast<std::ptrdiff_t>(last);
    while (k >= 0 && f[k] > kZeroTol) --k;
    if (k < 0) {
        rho = pts[0] - f[0];
    } else if (static_cast<std::size_t>(k) == last) {
        rho = std::abs(f[last]) <= kZeroTol ? pts[last] : pts[last] - f[last];
    } else if (std::abs(f[k]) <= kZeroTol) {
        rho = pts[k];  // right edge of a flat zero run
    } else {
        rho = pts[k] - f[k] * (pts[k + 1] - pts[k]) / (f[k + 1] - f[k]);
    }

    RhoSolution sol;
    sol.rho = rho;
    sol.feasible = rho >= box.rho_min - kRhoFeasTol && rho <= box.rho_max + kRhoFeasTol;
    return sol;
}

StorageStep storage_step_direct(double x_prev, double demand, const MicrogridParams& params,
                                int storage_index) {
    const int unit = params.storage_begin() + storage_index;
    const double ts = params.sampling_time;
    const double lo =
        std::max(params.p_min[unit], (x_prev - params.x_max[storage_index]) / ts);
    const double hi =
        std::min(params.p_max[unit], (x_prev - params.x_min[storage_index]) / ts);
    StorageStep out;
    out.power = saturate(lo, demand, hi);
    out.energy = x_prev - ts * out.power;
    return out;
}

StorageStep storage_step_transformed(double x_prev, double demand, const MicrogridParams& params,
                                     int storage_index) {
    const int unit = params.storage_begin() + storage_index;
    const double ts = params.sampling_time;
    const double unclipped = saturate(params.p_min[unit], demand, params.p_max[unit]);
    StorageStep out;
    out.energy = saturate(params.x_min[storage_index], x_prev - ts * unclipped,
                          params.x_max[storage_index]);
    out.power = (x_prev - out.energy) / ts;
    return out;
}

StepOutcome dispatch_step(const std::vector<double>& u, const std::vector<int>& delta,
                          const std::vector<double>& x_prev, const std::vector<double>& w,
                          const MicrogridParams& params) {
    const RhoSolution sol = solve_rho(u, delta, x_prev, w, params);
    const auto laws = unit_laws(u, delta, x_prev, w, params);

    StepOutcome out;
    out.rho = sol.rho;
    out.feasible = sol.feasible;
    out.p.resize(params.num_units());
    out.sat_flags.assign(params.num_units(), SatRegion::interior);
    out.x.resize(params.num_storage);

    for (int i = 0; i < params.num_units(); ++i) {
        const UnitLaw& law = laws[i];
        out.p[i] = unit_power(law, sol.rho);
        if (law.active) {
            const double demand = law.set_point + law.chi * sol.rho;
            if (demand < law.lo)
                out.sat_flags[i] = SatRegion::at_lower;
            else if (demand > law.hi)
                out.sat_flags[i] = SatRegion::at_upper;
        }
    }
    for (int s = 0; s < params.num_storage; ++s) {
        const int unit = params.storage_begin() + s;
        double x = x_prev[s] - params.sampling_time * out.p[unit];
        // absorb last-bit rounding so the next step's state check passes
        x = std::min(std::max(x, params.x_min[s]), params.x_max[s]);
        out.x[s] = x;
    }
    return out;
}

std::vector<StepOutcome> simulate_horizon(const std::vector<std::vector<double>>& w_realized,
                                          const ControlPlan& plan, const std::vector<double>& x0,
                                          const MicrogridParams& params) {
    if (static_cast<int>(w_realized.size()) != plan.horizon)
        throw DimensionError("simulate_horizon: realization length != plan horizon");
    if (static_cast<int>(plan.u.size()) != plan.horizon ||
        static_cast<int>(plan.delta.size()) != plan.horizon)
        throw DimensionError("simulate_horizon: plan rows != horizon");

    std::vector<StepOutcome> out;
    out.reserve(plan.horizon);
    std::vector<double> x = x0;
    for (int j = 0; j < plan.horizon; ++j) {
        for (int i = 0; i < params.num_units(); ++i) {
            if (plan.u[j][i] < params.u_min[i] - 1e-7 || plan.u[j][i] > params.u_max[i] + 1e-7) {
                std::ostringstream oss;
                oss << "simulate_horizon: u[" << j << "][" << i << "] outside set-point bounds";
                throw ValidationError(oss.str());
            }
        }
        out.push_back(dispatch_step(plan.u[j], plan.delta[j], x, w_realized[j], params));
        x = out.back().x;
    }
    return out;
}

}  // namespace mgems
