#include "mgems/types.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace mgems {

double saturate(double lo, double v, double hi) {
    if (lo > hi) {
        std::ostringstream oss;
        oss << "saturate: invalid bounds, lo=" << lo << " > hi=" << hi;
        throw InvalidBoundsError(oss.str());
    }
    if (v < lo) return lo;
    if (v > hi) return hi;
    return v;
}

std::vector<double> saturate(const std::vector<double>& lo, const std::vector<double>& v,
                             const std::vector<double>& hi) {
    if (lo.size() != v.size() || hi.size() != v.size())
        throw DimensionError("saturate: bound/value length mismatch");
    std::vector<double> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = saturate(lo[i], v[i], hi[i]);
    return out;
}

double stage_cost(const std::vector<double>& p, const std::vector<int>& delta,
                  const std::vector<int>& delta_prev, const CostWeights& w) {
    const std::size_t t = w.fuel.size();
    const std::size_t s = w.storage.size();
    if (w.fixed_on.size() != t || w.switching.size() != t)
        throw DimensionError("stage_cost: conventional weight lengths differ");
    if (delta.size() != t || delta_prev.size() != t)
        throw DimensionError("stage_cost: switch status length != number of weights");
    if (p.size() < t + s)
        throw DimensionError("stage_cost: power vector shorter than T+S");

    double cost = 0.0;
    for (std::size_t i = 0; i < t; ++i) {
        cost += w.fuel[i] * p[i];
        cost += w.fixed_on[i] * delta[i];
        cost += w.switching[i] * std::abs(delta[i] - delta_prev[i]);
    }
    for (std::size_t i = 0; i < s; ++i) cost += w.storage[i] * p[t + i];
    return cost;
}

double horizon_cost(const std::vector<StepOutcome>& outcomes, const ControlPlan& plan,
                    const std::vector<int>& delta0, const CostWeights& w) {
    if (static_cast<int>(outcomes.size()) != plan.horizon)
        throw DimensionError("horizon_cost: outcome count != plan horizon");
    if (static_cast<int>(plan.delta.size()) != plan.horizon)
        throw DimensionError("horizon_cost: plan delta rows != plan horizon");

    double cost = 0.0;
    const std::vector<int>* prev = &delta0;
    for (int j = 0; j < plan.horizon; ++j) {
        cost += stage_cost(outcomes[j].p, plan.delta[j], *prev, w);
        prev = &plan.delta[j];
    }
    return cost;
}

std::pair<std::vector<double>, std::vector<double>> dynamic_storage_limits(
    const std::vector<double>& x_prev, const MicrogridParams& params) {
    const int s = params.num_storage;
    if (static_cast<int>(x_prev.size()) != s)
        throw DimensionError("dynamic_storage_limits: x_prev length != num_storage");
    std::vector<double> lo(s), hi(s);
    for (int i = 0; i < s; ++i) {
        if (x_prev[i] < params.x_min[i] - 1e-12 || x_prev[i] > params.x_max[i] + 1e-12) {
            std::ostringstream oss;
            oss << "dynamic_storage_limits: x_prev[" << i << "]=" << x_prev[i]
                << " outside [" << params.x_min[i] << ", " << params.x_max[i] << "]";
            throw StateError(oss.str());
        }
        const int u = params.storage_begin() + i;
        lo[i] = std::max(params.p_min[u], (x_prev[i] - params.x_max[i]) / params.sampling_time);
        hi[i] = std::min(params.p_max[u], (x_prev[i] - params.x_min[i]) / params.sampling_time);
    }
    return {lo, hi};
}

namespace {

void check_len(std::vector<std::string>& issues, std::size_t got, std::size_t want,
               const char* what) {
    if (got != want) {
        std::ostringstream oss;
        oss << what << " has length " << got << ", expected " << want;
        issues.push_back(oss.str());
    }
}

}  // namespace

std::vector<std::string> validate_params(const MicrogridParams& params) {
    std::vector<std::string> issues;
    const int n = params.num_units();
    const int s = params.num_storage;

    if (params.num_conventional < 0 || params.num_storage < 0 || params.num_renewable < 0 ||
        params.num_loads < 0)
        issues.push_back("unit counts must be non-negative");

    check_len(issues, params.u_min.size(), n, "u_min");
    check_len(issues, params.u_max.size(), n, "u_max");
    check_len(issues, params.p_min.size(), n, "p_min");
    check_len(issues, params.p_max.size(), n, "p_max");
    check_len(issues, params.x_min.size(), s, "x_min");
    check_len(issues, params.x_max.size(), s, "x_max");
    check_len(issues, params.chi.size(), n, "chi");
    check_len(issues, params.renewable_cap.size(), params.num_renewable, "renewable_cap");
    check_len(issues, params.cost_weights.fuel.size(), params.num_conventional, "fuel weights");
    check_len(issues, params.cost_weights.fixed_on.size(), params.num_conventional,
              "fixed_on weights");
    check_len(issues, params.cost_weights.switching.size(), params.num_conventional,
              "switching weights");
    check_len(issues, params.cost_weights.storage.size(), s, "storage weights");
    if (!issues.empty()) return issues;  // length errors make index checks unsafe

    for (int i = 0; i < n; ++i) {
        std::ostringstream unit;
        unit << "unit " << i;
        if (params.u_min[i] > params.u_max[i]) issues.push_back(unit.str() + ": u_min > u_max");
        if (params.p_min[i] > params.p_max[i]) issues.push_back(unit.str() + ": p_min > p_max");
        if (params.chi[i] < 0.0) issues.push_back(unit.str() + ": chi < 0");
        if (params.p_max[i] <= 0.0) issues.push_back(unit.str() + ": p_max must be > 0");
        if (params.is_storage(i)) {
            if (params.p_min[i] >= 0.0)
                issues.push_back(unit.str() + ": storage p_min must be < 0");
        } else if (params.p_min[i] < 0.0) {
            issues.push_back(unit.str() + ": p_min must be >= 0");
        }
    }
    for (int i = 0; i < s; ++i) {
        if (params.x_min[i] > params.x_max[i]) {
            std::ostringstream oss;
            oss << "storage " << i << ": x_min > x_max";
            issues.push_back(oss.str());
        }
    }
    for (int i = 0; i < params.num_renewable; ++i) {
        if (params.renewable_cap[i] <= 0.0) {
            std::ostringstream oss;
            oss << "renewable " << i << ": renewable_cap must be > 0";
            issues.push_back(oss.str());
        }
    }
    if (params.sampling_time <= 0.0) issues.push_back("sampling_time must be > 0");

    bool any_droop = std::any_of(params.chi.begin(), params.chi.end(),
                                 [](double c) { return c > 0.0; });
    if (!any_droop) issues.push_back("at least one unit must have chi > 0");

    auto nonneg = [&issues](const std::vector<double>& v, const char* what) {
        for (double x : v)
            if (x < 0.0) {
                issues.push_back(std::string(what) + " must be non-negative");
                break;
            }
    };
    nonneg(params.cost_weights.fuel, "fuel weights");
    nonneg(params.cost_weights.fixed_on, "fixed_on weights");
    nonneg(params.cost_weights.switching, "switching weights");
    nonneg(params.cost_weights.storage, "storage weights");
    return issues;
}

std::vector<std::string> validate_scenario(const Scenario& scenario,
                                           const MicrogridParams& params) {
    std::vector<std::string> issues;
    const int r = params.num_renewable;
    const int d = params.num_loads;
    const int s = params.num_storage;
    const int t = params.num_conventional;

    if (scenario.horizon <= 0) issues.push_back("horizon must be >= 1");
    check_len(issues, scenario.w_min.size(), scenario.horizon, "w_min rows");
    check_len(issues, scenario.w_max.size(), scenario.horizon, "w_max rows");
    check_len(issues, scenario.x0.size(), s, "x0");
    check_len(issues, scenario.delta0.size(), t, "delta0");
    if (!issues.empty()) return issues;

    for (int k = 0; k < scenario.horizon; ++k) {
        if (static_cast<int>(scenario.w_min[k].size()) != r + d ||
            static_cast<int>(scenario.w_max[k].size()) != r + d) {
            std::ostringstream oss;
            oss << "step " << k << ": disturbance row length != R+D";
            issues.push_back(oss.str());
            continue;
        }
        for (int e = 0; e < r + d; ++e) {
            std::ostringstream where;
            where << "step " << k << " entry " << e;
            if (scenario.w_min[k][e] > scenario.w_max[k][e])
                issues.push_back(where.str() + ": w_min > w_max");
            if (e < r) {
                if (scenario.w_min[k][e] < 0.0)
                    issues.push_back(where.str() + ": renewable bound < 0");
            } else if (scenario.w_max[k][e] > 0.0) {
                issues.push_back(where.str() + ": load bound > 0");
            }
        }
    }
    for (int i = 0; i < s; ++i) {
        if (scenario.x0[i] < params.x_min[i] || scenario.x0[i] > params.x_max[i]) {
            std::ostringstream oss;
            oss << "x0[" << i << "]=" << scenario.x0[i] << " outside ["
                << params.x_min[i] << ", " << params.x_max[i] << "]";
            issues.push_back(oss.str());
        }
    }
    for (int i = 0; i < t; ++i) {
        if (scenario.delta0[i] != 0 && scenario.delta0[i] != 1) {
            std::ostringstream oss;
            oss << "delta0[" << i << "] must be 0 or 1";
            issues.push_back(oss.str());
        }
    }
    return issues;
}

}  // namespace mgems
