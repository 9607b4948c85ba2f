#include "mgems/scenario_gen.hpp"

#include <algorithm>
#include <cmath>

#include "mgems/rng.hpp"

namespace mgems {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::vector<double> wind_profile(XorShift& rng, int steps, double amplitude) {
    // bounded random walk, then a short moving average to take the edge off
    std::vector<double> raw(steps);
    double level = rng.uniform(0.3, 0.7);
    for (int k = 0; k < steps; ++k) {
        level += rng.uniform(-0.08, 0.08);
        level = std::clamp(level, 0.0, 1.0);
        raw[k] = level;
    }
    std::vector<double> out(steps);
    for (int k = 0; k < steps; ++k) {
        double acc = 0.0;
        int cnt = 0;
        for (int o = -2; o <= 2; ++o) {
            const int i = k + o;
            if (i < 0 || i >= steps) continue;
            acc += raw[i];
            ++cnt;
        }
        out[k] = amplitude * acc / cnt;
    }
    return out;
}

std::vector<double> pv_profile(XorShift& rng, int steps, int steps_per_day, double amplitude,
                               double ts) {
    std::vector<double> out(steps, 0.0);
    const int days = (steps + steps_per_day - 1) / steps_per_day;
    std::vector<double> day_amp(days);
    for (int d = 0; d < days; ++d) day_amp[d] = amplitude * (1.0 + rng.uniform(-0.25, 0.25));
    for (int k = 0; k < steps; ++k) {
        const double hour = std::fmod((k + 0.5) * ts, 24.0);
        if (hour <= 6.0 || hour >= 18.0) continue;  // night
        const double phase = (hour - 6.0) / 12.0;
        out[k] = std::max(0.0, day_amp[k / steps_per_day] * std::sin(kPi * phase));
    }
    return out;
}

std::vector<double> load_profile(XorShift& rng, int steps, double ts, double base, double peak) {
    std::vector<double> out(steps);
    double jitter = 0.0;
    for (int k = 0; k < steps; ++k) {
        const double hour = std::fmod((k + 0.5) * ts, 24.0);
        const double morning = std::exp(-0.5 * std::pow((hour - 8.0) / 2.0, 2.0));
        const double evening = std::exp(-0.5 * std::pow((hour - 19.0) / 2.5, 2.0));
        jitter = std::clamp(jitter + rng.uniform(-0.01, 0.01), -0.05, 0.05);
        out[k] = -(base + peak * (0.6 * morning + evening) + jitter);
        out[k] = std::min(out[k], 0.0);
    }
    return out;
}

}  // namespace

Scenario gen_synthetic_scenario(std::uint64_t seed, int days, const MicrogridParams& params,
                                double uncertainty_width,
                                const std::optional<std::vector<double>>& x0) {
    if (days < 1) throw ValidationError("gen_synthetic_scenario: days must be >= 1");
    if (uncertainty_width < 0.0)
        throw ValidationError("gen_synthetic_scenario: width must be >= 0");

    const double ts = params.sampling_time;
    const int steps_per_day = static_cast<int>(std::lround(24.0 / ts));
    const int steps = steps_per_day * days;
    const int r = params.num_renewable;
    const int d = params.num_loads;

    XorShift rng(seed);

    std::vector<std::vector<double>> nominal;  // per signal, length steps
    for (int i = 0; i < r; ++i) {
        const double amp = 0.55 + 0.2 * (i / 2);
        if (i % 2 == 0)
            nominal.push_back(wind_profile(rng, steps, amp));
        else
            nominal.push_back(pv_profile(rng, steps, steps_per_day, amp + 0.25, ts));
    }
    for (int i = 0; i < d; ++i) {
        const double base = 0.3 / d;
        const double peak = 0.4 / d;
        nominal.push_back(load_profile(rng, steps, ts, base, peak));
    }

    Scenario sc;
    sc.horizon = steps;
    sc.w_min.assign(steps, std::vector<double>(r + d));
    sc.w_max.assign(steps, std::vector<double>(r + d));
    for (int k = 0; k < steps; ++k) {
        for (int e = 0; e < r + d; ++e) {
            const double nom = nominal[e][k];
            double lo = nom * (e < r ? 1.0 - uncertainty_width : 1.0 + uncertainty_width);
            double hi = nom * (e < r ? 1.0 + uncertainty_width : 1.0 - uncertainty_width);
            if (e < r) {
                lo = std::max(0.0, lo);
                hi = std::max(hi, lo);
            } else {
                hi = std::min(0.0, hi);
                lo = std::min(lo, hi);
            }
            sc.w_min[k][e] = lo;
            sc.w_max[k][e] = hi;
        }
    }

    if (x0) {
        if (static_cast<int>(x0->size()) != params.num_storage)
            throw DimensionError("gen_synthetic_scenario: x0 length != num_storage");
        sc.x0 = *x0;
    } else {
        for (int s = 0; s < params.num_storage; ++s)
            sc.x0.push_back(0.5 * (params.x_min[s] + params.x_max[s]));
    }
    sc.delta0.assign(params.num_conventional, 0);

    const auto issues = validate_scenario(sc, params);
    if (!issues.empty())
        throw ValidationError("gen_synthetic_scenario: generated scenario invalid: " +
                              issues.front());
    return sc;
}

}  // namespace mgems
