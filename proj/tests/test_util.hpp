#pragma once

#include <cstdint>
#include <vector>

#include "mgems/types.hpp"

namespace mgems::testutil {

// Case-study-like configuration: one conventional, one storage, two
// renewables (wind, pv), one load.
inline MicrogridParams case_params() {
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
    p.renewable_cap = {1, 1};
    return p;
}

// Single storage unit vs a single load.
inline MicrogridParams storage_only_params() {
    MicrogridParams p;
    p.num_conventional = 0;
    p.num_storage = 1;
    p.num_renewable = 0;
    p.num_loads = 1;
    p.u_min = {-5};
    p.u_max = {5};
    p.p_min = {-1};
    p.p_max = {1};
    p.x_min = {0};
    p.x_max = {6};
    p.chi = {1};
    p.sampling_time = 0.25;
    p.cost_weights.storage = {0.9};
    return p;
}

// One unit of each class plus a load; used by the dispatch examples.
inline MicrogridParams tsr_params() {
    MicrogridParams p;
    p.num_conventional = 1;
    p.num_storage = 1;
    p.num_renewable = 1;
    p.num_loads = 1;
    p.u_min = {-5, -5, -5};
    p.u_max = {5, 5, 5};
    p.p_min = {0.2, -1, 0};
    p.p_max = {1, 1, 1};
    p.x_min = {0};
    p.x_max = {6};
    p.chi = {1, 1, 1};
    p.sampling_time = 0.25;
    p.cost_weights.fuel = {1.0};
    p.cost_weights.fixed_on = {0.2};
    p.cost_weights.switching = {0.3};
    p.cost_weights.storage = {0.9};
    p.renewable_cap = {1};
    return p;
}

// Deterministic xorshift-based generator so random tests replay exactly on
// any platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ULL) {}

    std::uint64_t next() {
        std::uint64_t x = state_;
        x ^= x << 13;
        x ^= x >> 7;
        x ^= x << 17;
        state_ = x;
        return x;
    }

    double uniform(double lo, double hi) {
        const double u = static_cast<double>(next() >> 11) * 0x1.0p-53;
        return lo + u * (hi - lo);
    }

    int uniform_int(int lo, int hi) {  // inclusive
        return lo + static_cast<int>(next() % static_cast<std::uint64_t>(hi - lo + 1));
    }

    bool coin() { return (next() & 1) != 0; }

private:
    std::uint64_t state_;
};

// Random microgrid with healthy sign patterns; at least storage
// participates in droop.
inline MicrogridParams random_params(Rng& rng, int t, int s, int r, int d) {
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

}  // namespace mgems::testutil
