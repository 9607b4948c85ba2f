#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace mgems {

struct SuiteResult {
    std::string name;
    int instances = 0;
    int failures = 0;
    std::string first_failure;  // replayable serialization of the first bad case
};

/// Test hooks: deliberately break a model equation so a suite's sensitivity
/// can be demonstrated. Production callers use `none`.
enum class FaultInjection { none, flip_load_sign };

/// Randomized property suites over small instances: rho monotonicity, step
/// monotonicity, root validity, the storage-transformation equivalence,
/// bisection agreement, endpoint feasibility sufficiency, worst case at the
/// lower endpoint, feasible-set inclusion and encoding soundness.
std::vector<SuiteResult> run_verification_suite(std::uint64_t seed,
                                                FaultInjection fault = FaultInjection::none);

bool all_passed(const std::vector<SuiteResult>& results);

}  // namespace mgems
