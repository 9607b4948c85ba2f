#pragma once

#include "mgems/milp.hpp"

namespace mgems {

/// Best-first branch-and-bound over the LP relaxation. Branches on the most
/// fractional binary (ties to the lowest variable index), prunes against the
/// incumbent minus the absolute gap. Deterministic on identical input as long
/// as no time limit interferes.
MilpSolution solve_milp(const MilpInstance& instance, const SolveOptions& options = {});

}  // namespace mgems
