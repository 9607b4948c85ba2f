#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "mgems/milp.hpp"

namespace mgems {

/// Basis snapshot for warm-starting: which column sits in each row of the
/// basis and, for nonbasic columns, which bound they rest at.
struct SimplexBasis {
    std::vector<int> basic;           // row -> column index
    std::vector<std::uint8_t> state;  // column -> VarState value
};

/// Bounded-variable dual simplex over the LP relaxation of a MilpInstance.
/// The constraint matrix is fixed at construction; variable bounds may be
/// overridden per solve, which is what branch-and-bound needs. Deterministic:
/// identical inputs follow identical pivot sequences.
class SimplexSolver {
public:
    explicit SimplexSolver(const MilpInstance& instance, double feas_tol = 1e-7);
    ~SimplexSolver();
    SimplexSolver(const SimplexSolver&) = delete;
    SimplexSolver& operator=(const SimplexSolver&) = delete;

    /// Solves min c'x with the given bounds (empty -> instance bounds).
    /// warm, if non-null, must come from a previous solve of the same
    /// instance. basis_out, if non-null, receives the final basis.
    LpResult solve(const std::vector<double>& lb, const std::vector<double>& ub,
                   const SimplexBasis* warm = nullptr, SimplexBasis* basis_out = nullptr);

    int num_structural() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// One-shot LP relaxation solve; complete for bounded-variable programs.
LpResult solve_lp(const MilpInstance& instance, double feas_tol = 1e-7);

}  // namespace mgems
