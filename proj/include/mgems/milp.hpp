#pragma once

#include <string>
#include <vector>

#include "mgems/errors.hpp"

namespace mgems {

enum class Rel { le, ge, eq };

struct MilpVariable {
    double lb = 0.0;
    double ub = 0.0;
    bool is_binary = false;
    std::string name;  // semantic role, also used as the export column name
};

struct LinearConstraint {
    std::vector<int> idx;
    std::vector<double> coef;
    Rel rel = Rel::eq;
    double rhs = 0.0;
};

/// Abstract mixed-integer linear program: minimize c'x subject to linear
/// constraints and variable bounds, with binary markers. Binary variables
/// carry bounds within [0, 1].
struct MilpInstance {
    std::string name = "milp";
    std::vector<MilpVariable> vars;
    std::vector<double> objective;  // dense, one per variable
    double objective_constant = 0.0;
    std::vector<LinearConstraint> cons;

    int add_var(double lb, double ub, bool binary, std::string var_name);
    void add_con(std::vector<int> idx, std::vector<double> coef, Rel rel, double rhs);

    /// Internal consistency: index ranges, binary bounds, matching lengths.
    std::vector<std::string> validate() const;
};

enum class SolveStatus { optimal, infeasible, unbounded, gap_limit, resource_limit, numerical_error };

std::string to_string(SolveStatus s);

struct LpResult {
    SolveStatus status = SolveStatus::numerical_error;
    double objective = 0.0;
    std::vector<double> x;
    int iterations = 0;
};

struct SolveOptions {
    double abs_gap = 1e-6;       // absolute optimality gap
    double int_tol = 1e-6;       // integrality tolerance
    double feas_tol = 1e-7;      // primal feasibility tolerance
    long node_limit = 2000000;
    double time_limit_sec = 0.0;  // 0 = no limit (limits break determinism)
    std::string branch_rule = "most-fractional";
    bool collect_node_trace = false;
};

struct NodeTraceEntry {
    long id = 0;
    long parent = -1;
    double bound = 0.0;
    int depth = 0;
};

struct MilpSolution {
    SolveStatus status = SolveStatus::numerical_error;
    double objective = 0.0;
    double best_bound = 0.0;
    std::vector<double> x;
    long nodes = 0;
    int lp_iterations = 0;
    std::vector<NodeTraceEntry> node_trace;  // filled when requested
};

}  // namespace mgems
