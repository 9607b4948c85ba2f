#include "mgems/branch_bound.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <queue>

#include "mgems/lp.hpp"

namespace mgems {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct NodeData {
    std::vector<std::pair<int, int>> fixes;  // (binary var, 0/1) along the path
    std::shared_ptr<const SimplexBasis> basis;  // parent's final basis
    double bound = -kInf;
    long parent = -1;
    int depth = 0;
};

struct HeapEntry {
    double bound;
    long id;
    bool operator>(const HeapEntry& o) const {
        if (bound != o.bound) return bound > o.bound;
        return id > o.id;
    }
};

}  // namespace

MilpSolution solve_milp(const MilpInstance& instance, const SolveOptions& options) {
    {
        auto issues = instance.validate();
        if (!issues.empty())
            throw ValidationError("solve_milp: invalid instance: " + issues.front());
    }
    if (options.branch_rule != "most-fractional")
        throw ValidationError("solve_milp: unknown branch rule '" + options.branch_rule + "'");

    const int n = static_cast<int>(instance.vars.size());
    std::vector<int> binaries;
    for (int j = 0; j < n; ++j)
        if (instance.vars[j].is_binary) binaries.push_back(j);

    SimplexSolver solver(instance, options.feas_tol);

    std::vector<double> root_lb(n), root_ub(n);
    for (int j = 0; j < n; ++j) {
        root_lb[j] = instance.vars[j].lb;
        root_ub[j] = instance.vars[j].ub;
    }

    MilpSolution sol;
    sol.status = SolveStatus::infeasible;
    sol.objective = kInf;
    sol.best_bound = kInf;

    double incumbent = kInf;
    std::vector<double> incumbent_x;

    std::priority_queue<HeapEntry, std::vector<HeapEntry>, std::greater<HeapEntry>> open;
    std::map<long, std::unique_ptr<NodeData>> store;

    long next_id = 0;
    {
        auto root = std::make_unique<NodeData>();
        root->bound = -kInf;
        open.push({-kInf, next_id});
        store.emplace(next_id, std::move(root));
        ++next_id;
    }

    const auto t0 = std::chrono::steady_clock::now();
    bool hit_limit = false;
    std::vector<double> lb(n), ub(n);

    while (!open.empty()) {
        if (options.node_limit > 0 && sol.nodes >= options.node_limit) {
            hit_limit = true;
            break;
        }
        if (options.time_limit_sec > 0.0) {
            const double el =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            if (el > options.time_limit_sec) {
                hit_limit = true;
                break;
            }
        }

        const HeapEntry top = open.top();
        open.pop();
        auto it = store.find(top.id);
        NodeData node = std::move(*it->second);
        store.erase(it);

        if (node.bound >= incumbent - options.abs_gap) {
            // best-first: every remaining node is at least as bad
            sol.best_bound = node.bound;
            break;
        }

        lb = root_lb;
        ub = root_ub;
        for (const auto& [var, v] : node.fixes) {
            lb[var] = v;
            ub[var] = v;
        }

        SimplexBasis out_basis;
        const SimplexBasis* warm = node.basis ? node.basis.get() : nullptr;
        LpResult lp = solver.solve(lb, ub, warm, &out_basis);
        ++sol.nodes;
        sol.lp_iterations += lp.iterations;

        if (lp.status == SolveStatus::numerical_error)
            throw NumericalError("solve_milp: LP relaxation failed numerically");
        if (lp.status == SolveStatus::infeasible) continue;

        const double bound = lp.objective;
        if (options.collect_node_trace)
            sol.node_trace.push_back({sol.nodes - 1, node.parent, bound, node.depth});
        if (bound >= incumbent - options.abs_gap) continue;

        // most fractional binary, ties to the lowest index
        int branch_var = -1;
        double best_dist = options.int_tol;
        for (int j : binaries) {
            const double v = lp.x[j];
            const double dist = std::min(v - std::floor(v), std::ceil(v) - v);
            if (dist > best_dist + 1e-12) {
                best_dist = dist;
                branch_var = j;
            }
        }

        if (branch_var < 0) {
            // integral within tolerance
            if (bound < incumbent - 1e-12) {
                incumbent = bound;
                incumbent_x = lp.x;
                for (int j : binaries) incumbent_x[j] = std::round(incumbent_x[j]);
            }
            continue;
        }

        auto shared_basis = std::make_shared<const SimplexBasis>(std::move(out_basis));
        for (int v = 0; v <= 1; ++v) {
            auto child = std::make_unique<NodeData>();
            child->fixes = node.fixes;
            child->fixes.emplace_back(branch_var, v);
            child->basis = shared_basis;
            child->bound = bound;
            child->parent = sol.nodes - 1;
            child->depth = node.depth + 1;
            open.push({bound, next_id});
            store.emplace(next_id, std::move(child));
            ++next_id;
        }
    }

    if (incumbent < kInf) {
        sol.objective = incumbent + instance.objective_constant;
        sol.x = std::move(incumbent_x);
        if (hit_limit) {
            sol.status = SolveStatus::gap_limit;
            double open_best = incumbent;
            if (!open.empty()) open_best = std::min(open_best, open.top().bound);
            sol.best_bound = open_best + instance.objective_constant;
        } else {
            sol.status = SolveStatus::optimal;
            if (!open.empty() && open.top().bound < incumbent - options.abs_gap) {
                // loop ended via stop condition; report the proven bound
                sol.best_bound = open.top().bound + instance.objective_constant;
            } else {
                sol.best_bound = sol.objective;
            }
        }
    } else if (hit_limit) {
        sol.status = SolveStatus::resource_limit;
    } else {
        sol.status = SolveStatus::infeasible;
    }
    return sol;
}

}  // namespace mgems
