#include "mgems/lp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <sstream>

extern "C" {
void dgetrf_(const int* m, const int* n, double* a, const int* lda, int* ipiv, int* info);
void dgetri_(const int* n, double* a, const int* lda, const int* ipiv, double* work,
             const int* lwork, int* info);
// OpenBLAS pool control; absent in reference BLAS builds.
void openblas_set_num_threads(int) __attribute__((weak));
}

namespace mgems {

int MilpInstance::add_var(double lb, double ub, bool binary, std::string var_name) {
    MilpVariable v;
    v.lb = lb;
    v.ub = ub;
    v.is_binary = binary;
    v.name = std::move(var_name);
    vars.push_back(std::move(v));
    objective.push_back(0.0);
    return static_cast<int>(vars.size()) - 1;
}

void MilpInstance::add_con(std::vector<int> idx, std::vector<double> coef, Rel rel, double rhs) {
    LinearConstraint c;
    c.idx = std::move(idx);
    c.coef = std::move(coef);
    c.rel = rel;
    c.rhs = rhs;
    cons.push_back(std::move(c));
}

std::vector<std::string> MilpInstance::validate() const {
    std::vector<std::string> issues;
    if (objective.size() != vars.size()) issues.push_back("objective length != variable count");
    for (std::size_t j = 0; j < vars.size(); ++j) {
        if (vars[j].lb > vars[j].ub) issues.push_back("variable " + vars[j].name + ": lb > ub");
        if (vars[j].is_binary && (vars[j].lb < 0.0 || vars[j].ub > 1.0))
            issues.push_back("binary variable " + vars[j].name + " with bounds outside [0,1]");
    }
    for (std::size_t i = 0; i < cons.size(); ++i) {
        const auto& c = cons[i];
        if (c.idx.size() != c.coef.size()) {
            issues.push_back("constraint " + std::to_string(i) + ": index/coef length mismatch");
            continue;
        }
        for (int j : c.idx)
            if (j < 0 || j >= static_cast<int>(vars.size()))
                issues.push_back("constraint " + std::to_string(i) + ": variable index out of range");
    }
    return issues;
}

std::string to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::optimal: return "optimal";
        case SolveStatus::infeasible: return "infeasible";
        case SolveStatus::unbounded: return "unbounded";
        case SolveStatus::gap_limit: return "gap_limit";
        case SolveStatus::resource_limit: return "resource_limit";
        case SolveStatus::numerical_error: return "numerical_error";
    }
    return "unknown";
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kDualTol = 1e-9;
constexpr double kPivotTol = 1e-9;
constexpr int kRefactorInterval = 100;

enum VarState : std::uint8_t { kBasic = 0, kAtLower = 1, kAtUpper = 2 };

void pin_blas_threads() {
    // The factorizations here are small; OpenBLAS thread fan-out only adds
    // spin-wait overhead and run-to-run wobble.
    static const bool done = [] {
        setenv("OPENBLAS_NUM_THREADS", "1", 0);
        setenv("OMP_NUM_THREADS", "1", 0);
        if (openblas_set_num_threads) openblas_set_num_threads(1);
        return true;
    }();
    (void)done;
}

}  // namespace

struct SimplexSolver::Impl {
    int n = 0;  // structural columns
    int m = 0;  // rows
    int total = 0;

    // structural matrix, CSC
    std::vector<int> col_ptr, row_idx;
    std::vector<double> val;
    std::vector<double> cost;     // structural objective
    std::vector<double> rhs;      // row right-hand sides
    std::vector<double> root_lb, root_ub;  // including slack bounds
    double feas_tol = 1e-7;

    // per-solve state
    std::vector<double> lb, ub;
    std::vector<std::uint8_t> state;
    std::vector<int> basic;
    std::vector<double> binv;  // m*m, column-major
    std::vector<double> beta;  // basic variable values per row
    std::vector<double> dcost; // reduced costs
    std::vector<double> alpha; // pivot row buffer
    std::vector<double> ftran; // pivot column buffer
    std::vector<int> ipiv;
    std::vector<double> work;

    // one-entry factorization cache: sibling nodes in branch-and-bound warm
    // start from the same parent basis
    std::vector<int> cached_basis;
    std::vector<double> cached_binv;

    explicit Impl(const MilpInstance& inst, double ftol) : feas_tol(ftol) {
        pin_blas_threads();
        n = static_cast<int>(inst.vars.size());
        m = static_cast<int>(inst.cons.size());
        total = n + m;
        cost = inst.objective;

        std::vector<std::vector<std::pair<int, double>>> cols(n);
        rhs.resize(m);
        root_lb.resize(total);
        root_ub.resize(total);
        for (int j = 0; j < n; ++j) {
            root_lb[j] = inst.vars[j].lb;
            root_ub[j] = inst.vars[j].ub;
        }
        for (int i = 0; i < m; ++i) {
            const auto& c = inst.cons[i];
            rhs[i] = c.rhs;
            for (std::size_t k = 0; k < c.idx.size(); ++k)
                cols[c.idx[k]].push_back({i, c.coef[k]});
            const int sj = n + i;
            switch (c.rel) {
                case Rel::le: root_lb[sj] = 0.0;  root_ub[sj] = kInf; break;
                case Rel::ge: root_lb[sj] = -kInf; root_ub[sj] = 0.0; break;
                case Rel::eq: root_lb[sj] = 0.0;  root_ub[sj] = 0.0; break;
            }
        }
        col_ptr.assign(n + 1, 0);
        for (int j = 0; j < n; ++j) {
            // combine duplicate row entries so pivots stay exact
            std::sort(cols[j].begin(), cols[j].end());
            col_ptr[j] = static_cast<int>(row_idx.size());
            for (std::size_t k = 0; k < cols[j].size(); ++k) {
                if (!row_idx.empty() && static_cast<int>(row_idx.size()) > col_ptr[j] &&
                    cols[j][k].first == row_idx.back()) {
                    val.back() += cols[j][k].second;
                } else {
                    row_idx.push_back(cols[j][k].first);
                    val.push_back(cols[j][k].second);
                }
            }
        }
        col_ptr[n] = static_cast<int>(row_idx.size());

        state.resize(total);
        basic.resize(m);
        binv.resize(static_cast<std::size_t>(m) * m);
        beta.resize(m);
        dcost.resize(total);
        alpha.resize(total);
        ftran.resize(m);
        ipiv.resize(std::max(m, 1));
        work.resize(std::max(m, 1) * 64);
    }

    double col_entry_value(int j) const {
        // nonbasic resting value
        return state[j] == kAtUpper ? ub[j] : lb[j];
    }

    void scatter_column(int j, std::vector<double>& dense, double scale) const {
        if (j < n) {
            for (int k = col_ptr[j]; k < col_ptr[j + 1]; ++k)
                dense[row_idx[k]] += scale * val[k];
        } else {
            dense[j - n] += scale;
        }
    }

    double column_dot(int j, const std::vector<double>& dense) const {
        if (j < n) {
            double s = 0.0;
            for (int k = col_ptr[j]; k < col_ptr[j + 1]; ++k) s += dense[row_idx[k]] * val[k];
            return s;
        }
        return dense[j - n];
    }

    bool refactorize() {
        if (m == 0) return true;
        std::vector<double> bmat(static_cast<std::size_t>(m) * m, 0.0);
        for (int r = 0; r < m; ++r) {
            const int j = basic[r];
            if (j < n) {
                for (int k = col_ptr[j]; k < col_ptr[j + 1]; ++k)
                    bmat[row_idx[k] + static_cast<std::size_t>(r) * m] += val[k];
            } else {
                bmat[(j - n) + static_cast<std::size_t>(r) * m] += 1.0;
            }
        }
        int info = 0;
        dgetrf_(&m, &m, bmat.data(), &m, ipiv.data(), &info);
        if (info != 0) return false;
        int lwork = static_cast<int>(work.size());
        dgetri_(&m, bmat.data(), &m, ipiv.data(), work.data(), &lwork, &info);
        if (info != 0) return false;
        binv = std::move(bmat);
        return true;
    }

    void recompute_beta() {
        std::vector<double> t = rhs;
        for (int j = 0; j < total; ++j) {
            if (state[j] == kBasic) continue;
            const double v = col_entry_value(j);
            if (v != 0.0) scatter_column(j, t, -v);
        }
        std::fill(beta.begin(), beta.end(), 0.0);
        for (int k = 0; k < m; ++k) {
            const double tk = t[k];
            if (tk == 0.0) continue;
            const double* colk = binv.data() + static_cast<std::size_t>(k) * m;
            for (int i = 0; i < m; ++i) beta[i] += tk * colk[i];
        }
    }

    void recompute_reduced_costs() {
        std::vector<double> y(m, 0.0);
        // y = cB' * Binv, column-contiguous
        std::vector<double> cb(m);
        for (int i = 0; i < m; ++i) cb[i] = basic[i] < n ? cost[basic[i]] : 0.0;
        for (int k = 0; k < m; ++k) {
            const double* colk = binv.data() + static_cast<std::size_t>(k) * m;
            double s = 0.0;
            for (int i = 0; i < m; ++i) s += cb[i] * colk[i];
            y[k] = s;
        }
        for (int j = 0; j < total; ++j) {
            const double cj = j < n ? cost[j] : 0.0;
            dcost[j] = state[j] == kBasic ? 0.0 : cj - column_dot(j, y);
        }
    }

    // Nonbasic variables must rest at a dual-feasible bound; flip where the
    // cost sign disagrees (bounds permitting).
    bool repair_nonbasic_states() {
        bool flipped = false;
        for (int j = 0; j < total; ++j) {
            if (state[j] == kBasic) continue;
            if (lb[j] == ub[j]) {
                state[j] = kAtLower;
                continue;
            }
            if (dcost[j] < -kDualTol && state[j] == kAtLower) {
                if (!std::isfinite(ub[j])) return false;
                state[j] = kAtUpper;
                flipped = true;
            } else if (dcost[j] > kDualTol && state[j] == kAtUpper) {
                if (!std::isfinite(lb[j])) return false;
                state[j] = kAtLower;
                flipped = true;
            } else if (state[j] == kAtLower && !std::isfinite(lb[j])) {
                if (!std::isfinite(ub[j])) return false;
                state[j] = kAtUpper;
                flipped = true;
            } else if (state[j] == kAtUpper && !std::isfinite(ub[j])) {
                state[j] = kAtLower;
                flipped = true;
            }
        }
        return !flipped || true;
    }

    double objective_value() const {
        double obj = 0.0;
        for (int j = 0; j < n; ++j) {
            if (cost[j] == 0.0) continue;
            obj += cost[j] * (state[j] == kBasic ? 0.0 : col_entry_value(j));
        }
        for (int i = 0; i < m; ++i)
            if (basic[i] < n) obj += cost[basic[i]] * beta[i];
        return obj;
    }

    void extract_solution(std::vector<double>& x) const {
        x.assign(n, 0.0);
        for (int j = 0; j < n; ++j)
            if (state[j] != kBasic) x[j] = col_entry_value(j);
        for (int i = 0; i < m; ++i)
            if (basic[i] < n) x[basic[i]] = beta[i];
    }

    LpResult run(const SimplexBasis* warm, SimplexBasis* basis_out) {
        LpResult res;
        if (m == 0) {
            // pure box problem
            res.status = SolveStatus::optimal;
            res.x.resize(n);
            res.objective = 0.0;
            for (int j = 0; j < n; ++j) {
                if (lb[j] > ub[j] + feas_tol) {
                    res.status = SolveStatus::infeasible;
                    return res;
                }
                res.x[j] = cost[j] >= 0.0 ? lb[j] : ub[j];
                res.objective += cost[j] * res.x[j];
            }
            if (basis_out) {
                basis_out->basic.clear();
                basis_out->state.assign(total, kAtLower);
            }
            return res;
        }

        for (int j = 0; j < total; ++j) {
            if (lb[j] > ub[j] + feas_tol) {
                res.status = SolveStatus::infeasible;
                return res;
            }
        }

        if (warm && static_cast<int>(warm->basic.size()) == m &&
            static_cast<int>(warm->state.size()) == total) {
            basic = warm->basic;
            state = warm->state;
        } else {
            for (int i = 0; i < m; ++i) basic[i] = n + i;
            for (int j = 0; j < total; ++j) state[j] = kAtLower;
            for (int i = 0; i < m; ++i) state[n + i] = kBasic;
        }
        if (basic == cached_basis) {
            binv = cached_binv;
        } else if (refactorize()) {
            cached_basis = basic;
            cached_binv = binv;
        } else {
            // fall back to the slack basis
            for (int i = 0; i < m; ++i) basic[i] = n + i;
            for (int j = 0; j < total; ++j) state[j] = kAtLower;
            for (int i = 0; i < m; ++i) state[n + i] = kBasic;
            if (!refactorize()) {
                res.status = SolveStatus::numerical_error;
                return res;
            }
            cached_basis = basic;
            cached_binv = binv;
        }
        recompute_reduced_costs();
        if (!repair_nonbasic_states()) {
            res.status = SolveStatus::numerical_error;
            return res;
        }
        recompute_beta();

        const long max_iter = 400L * (m + n) + 20000;
        int since_refactor = 0;
        long degenerate_streak = 0;
        bool bland = false;
        std::vector<char> banned(total, 0);

        for (long iter = 0; iter < max_iter; ++iter) {
            // leaving row: most violated basic variable (lowest row in Bland
            // mode)
            int r = -1;
            double worst = feas_tol;
            bool lower_violation = false;
            for (int i = 0; i < m; ++i) {
                const int j = basic[i];
                const double v = beta[i];
                double viol = 0.0;
                bool lower = false;
                if (v < lb[j]) {
                    viol = lb[j] - v;
                    lower = true;
                } else if (v > ub[j]) {
                    viol = v - ub[j];
                }
                if (viol > worst) {
                    worst = viol;
                    r = i;
                    lower_violation = lower;
                    if (bland) break;
                }
            }
            if (r < 0) {
                res.status = SolveStatus::optimal;
                res.objective = objective_value();
                res.iterations = static_cast<int>(iter);
                extract_solution(res.x);
                if (basis_out) {
                    basis_out->basic = basic;
                    basis_out->state = state;
                }
                return res;
            }

            // pivot row alpha = (row r of Binv) * A over nonbasic columns
            std::vector<double> brow(m);
            for (int k = 0; k < m; ++k) brow[k] = binv[r + static_cast<std::size_t>(k) * m];
            std::fill(banned.begin(), banned.end(), 0);

            const int leaving = basic[r];
            const double target = lower_violation ? lb[leaving] : ub[leaving];
            const double delta = beta[r] - target;

            for (int attempt = 0;; ++attempt) {
                if (attempt > 32) {
                    res.status = SolveStatus::numerical_error;
                    return res;
                }
                int q = -1;
                double best_ratio = kInf;
                double best_mag = 0.0;
                for (int j = 0; j < total; ++j) {
                    if (state[j] == kBasic || banned[j] || lb[j] == ub[j]) continue;
                    const double a = column_dot(j, brow);
                    alpha[j] = a;
                    const double adir = lower_violation ? -a : a;
                    const bool eligible = (state[j] == kAtLower && adir > kPivotTol) ||
                                          (state[j] == kAtUpper && adir < -kPivotTol);
                    if (!eligible) continue;
                    const double ratio = dcost[j] / adir;
                    const double mag = std::abs(adir);
                    bool take = false;
                    if (q < 0 || ratio < best_ratio - kDualTol) {
                        take = true;
                    } else if (!bland && ratio <= best_ratio + kDualTol && mag > best_mag * 1.01) {
                        take = true;  // prefer large pivots among near-ties
                    }
                    if (take) {
                        q = j;
                        best_ratio = std::min(best_ratio, ratio);
                        best_mag = mag;
                    }
                }
                if (q < 0) {
                    res.status = SolveStatus::infeasible;
                    res.iterations = static_cast<int>(iter);
                    if (basis_out) {
                        basis_out->basic = basic;
                        basis_out->state = state;
                    }
                    return res;
                }

                // ftran: pivot column in the current basis
                std::fill(ftran.begin(), ftran.end(), 0.0);
                if (q < n) {
                    for (int k = col_ptr[q]; k < col_ptr[q + 1]; ++k) {
                        const double vq = val[k];
                        const double* colk = binv.data() + static_cast<std::size_t>(row_idx[k]) * m;
                        for (int i = 0; i < m; ++i) ftran[i] += vq * colk[i];
                    }
                } else {
                    const double* colk = binv.data() + static_cast<std::size_t>(q - n) * m;
                    for (int i = 0; i < m; ++i) ftran[i] = colk[i];
                }
                const double pivot = ftran[r];
                if (std::abs(pivot) < kPivotTol) {
                    banned[q] = 1;  // disagreement with alpha, pick another column
                    continue;
                }

                const double step = delta / pivot;
                const double entering_value = col_entry_value(q) + step;
                for (int i = 0; i < m; ++i) beta[i] -= step * ftran[i];
                beta[r] = entering_value;
                state[leaving] = lower_violation ? kAtLower : kAtUpper;
                state[q] = kBasic;
                basic[r] = q;

                const double theta = dcost[q] / pivot;
                if (theta != 0.0) {
                    for (int j = 0; j < total; ++j) {
                        if (state[j] == kBasic || lb[j] == ub[j]) continue;
                        dcost[j] -= theta * alpha[j];
                    }
                }
                dcost[q] = 0.0;
                dcost[leaving] = -theta;

                // rank-1 update of the explicit inverse
                const double inv_pivot = 1.0 / pivot;
                for (int k = 0; k < m; ++k) {
                    double* colk = binv.data() + static_cast<std::size_t>(k) * m;
                    const double br = colk[r];
                    if (br == 0.0) continue;
                    const double scaled = br * inv_pivot;
                    for (int i = 0; i < m; ++i) colk[i] -= scaled * ftran[i];
                    colk[r] = scaled;
                }

                if (theta == 0.0 && std::abs(step) < 1e-12) {
                    if (++degenerate_streak > 2L * (m + n) + 200) bland = true;
                } else {
                    degenerate_streak = 0;
                    bland = false;
                }
                break;
            }

            if (++since_refactor >= kRefactorInterval) {
                since_refactor = 0;
                if (!refactorize()) {
                    res.status = SolveStatus::numerical_error;
                    return res;
                }
                recompute_reduced_costs();
                recompute_beta();
            }
        }
        res.status = SolveStatus::numerical_error;
        return res;
    }
};

SimplexSolver::SimplexSolver(const MilpInstance& instance, double feas_tol)
    : impl_(std::make_unique<Impl>(instance, feas_tol)) {}

SimplexSolver::~SimplexSolver() = default;

int SimplexSolver::num_structural() const { return impl_->n; }

LpResult SimplexSolver::solve(const std::vector<double>& lb, const std::vector<double>& ub,
                              const SimplexBasis* warm, SimplexBasis* basis_out) {
    Impl& s = *impl_;
    s.lb.assign(s.root_lb.begin(), s.root_lb.end());
    s.ub.assign(s.root_ub.begin(), s.root_ub.end());
    if (!lb.empty()) {
        if (static_cast<int>(lb.size()) != s.n || static_cast<int>(ub.size()) != s.n)
            throw DimensionError("SimplexSolver::solve: bound override length != variables");
        for (int j = 0; j < s.n; ++j) {
            s.lb[j] = lb[j];
            s.ub[j] = ub[j];
        }
    }
    return s.run(warm, basis_out);
}

LpResult solve_lp(const MilpInstance& instance, double feas_tol) {
    auto issues = instance.validate();
    if (!issues.empty()) throw ValidationError("solve_lp: invalid instance: " + issues.front());
    SimplexSolver solver(instance, feas_tol);
    return solver.solve({}, {});
}

}  // namespace mgems
