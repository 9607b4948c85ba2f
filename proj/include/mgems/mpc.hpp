#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mgems/dispatch.hpp"
#include "mgems/milp.hpp"
#include "mgems/types.hpp"

namespace mgems {

enum class ControllerVariant {
    prescient,          // saturated model, single w_min scenario
    mm,                 // no saturation, renewable droop off
    sat_mm,             // saturation, renewable droop off
    res_droop_mm,       // no saturation, renewable droop on
    sat_res_droop_mm,   // saturation, renewable droop on
};

ControllerVariant parse_variant(const std::string& name);  // e.g. "sat-res-mm"
std::string variant_name(ControllerVariant v);
bool variant_is_saturated(ControllerVariant v);
bool variant_is_robust(ControllerVariant v);  // two scenario copies

/// Saturation linearization: indicator big-M rows, or the incremental
/// piecewise formulation whose LP relaxation is the convex hull of each
/// saturation graph. Both are exact for integral assignments; the
/// incremental one branches far less.
enum class SatEncodingStyle { big_m, incremental };

struct ControllerConfig {
    ControllerVariant variant = ControllerVariant::sat_res_droop_mm;
    int horizon = 8;  // Np
    std::optional<std::vector<double>> chi_override;
    // Encode a saturation side only when interval arithmetic cannot rule it
    // out. Off reproduces the textbook encoding with every binary present.
    bool simplify_static_saturation = true;
    SatEncodingStyle sat_encoding = SatEncodingStyle::incremental;
};

/// Droop gains the controller variant assumes: the override when given,
/// with renewable gains forced to zero for the non-RES-droop variants.
std::vector<double> effective_chi(const ControllerConfig& config, const MicrogridParams& params);

/// Per-encoding big-M constants, derived from interval arithmetic over the
/// variable boxes, recorded for audit.
struct BigMEntry {
    std::string role;
    double value = 0.0;
};
struct EncodingConstants {
    double eps_strict = 0.0;  // strict region inequalities are closed
    std::vector<BigMEntry> entries;
};

/// Index maps from semantic roles into the flat variable vector.
/// Copy 0 is the w_min scenario; copy 1 (robust variants) the w_max one.
struct VariableLayout {
    int num_copies = 1;
    std::vector<std::vector<int>> u;          // [step][unit]
    std::vector<std::vector<int>> delta;      // [step][conv]
    std::vector<std::vector<int>> sw;         // [step][conv], |delta - delta_prev|
    std::vector<std::vector<int>> rho;        // [copy][step]
    std::vector<std::vector<std::vector<int>>> p;  // [copy][step][unit]
    std::vector<std::vector<std::vector<int>>> x;  // [copy][step][storage]
    int num_binaries = 0;
};

struct BuiltProblem {
    MilpInstance instance;
    VariableLayout layout;
    EncodingConstants constants;
    RhoBounds rho_box;
    std::vector<double> chi;  // effective droop gains used by the model
    ControllerConfig config;
};

/// Affine expression over instance variables; the saturation/product/min
/// encoders consume these.
struct AffineExpr {
    std::vector<int> idx;
    std::vector<double> coef;
    double constant = 0.0;
    double lo = 0.0;  // interval bounds over the variable box
    double hi = 0.0;
};

struct SatEncoding {
    int output = -1;
    int z_lo = -1;  // -1 when that side is statically inactive
    int z_hi = -1;
};

/// y = sat(lo, expr, hi) through indicator binaries and big-M rows. For
/// every feasible assignment the output equals the saturation of the
/// expression; for every expression value a feasible assignment exists.
SatEncoding encode_saturation(MilpInstance& m, const AffineExpr& expr, double lo, double hi,
                              EncodingConstants& constants, const std::string& role,
                              bool simplify);

/// Same contract through the incremental piecewise formulation: segment
/// fill variables with ordering binaries, locally ideal LP relaxation.
SatEncoding encode_saturation_incremental(MilpInstance& m, const AffineExpr& expr, double lo,
                                          double hi, EncodingConstants& constants,
                                          const std::string& role, bool simplify);

/// p = delta AND expr for an interval-bounded expression; exact for binary
/// delta. In the saturated model expr is just the sat-output variable.
int encode_switch_product(MilpInstance& m, int delta, const AffineExpr& expr, double out_lo,
                          double out_hi, EncodingConstants& constants, const std::string& role);

/// s = |delta_j - delta_jm1| for binary operands; delta_jm1 < 0 means the
/// fixed initial status delta0 passed via delta0_value.
int encode_abs_switching(MilpInstance& m, int delta_j, int delta_jm1, int delta0_value,
                         const std::string& role);

/// y = min(expr, cap) with one indicator binary.
SatEncoding encode_min_with_constant(MilpInstance& m, const AffineExpr& expr, double cap,
                                     EncodingConstants& constants, const std::string& role);

/// Builds the controller MILP over the scenario window: shared controls,
/// one physical copy per endpoint scenario, stage cost on the w_min copy.
BuiltProblem build_problem(const ControllerConfig& config, const Scenario& window,
                           const MicrogridParams& params);

/// The big-M table build_problem would derive, without keeping the instance.
EncodingConstants derive_big_m(const ControllerConfig& config, const Scenario& window,
                               const MicrogridParams& params);

/// Clamps the control variables to a fixed plan (feasibility probes and
/// inclusion tests).
void pin_controls(BuiltProblem& built, const ControlPlan& plan);

struct OpenLoopSolution {
    SolveStatus status = SolveStatus::infeasible;
    ControlPlan plan;
    double predicted_cost = 0.0;
    std::vector<StepOutcome> trajectory_min;
    std::vector<StepOutcome> trajectory_max;  // empty for prescient
    long nodes = 0;
};

/// Reads the control plan out of a solver result and replays it through the
/// exact dispatch simulation at both endpoint scenarios. A disagreement
/// between the replay and the MILP's internal trajectory variables beyond
/// tolerance raises EncodingDefectError.
OpenLoopSolution extract_solution(const MilpSolution& solution, const BuiltProblem& built,
                                  const Scenario& window, const MicrogridParams& params);

}  // namespace mgems
