#include "mgems/mpc.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace mgems {

namespace {

constexpr double kBigMSafety = 1.1;
constexpr double kBigMFloor = 1e-6;
constexpr double kTrajTol = 1e-6;

std::string step_tag(const std::string& what, int copy, int step) {
    std::ostringstream oss;
    oss << what << " copy" << copy << " step" << step;
    return oss.str();
}

// Appends a row "terms(vars) + extra rel rhs - expr.constant" style rows are
// assembled by the callers; this just moves the expression constant to the
// right-hand side.
void add_expr_row(MilpInstance& m, const AffineExpr& expr,
                  std::vector<std::pair<int, double>> extra, Rel rel, double rhs) {
    std::vector<int> idx = expr.idx;
    std::vector<double> coef = expr.coef;
    for (const auto& [j, c] : extra) {
        idx.push_back(j);
        coef.push_back(c);
    }
    m.add_con(std::move(idx), std::move(coef), rel, rhs - expr.constant);
}

}  // namespace

ControllerVariant parse_variant(const std::string& name) {
    if (name == "prescient") return ControllerVariant::prescient;
    if (name == "mm") return ControllerVariant::mm;
    if (name == "sat-mm" || name == "sat_mm") return ControllerVariant::sat_mm;
    if (name == "res-mm" || name == "res_droop_mm") return ControllerVariant::res_droop_mm;
    if (name == "sat-res-mm" || name == "sat_res_droop_mm")
        return ControllerVariant::sat_res_droop_mm;
    throw ValidationError("unknown controller variant '" + name + "'");
}

std::string variant_name(ControllerVariant v) {
    switch (v) {
        case ControllerVariant::prescient: return "prescient";
        case ControllerVariant::mm: return "mm";
        case ControllerVariant::sat_mm: return "sat-mm";
        case ControllerVariant::res_droop_mm: return "res-mm";
        case ControllerVariant::sat_res_droop_mm: return "sat-res-mm";
    }
    return "?";
}

bool variant_is_saturated(ControllerVariant v) {
    return v == ControllerVariant::prescient || v == ControllerVariant::sat_mm ||
           v == ControllerVariant::sat_res_droop_mm;
}

bool variant_is_robust(ControllerVariant v) { return v != ControllerVariant::prescient; }

std::vector<double> effective_chi(const ControllerConfig& config, const MicrogridParams& params) {
    std::vector<double> chi = config.chi_override ? *config.chi_override : params.chi;
    if (static_cast<int>(chi.size()) != params.num_units())
        throw DimensionError("chi override length != number of units");
    for (double c : chi)
        if (c < 0.0) throw ValidationError("chi override must be non-negative");
    if (config.variant == ControllerVariant::mm || config.variant == ControllerVariant::sat_mm) {
        for (int r = 0; r < params.num_renewable; ++r) chi[params.renewable_begin() + r] = 0.0;
    }
    return chi;
}

SatEncoding encode_saturation(MilpInstance& m, const AffineExpr& expr, double lo, double hi,
                              EncodingConstants& constants, const std::string& role,
                              bool simplify) {
    if (lo > hi) {
        std::ostringstream oss;
        oss << "encode_saturation(" << role << "): lo=" << lo << " > hi=" << hi;
        throw InvalidBoundsError(oss.str());
    }
    SatEncoding enc;
    const bool need_lo = !simplify || expr.lo < lo;
    const bool need_hi = !simplify || expr.hi > hi;

    const double y_lo = simplify ? saturate(lo, expr.lo, hi) : lo;
    const double y_hi = simplify ? saturate(lo, expr.hi, hi) : hi;
    enc.output = m.add_var(y_lo, y_hi, false, role);

    if (!need_lo && !need_hi) {
        add_expr_row(m, expr, {{enc.output, -1.0}}, Rel::eq, 0.0);
        return enc;
    }

    const double m_needed = std::max({hi - expr.lo, expr.hi - lo, hi - lo, kBigMFloor});
    const double big_m = kBigMSafety * m_needed;
    constants.entries.push_back({role, big_m});

    if (need_lo) enc.z_lo = m.add_var(0.0, 1.0, true, role + " z_lo");
    if (need_hi) enc.z_hi = m.add_var(0.0, 1.0, true, role + " z_hi");

    if (need_lo && need_hi)
        m.add_con({enc.z_lo, enc.z_hi}, {1.0, 1.0}, Rel::le, 1.0);

    // y tracks the expression in the interior region
    {
        std::vector<std::pair<int, double>> extra{{enc.output, 1.0}};
        if (need_lo) extra.push_back({enc.z_lo, -big_m});
        AffineExpr neg = expr;  // y - expr - M z_lo <= 0
        for (auto& c : neg.coef) c = -c;
        neg.constant = -expr.constant;
        add_expr_row(m, neg, std::move(extra), Rel::le, 0.0);
    }
    {
        std::vector<std::pair<int, double>> extra{{enc.output, 1.0}};
        if (need_hi) extra.push_back({enc.z_hi, big_m});
        AffineExpr neg = expr;  // y - expr + M z_hi >= 0
        for (auto& c : neg.coef) c = -c;
        neg.constant = -expr.constant;
        add_expr_row(m, neg, std::move(extra), Rel::ge, 0.0);
    }
    // y pinned to the active bound
    if (need_lo)
        m.add_con({enc.output, enc.z_lo}, {1.0, big_m}, Rel::le, lo + big_m);
    if (need_hi)
        m.add_con({enc.output, enc.z_hi}, {1.0, -big_m}, Rel::ge, hi - big_m);
    // region selection: an active indicator certifies the expression side
    if (need_lo) add_expr_row(m, expr, {{enc.z_lo, big_m}}, Rel::le, lo + big_m);
    if (need_hi) add_expr_row(m, expr, {{enc.z_hi, -big_m}}, Rel::ge, hi - big_m);
    // and the interior region keeps the expression inside the bounds
    if (need_lo) {
        std::vector<std::pair<int, double>> extra{{enc.z_lo, big_m}};
        if (need_hi) extra.push_back({enc.z_hi, big_m});
        add_expr_row(m, expr, std::move(extra), Rel::ge, lo);
    }
    if (need_hi) {
        std::vector<std::pair<int, double>> extra{{enc.z_hi, -big_m}};
        if (need_lo) extra.push_back({enc.z_lo, -big_m});
        add_expr_row(m, expr, std::move(extra), Rel::le, hi);
    }
    return enc;
}

SatEncoding encode_saturation_incremental(MilpInstance& m, const AffineExpr& expr, double lo,
                                          double hi, EncodingConstants& constants,
                                          const std::string& role, bool simplify) {
    if (lo > hi) {
        std::ostringstream oss;
        oss << "encode_saturation(" << role << "): lo=" << lo << " > hi=" << hi;
        throw InvalidBoundsError(oss.str());
    }
    SatEncoding enc;
    const bool need_lo = !simplify || expr.lo < lo;
    const bool need_hi = !simplify || expr.hi > hi;

    if (hi - lo < 1e-15) {
        // degenerate band: the output is pinned regardless of the expression
        enc.output = m.add_var(lo, hi, false, role);
        return enc;
    }

    const double y_lo = simplify ? saturate(lo, expr.lo, hi) : lo;
    const double y_hi = simplify ? saturate(lo, expr.hi, hi) : hi;
    enc.output = m.add_var(y_lo, y_hi, false, role);

    if (!need_lo && !need_hi) {
        add_expr_row(m, expr, {{enc.output, -1.0}}, Rel::eq, 0.0);
        return enc;
    }

    // segment breakpoints of the expression range, left to right
    const double a0 = std::min(expr.lo, lo);
    const double a3 = std::max(expr.hi, hi);
    const double len_lo = lo - a0;      // slope-0 entry segment
    const double len_mid = hi - lo;     // slope-1 pass-through segment
    const double len_hi = a3 - hi;      // slope-0 exit segment
    constants.entries.push_back({role, std::max({len_lo, len_mid, len_hi})});

    const int d_lo = need_lo ? m.add_var(0.0, len_lo, false, role + " fill_lo") : -1;
    const int d_mid = m.add_var(0.0, len_mid, false, role + " fill_mid");
    const int d_hi = need_hi ? m.add_var(0.0, len_hi, false, role + " fill_hi") : -1;
    if (need_lo) enc.z_lo = m.add_var(0.0, 1.0, true, role + " seg_lo");
    if (need_hi) enc.z_hi = m.add_var(0.0, 1.0, true, role + " seg_hi");

    // expr = a0 + sum of fills
    {
        std::vector<std::pair<int, double>> extra;
        if (need_lo) extra.push_back({d_lo, -1.0});
        extra.push_back({d_mid, -1.0});
        if (need_hi) extra.push_back({d_hi, -1.0});
        add_expr_row(m, expr, std::move(extra), Rel::eq, a0);
    }
    // y = lo + mid fill
    m.add_con({enc.output, d_mid}, {1.0, -1.0}, Rel::eq, lo);
    // fill ordering: a segment opens only when its predecessor is full
    if (need_lo) {
        m.add_con({d_lo, enc.z_lo}, {1.0, -len_lo}, Rel::ge, 0.0);
        m.add_con({d_mid, enc.z_lo}, {1.0, -len_mid}, Rel::le, 0.0);
    }
    if (need_hi) {
        m.add_con({d_mid, enc.z_hi}, {1.0, -len_mid}, Rel::ge, 0.0);
        m.add_con({d_hi, enc.z_hi}, {1.0, -len_hi}, Rel::le, 0.0);
    }
    return enc;
}

int encode_switch_product(MilpInstance& m, int delta, const AffineExpr& expr, double out_lo,
                          double out_hi, EncodingConstants& constants, const std::string& role) {
    const double big_m =
        kBigMSafety * std::max({expr.hi, -expr.lo, std::abs(out_hi), std::abs(out_lo), kBigMFloor});
    constants.entries.push_back({role, big_m});
    const int p = m.add_var(std::min(0.0, out_lo), std::max(0.0, out_hi), false, role);
    // p <= expr + M(1-delta);  p >= expr - M(1-delta)
    {
        AffineExpr neg = expr;
        for (auto& c : neg.coef) c = -c;
        neg.constant = -expr.constant;
        add_expr_row(m, neg, {{p, 1.0}, {delta, big_m}}, Rel::le, big_m);
        add_expr_row(m, neg, {{p, 1.0}, {delta, -big_m}}, Rel::ge, -big_m);
    }
    // 0/out bounds switched by delta
    m.add_con({p, delta}, {1.0, -out_hi}, Rel::le, 0.0);
    m.add_con({p, delta}, {1.0, -out_lo}, Rel::ge, 0.0);
    return p;
}

int encode_abs_switching(MilpInstance& m, int delta_j, int delta_jm1, int delta0_value,
                         const std::string& role) {
    const int s = m.add_var(0.0, 1.0, false, role);
    if (delta_jm1 >= 0) {
        m.add_con({s, delta_j, delta_jm1}, {1.0, -1.0, 1.0}, Rel::ge, 0.0);
        m.add_con({s, delta_j, delta_jm1}, {1.0, 1.0, -1.0}, Rel::ge, 0.0);
        m.add_con({s, delta_j, delta_jm1}, {1.0, -1.0, -1.0}, Rel::le, 0.0);
        m.add_con({s, delta_j, delta_jm1}, {1.0, 1.0, 1.0}, Rel::le, 2.0);
    } else {
        const double d0 = delta0_value;
        m.add_con({s, delta_j}, {1.0, -1.0}, Rel::ge, -d0);
        m.add_con({s, delta_j}, {1.0, 1.0}, Rel::ge, d0);
        m.add_con({s, delta_j}, {1.0, -1.0}, Rel::le, d0);
        m.add_con({s, delta_j}, {1.0, 1.0}, Rel::le, 2.0 - d0);
    }
    return s;
}

SatEncoding encode_min_with_constant(MilpInstance& m, const AffineExpr& expr, double cap,
                                     EncodingConstants& constants, const std::string& role) {
    SatEncoding enc;
    if (expr.hi <= cap) {
        enc.output = m.add_var(expr.lo, expr.hi, false, role);
        add_expr_row(m, expr, {{enc.output, -1.0}}, Rel::eq, 0.0);
        return enc;
    }
    if (expr.lo >= cap) {
        enc.output = m.add_var(cap, cap, false, role);
        return enc;
    }
    const double big_m = kBigMSafety * std::max({expr.hi - cap, cap - expr.lo, kBigMFloor});
    constants.entries.push_back({role, big_m});
    enc.output = m.add_var(std::min(expr.lo, cap), cap, false, role);
    enc.z_hi = m.add_var(0.0, 1.0, true, role + " z_cap");

    // y <= expr;  y >= expr - M z;  y >= cap - M(1-z);  y <= cap is a bound
    {
        AffineExpr neg = expr;
        for (auto& c : neg.coef) c = -c;
        neg.constant = -expr.constant;
        add_expr_row(m, neg, {{enc.output, 1.0}}, Rel::le, 0.0);
        add_expr_row(m, neg, {{enc.output, 1.0}, {enc.z_hi, big_m}}, Rel::ge, 0.0);
    }
    m.add_con({enc.output, enc.z_hi}, {1.0, -big_m}, Rel::ge, cap - big_m);
    return enc;
}

namespace {

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};

// Builder state shared across the per-copy construction.
struct Builder {
    const ControllerConfig& config;
    const Scenario& window;
    const MicrogridParams& params;
    std::vector<double> chi;
    RhoBounds box;
    bool saturated = false;
    int copies = 1;
    int np = 0;

    MilpInstance m;
    VariableLayout layout;
    EncodingConstants constants;

    SatEncoding sat(const AffineExpr& e, double lo, double hi, const std::string& role) {
        if (config.sat_encoding == SatEncodingStyle::incremental)
            return encode_saturation_incremental(m, e, lo, hi, constants, role,
                                                 config.simplify_static_saturation);
        return encode_saturation(m, e, lo, hi, constants, role,
                                 config.simplify_static_saturation);
    }

    AffineExpr droop_expr(int u_var, int rho_var, int unit, Interval& iv) const {
        AffineExpr e;
        e.idx = {u_var};
        e.coef = {1.0};
        if (chi[unit] > 0.0) {
            e.idx.push_back(rho_var);
            e.coef.push_back(chi[unit]);
        }
        e.lo = iv.lo = params.u_min[unit] + chi[unit] * box.rho_min;
        e.hi = iv.hi = params.u_max[unit] + chi[unit] * box.rho_max;
        return e;
    }
};

}  // namespace

BuiltProblem build_problem(const ControllerConfig& config, const Scenario& window,
                           const MicrogridParams& params) {
    if (config.horizon < 1) throw ValidationError("build_problem: horizon must be >= 1");
    if (window.horizon < config.horizon)
        throw ValidationError("build_problem: scenario window shorter than the horizon");
    {
        auto issues = validate_params(params);
        if (!issues.empty()) throw ValidationError("build_problem: " + issues.front());
        issues = validate_scenario(window, params);
        if (!issues.empty()) throw ValidationError("build_problem: " + issues.front());
    }

    Builder b{config, window, params, effective_chi(config, params), {}, false, 1, config.horizon,
              {}, {}, {}};
    {
        MicrogridParams eff = params;
        eff.chi = b.chi;
        b.box = rho_bounds(eff);
    }
    b.saturated = variant_is_saturated(config.variant);
    b.copies = variant_is_robust(config.variant) ? 2 : 1;
    b.m.name = variant_name(config.variant);

    const int np = b.np;
    const int t_count = params.num_conventional;
    const int s_count = params.num_storage;
    const int r_count = params.num_renewable;
    const double ts = params.sampling_time;

    // shared decision variables across scenario copies
    b.layout.num_copies = b.copies;
    b.layout.delta.resize(np);
    b.layout.sw.resize(np);
    b.layout.u.resize(np);
    for (int j = 0; j < np; ++j)
        for (int t = 0; t < t_count; ++t)
            b.layout.delta[j].push_back(
                b.m.add_var(0.0, 1.0, true, step_tag("delta[" + std::to_string(t) + "]", 0, j)));
    for (int j = 0; j < np; ++j)
        for (int t = 0; t < t_count; ++t) {
            const int prev = j > 0 ? b.layout.delta[j - 1][t] : -1;
            b.layout.sw[j].push_back(encode_abs_switching(
                b.m, b.layout.delta[j][t], prev, window.delta0[t],
                step_tag("switch[" + std::to_string(t) + "]", 0, j)));
        }
    for (int j = 0; j < np; ++j)
        for (int i = 0; i < params.num_units(); ++i)
            b.layout.u[j].push_back(b.m.add_var(params.u_min[i], params.u_max[i], false,
                                                step_tag("u[" + std::to_string(i) + "]", 0, j)));

    b.layout.rho.resize(b.copies);
    b.layout.p.resize(b.copies);
    b.layout.x.resize(b.copies);

    for (int c = 0; c < b.copies; ++c) {
        const auto& w_rows = c == 0 ? window.w_min : window.w_max;
        b.layout.rho[c].resize(np);
        b.layout.p[c].assign(np, std::vector<int>(params.num_units(), -1));
        b.layout.x[c].assign(np, std::vector<int>(s_count, -1));

        // reachable energy intervals per storage, threaded over steps; the
        // canonical (unsimplified) construction uses the static box
        std::vector<Interval> x_reach(s_count);
        for (int s = 0; s < s_count; ++s) {
            if (config.simplify_static_saturation)
                x_reach[s] = {window.x0[s], window.x0[s]};
            else
                x_reach[s] = {params.x_min[s], params.x_max[s]};
        }

        for (int j = 0; j < np; ++j) {
            const int rho =
                b.m.add_var(b.box.rho_min, b.box.rho_max, false, step_tag("rho", c, j));
            b.layout.rho[c][j] = rho;

            // conventional units
            for (int t = 0; t < t_count; ++t) {
                const int unit = t;
                Interval iv;
                const AffineExpr e = b.droop_expr(b.layout.u[j][unit], rho, unit, iv);
                AffineExpr pin;  // expression the product consumes
                if (b.saturated) {
                    const auto sat = b.sat(e, params.p_min[unit], params.p_max[unit],
                                           step_tag("sat[p_t" + std::to_string(t) + "]", c, j));
                    pin.idx = {sat.output};
                    pin.coef = {1.0};
                    pin.lo = b.m.vars[sat.output].lb;
                    pin.hi = b.m.vars[sat.output].ub;
                } else {
                    pin = e;
                }
                const int p = encode_switch_product(
                    b.m, b.layout.delta[j][t], pin, params.p_min[unit], params.p_max[unit],
                    b.constants, step_tag("p_t" + std::to_string(t), c, j));
                b.layout.p[c][j][unit] = p;
            }

            // storage units
            for (int s = 0; s < s_count; ++s) {
                const int unit = params.storage_begin() + s;
                Interval iv;
                const AffineExpr e = b.droop_expr(b.layout.u[j][unit], rho, unit, iv);
                if (b.saturated) {
                    // static-bound power saturation, then energy clipping
                    const auto psat =
                        b.sat(e, params.p_min[unit], params.p_max[unit],
                              step_tag("sat[ps~" + std::to_string(s) + "]", c, j));
                    AffineExpr xe;  // x_prev - Ts * ptilde
                    xe.constant = 0.0;
                    if (j > 0) {
                        xe.idx = {b.layout.x[c][j - 1][s], psat.output};
                        xe.coef = {1.0, -ts};
                    } else {
                        xe.idx = {psat.output};
                        xe.coef = {-ts};
                        xe.constant = window.x0[s];
                    }
                    const double pt_lo = b.m.vars[psat.output].lb;
                    const double pt_hi = b.m.vars[psat.output].ub;
                    xe.lo = x_reach[s].lo - ts * pt_hi;
                    xe.hi = x_reach[s].hi - ts * pt_lo;
                    const auto xsat = b.sat(xe, params.x_min[s], params.x_max[s],
                                            step_tag("sat[x" + std::to_string(s) + "]", c, j));
                    b.layout.x[c][j][s] = xsat.output;

                    // realized storage power from the energy difference
                    const double ps_lo =
                        std::max(params.p_min[unit],
                                 (x_reach[s].lo - b.m.vars[xsat.output].ub) / ts);
                    const double ps_hi =
                        std::min(params.p_max[unit],
                                 (x_reach[s].hi - b.m.vars[xsat.output].lb) / ts);
                    const int ps = b.m.add_var(ps_lo, ps_hi, false,
                                               step_tag("p_s" + std::to_string(s), c, j));
                    b.layout.p[c][j][unit] = ps;
                    // Ts * p_s = x_prev - x
                    if (j > 0) {
                        b.m.add_con({ps, b.layout.x[c][j - 1][s], xsat.output},
                                    {ts, -1.0, 1.0}, Rel::eq, 0.0);
                    } else {
                        b.m.add_con({ps, xsat.output}, {ts, 1.0}, Rel::eq, window.x0[s]);
                    }
                    if (config.simplify_static_saturation)
                        x_reach[s] = {b.m.vars[xsat.output].lb, b.m.vars[xsat.output].ub};
                } else {
                    // affine storage power with hard power and energy limits
                    const int ps = b.m.add_var(params.p_min[unit], params.p_max[unit], false,
                                               step_tag("p_s" + std::to_string(s), c, j));
                    add_expr_row(b.m, e, {{ps, -1.0}}, Rel::eq, 0.0);
                    b.layout.p[c][j][unit] = ps;
                    const int x = b.m.add_var(params.x_min[s], params.x_max[s], false,
                                              step_tag("x" + std::to_string(s), c, j));
                    b.layout.x[c][j][s] = x;
                    if (j > 0) {
                        b.m.add_con({x, b.layout.x[c][j - 1][s], ps}, {1.0, -1.0, ts}, Rel::eq,
                                    0.0);
                    } else {
                        b.m.add_con({x, ps}, {1.0, ts}, Rel::eq, window.x0[s]);
                    }
                }
            }

            // renewable units: cap at the scenario's available infeed
            for (int r = 0; r < r_count; ++r) {
                const int unit = params.renewable_begin() + r;
                const double w_r = w_rows[j][r];
                Interval iv;
                const AffineExpr e = b.droop_expr(b.layout.u[j][unit], rho, unit, iv);
                if (b.saturated) {
                    const auto sat = b.sat(e, params.p_min[unit], w_r,
                                           step_tag("sat[p_r" + std::to_string(r) + "]", c, j));
                    b.layout.p[c][j][unit] = sat.output;
                } else {
                    const auto enc = encode_min_with_constant(
                        b.m, e, w_r, b.constants, step_tag("p_r" + std::to_string(r), c, j));
                    // hard lower power bound (Problem 1 keeps it explicit)
                    if (b.m.vars[enc.output].lb < params.p_min[unit]) {
                        if (b.m.vars[enc.output].ub < params.p_min[unit])
                            throw ValidationError("build_problem: renewable cap below p_min");
                        b.m.vars[enc.output].lb = params.p_min[unit];
                    }
                    b.layout.p[c][j][unit] = enc.output;
                }
            }

            // power balance with the load part of the disturbance
            {
                std::vector<int> idx;
                std::vector<double> coef;
                for (int i = 0; i < params.num_units(); ++i) {
                    idx.push_back(b.layout.p[c][j][i]);
                    coef.push_back(1.0);
                }
                double load = 0.0;
                for (int d = 0; d < params.num_loads; ++d) load += w_rows[j][r_count + d];
                b.m.add_con(std::move(idx), std::move(coef), Rel::eq, -load);
            }
        }
    }

    // stage cost on the w_min copy
    const auto& cw = params.cost_weights;
    for (int j = 0; j < np; ++j) {
        for (int t = 0; t < t_count; ++t) {
            b.m.objective[b.layout.p[0][j][t]] += cw.fuel[t];
            b.m.objective[b.layout.delta[j][t]] += cw.fixed_on[t];
            b.m.objective[b.layout.sw[j][t]] += cw.switching[t];
        }
        for (int s = 0; s < s_count; ++s)
            b.m.objective[b.layout.p[0][j][params.storage_begin() + s]] += cw.storage[s];
    }

    for (const auto& v : b.m.vars)
        if (v.is_binary) ++b.layout.num_binaries;

    BuiltProblem out{std::move(b.m), std::move(b.layout), std::move(b.constants), b.box,
                     std::move(b.chi), config};
    return out;
}

EncodingConstants derive_big_m(const ControllerConfig& config, const Scenario& window,
                               const MicrogridParams& params) {
    return build_problem(config, window, params).constants;
}

void pin_controls(BuiltProblem& built, const ControlPlan& plan) {
    if (plan.horizon != built.config.horizon)
        throw DimensionError("pin_controls: plan horizon != problem horizon");
    for (int j = 0; j < plan.horizon; ++j) {
        for (std::size_t i = 0; i < built.layout.u[j].size(); ++i) {
            auto& v = built.instance.vars[built.layout.u[j][i]];
            v.lb = v.ub = plan.u[j][i];
        }
        for (std::size_t t = 0; t < built.layout.delta[j].size(); ++t) {
            auto& v = built.instance.vars[built.layout.delta[j][t]];
            v.lb = v.ub = plan.delta[j][t];
        }
    }
}

OpenLoopSolution extract_solution(const MilpSolution& solution, const BuiltProblem& built,
                                  const Scenario& window, const MicrogridParams& params) {
    OpenLoopSolution out;
    out.status = solution.status;
    out.nodes = solution.nodes;
    if (solution.status != SolveStatus::optimal && solution.status != SolveStatus::gap_limit)
        return out;

    const int np = built.config.horizon;
    ControlPlan plan;
    plan.horizon = np;
    plan.u.resize(np);
    plan.delta.resize(np);
    for (int j = 0; j < np; ++j) {
        for (int idx : built.layout.u[j]) {
            const std::size_t i = plan.u[j].size();
            plan.u[j].push_back(
                saturate(params.u_min[i], solution.x[idx], params.u_max[i]));
        }
        for (int idx : built.layout.delta[j])
            plan.delta[j].push_back(static_cast<int>(std::round(solution.x[idx])));
    }
    out.plan = plan;
    out.predicted_cost = solution.objective;

    MicrogridParams model = params;
    model.chi = built.chi;

    for (int c = 0; c < built.layout.num_copies; ++c) {
        const auto& w_rows = c == 0 ? window.w_min : window.w_max;
        std::vector<std::vector<double>> w(w_rows.begin(), w_rows.begin() + np);
        const auto traj = simulate_horizon(w, plan, window.x0, model);

        for (int j = 0; j < np; ++j) {
            for (int i = 0; i < params.num_units(); ++i) {
                const double milp_p = solution.x[built.layout.p[c][j][i]];
                if (std::abs(milp_p - traj[j].p[i]) > kTrajTol) {
                    std::ostringstream oss;
                    oss << "extract_solution: power mismatch (copy " << c << ", step " << j
                        << ", unit " << i << "): milp=" << milp_p << " dispatch=" << traj[j].p[i];
                    throw EncodingDefectError(oss.str());
                }
            }
            for (int s = 0; s < params.num_storage; ++s) {
                const double milp_x = solution.x[built.layout.x[c][j][s]];
                if (std::abs(milp_x - traj[j].x[s]) > kTrajTol) {
                    std::ostringstream oss;
                    oss << "extract_solution: energy mismatch (copy " << c << ", step " << j
                        << ", storage " << s << "): milp=" << milp_x
                        << " dispatch=" << traj[j].x[s];
                    throw EncodingDefectError(oss.str());
                }
            }
            const double milp_rho = solution.x[built.layout.rho[c][j]];
            if (std::abs(milp_rho - traj[j].rho) > kTrajTol) {
                // acceptable only on a flat zero run where the powers agree
                const std::vector<double> x_prev =
                    j > 0 ? traj[j - 1].x : window.x0;
                const double residual = augmented_total_power(plan.u[j], plan.delta[j], x_prev,
                                                              w[j], milp_rho, model);
                if (std::abs(residual) > kTrajTol) {
                    std::ostringstream oss;
                    oss << "extract_solution: rho mismatch off a flat run (copy " << c
                        << ", step " << j << ")";
                    throw EncodingDefectError(oss.str());
                }
            }
            if (!traj[j].feasible)
                throw EncodingDefectError("extract_solution: replay infeasible at step " +
                                          std::to_string(j));
        }
        if (c == 0)
            out.trajectory_min = traj;
        else
            out.trajectory_max = traj;
    }

    const double replay_cost =
        horizon_cost(out.trajectory_min, plan, window.delta0, params.cost_weights);
    if (std::abs(replay_cost - out.predicted_cost) > kTrajTol) {
        std::ostringstream oss;
        oss << "extract_solution: objective " << out.predicted_cost
            << " disagrees with the replayed cost " << replay_cost;
        throw EncodingDefectError(oss.str());
    }
    return out;
}

}  // namespace mgems
