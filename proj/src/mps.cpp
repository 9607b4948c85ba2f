#include "mgems/mps.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <vector>

namespace mgems {

namespace {

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string col_name(int j) { return "x" + std::to_string(j); }
std::string row_name(int i) { return "c" + std::to_string(i); }

std::vector<std::string> tokens(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream iss(line);
    std::string t;
    while (iss >> t) out.push_back(t);
    return out;
}

}  // namespace

void write_mps(const MilpInstance& instance, std::ostream& out) {
    const int n = static_cast<int>(instance.vars.size());
    const int m = static_cast<int>(instance.cons.size());

    out << "* " << instance.name << "\n";
    for (int j = 0; j < n; ++j) {
        if (!instance.vars[j].name.empty())
            out << "* " << col_name(j) << " : " << instance.vars[j].name << "\n";
    }
    out << "NAME " << (instance.name.empty() ? "mgems" : instance.name) << "\n";

    out << "ROWS\n";
    out << " N COST\n";
    for (int i = 0; i < m; ++i) {
        const char rel = instance.cons[i].rel == Rel::le   ? 'L'
                         : instance.cons[i].rel == Rel::ge ? 'G'
                                                           : 'E';
        out << " " << rel << " " << row_name(i) << "\n";
    }

    // column-wise entries
    std::vector<std::vector<std::pair<int, double>>> cols(n);
    for (int i = 0; i < m; ++i) {
        const auto& c = instance.cons[i];
        for (std::size_t k = 0; k < c.idx.size(); ++k)
            cols[c.idx[k]].push_back({i, c.coef[k]});
    }

    out << "COLUMNS\n";
    bool in_int = false;
    int marker = 0;
    for (int j = 0; j < n; ++j) {
        if (instance.vars[j].is_binary != in_int) {
            in_int = instance.vars[j].is_binary;
            out << "    M" << marker++ << " 'MARKER' '" << (in_int ? "INTORG" : "INTEND")
                << "'\n";
        }
        const std::string name = col_name(j);
        if (instance.objective[j] != 0.0)
            out << "    " << name << " COST " << num(instance.objective[j]) << "\n";
        for (const auto& [row, coef] : cols[j])
            out << "    " << name << " " << row_name(row) << " " << num(coef) << "\n";
        if (instance.objective[j] == 0.0 && cols[j].empty())
            out << "    " << name << " COST 0\n";  // keep the column visible
    }
    if (in_int) out << "    M" << marker++ << " 'MARKER' 'INTEND'\n";

    out << "RHS\n";
    for (int i = 0; i < m; ++i) {
        if (instance.cons[i].rhs != 0.0)
            out << "    RHS " << row_name(i) << " " << num(instance.cons[i].rhs) << "\n";
    }
    if (instance.objective_constant != 0.0)
        out << "    RHS COST " << num(-instance.objective_constant) << "\n";

    out << "BOUNDS\n";
    for (int j = 0; j < n; ++j) {
        const auto& v = instance.vars[j];
        if (v.lb == v.ub) {
            out << " FX BND " << col_name(j) << " " << num(v.lb) << "\n";
        } else if (v.is_binary && v.lb == 0.0 && v.ub == 1.0) {
            out << " BV BND " << col_name(j) << "\n";
        } else {
            if (std::isfinite(v.lb))
                out << " LO BND " << col_name(j) << " " << num(v.lb) << "\n";
            else
                out << " MI BND " << col_name(j) << "\n";
            if (std::isfinite(v.ub)) out << " UP BND " << col_name(j) << " " << num(v.ub) << "\n";
        }
    }
    out << "ENDATA\n";
}

std::string to_mps(const MilpInstance& instance) {
    std::ostringstream oss;
    write_mps(instance, oss);
    return oss.str();
}

MilpInstance read_mps(std::istream& in) {
    MilpInstance m;
    std::map<std::string, int> rows;    // constraint rows
    std::map<std::string, int> colidx;  // column name -> variable index
    std::string obj_row;
    enum Section { none, rows_s, cols_s, rhs_s, bounds_s, done };
    Section sec = none;
    bool in_int = false;

    auto ensure_col = [&](const std::string& name) {
        auto it = colidx.find(name);
        if (it != colidx.end()) return it->second;
        const int j = m.add_var(0.0, std::numeric_limits<double>::infinity(), in_int, name);
        colidx.emplace(name, j);
        return j;
    };

    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '*') continue;
        const auto tok = tokens(line);
        if (tok.empty()) continue;

        if (line[0] != ' ' && line[0] != '\t') {
            const std::string& kw = tok[0];
            if (kw == "NAME") {
                m.name = tok.size() > 1 ? tok[1] : "milp";
            } else if (kw == "ROWS") {
                sec = rows_s;
            } else if (kw == "COLUMNS") {
                sec = cols_s;
            } else if (kw == "RHS") {
                sec = rhs_s;
            } else if (kw == "RANGES") {
                throw ValidationError("read_mps: RANGES sections are not supported");
            } else if (kw == "BOUNDS") {
                sec = bounds_s;
            } else if (kw == "ENDATA") {
                sec = done;
                break;
            } else {
                throw ValidationError("read_mps: unknown section '" + kw + "'");
            }
            continue;
        }

        switch (sec) {
            case rows_s: {
                if (tok.size() != 2) throw ValidationError("read_mps: malformed ROWS line");
                if (tok[0] == "N") {
                    if (obj_row.empty()) obj_row = tok[1];
                } else {
                    Rel rel = tok[0] == "L" ? Rel::le : tok[0] == "G" ? Rel::ge : Rel::eq;
                    if (tok[0] != "L" && tok[0] != "G" && tok[0] != "E")
                        throw ValidationError("read_mps: unknown row type " + tok[0]);
                    rows.emplace(tok[1], static_cast<int>(m.cons.size()));
                    m.add_con({}, {}, rel, 0.0);
                }
                break;
            }
            case cols_s: {
                if (tok.size() >= 3 && tok[1] == "'MARKER'") {
                    in_int = tok[2] == "'INTORG'";
                    break;
                }
                if (tok.size() < 3 || tok.size() % 2 == 0)
                    throw ValidationError("read_mps: malformed COLUMNS line");
                const int j = ensure_col(tok[0]);
                for (std::size_t k = 1; k + 1 < tok.size(); k += 2) {
                    const double coef = std::stod(tok[k + 1]);
                    if (tok[k] == obj_row) {
                        m.objective[j] += coef;
                    } else {
                        auto it = rows.find(tok[k]);
                        if (it == rows.end())
                            throw ValidationError("read_mps: unknown row " + tok[k]);
                        m.cons[it->second].idx.push_back(j);
                        m.cons[it->second].coef.push_back(coef);
                    }
                }
                break;
            }
            case rhs_s: {
                for (std::size_t k = 1; k + 1 < tok.size(); k += 2) {
                    if (tok[k] == obj_row) {
                        m.objective_constant = -std::stod(tok[k + 1]);
                        continue;
                    }
                    auto it = rows.find(tok[k]);
                    if (it == rows.end()) throw ValidationError("read_mps: unknown RHS row");
                    m.cons[it->second].rhs = std::stod(tok[k + 1]);
                }
                break;
            }
            case bounds_s: {
                if (tok.size() < 3) throw ValidationError("read_mps: malformed BOUNDS line");
                const std::string& kind = tok[0];
                const int j = ensure_col(tok[2]);
                auto& v = m.vars[j];
                if (kind == "UP") {
                    v.ub = std::stod(tok[3]);
                } else if (kind == "LO") {
                    v.lb = std::stod(tok[3]);
                } else if (kind == "FX") {
                    v.lb = v.ub = std::stod(tok[3]);
                } else if (kind == "BV") {
                    v.is_binary = true;
                    v.lb = 0.0;
                    v.ub = 1.0;
                } else if (kind == "MI") {
                    v.lb = -std::numeric_limits<double>::infinity();
                } else if (kind == "PL") {
                    v.ub = std::numeric_limits<double>::infinity();
                } else {
                    throw ValidationError("read_mps: unsupported bound type " + kind);
                }
                break;
            }
            default:
                throw ValidationError("read_mps: data line outside of a section");
        }
    }
    if (obj_row.empty()) throw ValidationError("read_mps: missing objective row");
    return m;
}

void write_solution(const MilpSolution& solution, const MilpInstance& instance,
                    std::ostream& out) {
    out << "status " << to_string(solution.status) << "\n";
    out << "objective " << num(solution.objective) << "\n";
    out << "bound " << num(solution.best_bound) << "\n";
    out << "nodes " << solution.nodes << "\n";
    for (std::size_t j = 0; j < solution.x.size(); ++j)
        out << col_name(static_cast<int>(j)) << " " << num(solution.x[j]) << "\n";
    (void)instance;
}

MilpSolution read_solution(std::istream& in, const MilpInstance& instance) {
    MilpSolution sol;
    sol.x.assign(instance.vars.size(), 0.0);
    std::string line;
    bool have_status = false;
    while (std::getline(in, line)) {
        const auto tok = tokens(line);
        if (tok.size() < 2) continue;
        if (tok[0] == "status") {
            have_status = true;
            if (tok[1] == "optimal")
                sol.status = SolveStatus::optimal;
            else if (tok[1] == "infeasible")
                sol.status = SolveStatus::infeasible;
            else if (tok[1] == "unbounded")
                sol.status = SolveStatus::unbounded;
            else if (tok[1] == "gap_limit")
                sol.status = SolveStatus::gap_limit;
            else if (tok[1] == "resource_limit")
                sol.status = SolveStatus::resource_limit;
            else
                sol.status = SolveStatus::numerical_error;
        } else if (tok[0] == "objective") {
            sol.objective = std::stod(tok[1]);
        } else if (tok[0] == "bound") {
            sol.best_bound = std::stod(tok[1]);
        } else if (tok[0] == "nodes") {
            sol.nodes = std::stol(tok[1]);
        } else if (tok[0][0] == 'x') {
            const int j = std::stoi(tok[0].substr(1));
            if (j < 0 || j >= static_cast<int>(sol.x.size()))
                throw ValidationError("read_solution: column out of range: " + tok[0]);
            sol.x[j] = std::stod(tok[1]);
        }
    }
    if (!have_status) throw ValidationError("read_solution: missing status line");
    return sol;
}

}  // namespace mgems
