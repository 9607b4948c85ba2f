#include "mgems/scenario_io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace mgems {

namespace {

using nlohmann::json;

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

json params_to_json(const MicrogridParams& p) {
    json j;
    j["num_conventional"] = p.num_conventional;
    j["num_storage"] = p.num_storage;
    j["num_renewable"] = p.num_renewable;
    j["num_loads"] = p.num_loads;
    j["u_min"] = p.u_min;
    j["u_max"] = p.u_max;
    j["p_min"] = p.p_min;
    j["p_max"] = p.p_max;
    j["x_min"] = p.x_min;
    j["x_max"] = p.x_max;
    j["chi"] = p.chi;
    j["sampling_time"] = p.sampling_time;
    j["cost_weights"] = {{"c_t", p.cost_weights.fuel},
                         {"c_on", p.cost_weights.fixed_on},
                         {"c_sw", p.cost_weights.switching},
                         {"c_s", p.cost_weights.storage}};
    j["renewable_cap"] = p.renewable_cap;
    return j;
}

MicrogridParams params_from_json(const json& j) {
    MicrogridParams p;
    p.num_conventional = j.at("num_conventional").get<int>();
    p.num_storage = j.at("num_storage").get<int>();
    p.num_renewable = j.at("num_renewable").get<int>();
    p.num_loads = j.at("num_loads").get<int>();
    p.u_min = j.at("u_min").get<std::vector<double>>();
    p.u_max = j.at("u_max").get<std::vector<double>>();
    p.p_min = j.at("p_min").get<std::vector<double>>();
    p.p_max = j.at("p_max").get<std::vector<double>>();
    p.x_min = j.at("x_min").get<std::vector<double>>();
    p.x_max = j.at("x_max").get<std::vector<double>>();
    p.chi = j.at("chi").get<std::vector<double>>();
    p.sampling_time = j.at("sampling_time").get<double>();
    const auto& cw = j.at("cost_weights");
    p.cost_weights.fuel = cw.at("c_t").get<std::vector<double>>();
    p.cost_weights.fixed_on = cw.at("c_on").get<std::vector<double>>();
    p.cost_weights.switching = cw.at("c_sw").get<std::vector<double>>();
    p.cost_weights.storage = cw.at("c_s").get<std::vector<double>>();
    if (j.contains("renewable_cap"))
        p.renewable_cap = j.at("renewable_cap").get<std::vector<double>>();
    return p;
}

}  // namespace

std::pair<MicrogridParams, Scenario> load_scenario_json(std::istream& in) {
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ValidationError(std::string("scenario JSON parse error: ") + e.what());
    }
    MicrogridParams params;
    Scenario sc;
    try {
        params = params_from_json(j.at("params"));
        sc.horizon = j.at("horizon").get<int>();
        sc.w_min = j.at("w_min").get<std::vector<std::vector<double>>>();
        sc.w_max = j.at("w_max").get<std::vector<std::vector<double>>>();
        sc.x0 = j.at("x0").get<std::vector<double>>();
        if (j.contains("delta0"))
            sc.delta0 = j.at("delta0").get<std::vector<int>>();
        else
            sc.delta0.assign(params.num_conventional, 0);
    } catch (const json::exception& e) {
        throw ValidationError(std::string("scenario JSON schema error: ") + e.what());
    }
    if (params.renewable_cap.empty() && params.num_renewable > 0) {
        // default surrogate cap: per-unit maximum available infeed
        params.renewable_cap.assign(params.num_renewable, 0.0);
        for (const auto& row : sc.w_max)
            for (int r = 0; r < params.num_renewable; ++r)
                params.renewable_cap[r] = std::max(params.renewable_cap[r], row[r]);
        for (int r = 0; r < params.num_renewable; ++r)
            if (params.renewable_cap[r] <= 0.0) params.renewable_cap[r] = 1.0;
    }
    {
        auto issues = validate_params(params);
        if (!issues.empty()) throw ValidationError("invalid params: " + issues.front());
        issues = validate_scenario(sc, params);
        if (!issues.empty()) throw ValidationError("invalid scenario: " + issues.front());
    }
    return {params, sc};
}

std::pair<MicrogridParams, Scenario> load_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open scenario file: " + path);
    return load_scenario_json(in);
}

void save_scenario_json(const MicrogridParams& params, const Scenario& scenario,
                        std::ostream& out) {
    json j;
    j["params"] = params_to_json(params);
    j["horizon"] = scenario.horizon;
    j["w_min"] = scenario.w_min;
    j["w_max"] = scenario.w_max;
    j["x0"] = scenario.x0;
    j["delta0"] = scenario.delta0;
    out << j.dump(2) << "\n";
}

void save_scenario_file(const MicrogridParams& params, const Scenario& scenario,
                        const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot open output file: " + path);
    save_scenario_json(params, scenario, out);
}

void write_trajectory_csv(const SimRecord& record, const MicrogridParams& params,
                          std::ostream& out) {
    out << "step";
    for (int s = 0; s < params.num_storage; ++s) out << ",x" << s;
    for (int i = 0; i < params.num_units(); ++i) out << ",p" << i;
    out << ",rho";
    for (int t = 0; t < params.num_conventional; ++t) out << ",delta" << t;
    out << ",stage_cost,feasible_flag\n";
    for (int k = 0; k < record.steps; ++k) {
        out << k;
        for (int s = 0; s < params.num_storage; ++s) out << "," << num(record.outcomes[k].x[s]);
        for (int i = 0; i < params.num_units(); ++i) out << "," << num(record.outcomes[k].p[i]);
        out << "," << num(record.outcomes[k].rho);
        for (int t = 0; t < params.num_conventional; ++t)
            out << "," << record.applied_delta[k][t];
        out << "," << num(record.stage_costs[k]);
        out << "," << (record.outcomes[k].feasible ? 1 : 0) << "\n";
    }
}

void write_metrics_csv(const std::vector<ControllerComparison>& rows, std::ostream& out) {
    out << "controller,per_sample_cost,per_sample_res_energy,per_sample_conventional_energy,"
           "switching_count,status\n";
    for (const auto& r : rows) {
        out << r.name;
        if (r.failed) {
            out << ",,,,," << "error\n";
            continue;
        }
        out << "," << num(r.metrics.per_sample_cost) << "," << num(r.metrics.per_sample_res_energy)
            << "," << num(r.metrics.per_sample_conventional_energy) << ","
            << r.metrics.switching_count << ",ok\n";
    }
}

void write_openloop_csv(const ComparisonResult& result, std::ostream& out) {
    out << "ic_step";
    for (const auto& c : result.controllers) out << "," << c.name;
    out << "\n";
    for (std::size_t i = 0; i < result.ic_steps.size(); ++i) {
        out << result.ic_steps[i];
        for (const auto& c : result.controllers) {
            out << ",";
            if (!c.failed && i < c.predicted_costs.size()) out << num(c.predicted_costs[i]);
        }
        out << "\n";
    }
    // per-sample averages of the open-loop predictions
    using Getter = double (*)(const ControllerComparison&);
    const std::pair<const char*, Getter> rows[] = {
        {"avg_cost", [](const ControllerComparison& c) { return c.avg_predicted_cost; }},
        {"avg_res_energy",
         [](const ControllerComparison& c) { return c.avg_predicted_res_energy; }},
        {"avg_conventional_energy",
         [](const ControllerComparison& c) { return c.avg_predicted_conventional_energy; }},
    };
    for (const auto& [label, getter] : rows) {
        out << label;
        for (const auto& c : result.controllers) {
            out << ",";
            if (!c.failed) out << num(getter(c));
        }
        out << "\n";
    }
}

std::vector<std::vector<double>> read_trace_csv(std::istream& in, int row_len) {
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        bool numeric = true;
        while (std::getline(ss, cell, ',')) {
            try {
                row.push_back(std::stod(cell));
            } catch (...) {
                numeric = false;
                break;
            }
        }
        if (!numeric) continue;  // header line
        if (static_cast<int>(row.size()) != row_len)
            throw ValidationError("trace row has wrong length");
        rows.push_back(std::move(row));
    }
    return rows;
}

void write_solution_json(const OpenLoopSolution& solution, const MicrogridParams& params,
                         std::ostream& out) {
    (void)params;
    json j;
    j["status"] = to_string(solution.status);
    j["predicted_cost"] = solution.predicted_cost;
    j["nodes"] = solution.nodes;
    j["u"] = solution.plan.u;
    j["delta"] = solution.plan.delta;
    auto traj = [](const std::vector<StepOutcome>& t) {
        json arr = json::array();
        for (const auto& s : t) {
            json e;
            e["p"] = s.p;
            e["x"] = s.x;
            e["rho"] = s.rho;
            e["feasible"] = s.feasible;
            arr.push_back(e);
        }
        return arr;
    };
    j["trajectory_w_min"] = traj(solution.trajectory_min);
    j["trajectory_w_max"] = traj(solution.trajectory_max);
    out << j.dump(2) << "\n";
}

}  // namespace mgems
