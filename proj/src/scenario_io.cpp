#include "lanesafe/scenario_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace lanesafe {

namespace {

using Json = nlohmann::ordered_json;

void reject_unknown(const Json& obj, const std::vector<std::string>& allowed,
                    const std::string& context) {
    for (const auto& [key, _] : obj.items()) {
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
            throw ConfigError("unknown field \"" + key + "\" in " + context);
        }
    }
}

const Json& field(const Json& obj, const std::string& key, const std::string& context) {
    auto it = obj.find(key);
    if (it == obj.end()) {
        throw ConfigError("missing field \"" + key + "\" in " + context);
    }
    return *it;
}

double number(const Json& obj, const std::string& key, const std::string& context) {
    const Json& v = field(obj, key, context);
    if (!v.is_number()) {
        throw ConfigError("field \"" + key + "\" in " + context + " must be a number");
    }
    return v.get<double>();
}

int integer(const Json& obj, const std::string& key, const std::string& context) {
    const Json& v = field(obj, key, context);
    if (!v.is_number_integer()) {
        throw ConfigError("field \"" + key + "\" in " + context + " must be an integer");
    }
    return v.get<int>();
}

VehicleState parse_state(const Json& obj, const std::string& context) {
    if (!obj.is_object()) throw ConfigError(context + " must be an object");
    reject_unknown(obj, {"x", "y", "psi", "v", "omega"}, context);
    VehicleState s;
    s.x = number(obj, "x", context);
    s.y = number(obj, "y", context);
    s.psi = number(obj, "psi", context);
    s.v_applied = number(obj, "v", context);
    s.omega_applied = obj.contains("omega") ? number(obj, "omega", context) : 0.0;
    return s;
}

SolveStatus status_from_name(const std::string& name) {
    if (name == "optimal") return SolveStatus::Optimal;
    if (name == "infeasible") return SolveStatus::Infeasible;
    return SolveStatus::MaxIterations;
}

}  // namespace

ScenarioConfig parse_scenario(const std::string& json_text) {
    Json root;
    try {
        root = Json::parse(json_text);
    } catch (const Json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!root.is_object()) throw ConfigError("config root must be an object");
    reject_unknown(root,
                   {"name", "geometry", "sensor_range", "control_period", "dt", "horizon",
                    "controller", "vehicles"},
                   "config");

    ScenarioConfig scenario;
    scenario.name = field(root, "name", "config").get<std::string>();

    const Json& geo = field(root, "geometry", "config");
    reject_unknown(geo, {"lane_width", "lane_count", "epsilon"}, "geometry");
    scenario.geometry.lane_width = number(geo, "lane_width", "geometry");
    scenario.geometry.lane_count = integer(geo, "lane_count", "geometry");
    scenario.geometry.epsilon = number(geo, "epsilon", "geometry");

    scenario.sensor_range = number(root, "sensor_range", "config");
    scenario.control_period = number(root, "control_period", "config");
    scenario.dt = number(root, "dt", "config");
    scenario.horizon = number(root, "horizon", "config");

    const Json& ctrl = field(root, "controller", "config");
    reject_unknown(ctrl, {"tau_d", "lambda", "sigma", "gains", "weights", "bounds"}, "controller");
    ControllerParams& params = scenario.controller;
    params.coord.tau_d = number(ctrl, "tau_d", "controller");

    const Json& lam = field(ctrl, "lambda", "controller");
    reject_unknown(lam, {"a1", "a2", "a3", "beta1", "beta2", "beta3"}, "controller.lambda");
    params.coord.lambda.a1 = number(lam, "a1", "controller.lambda");
    params.coord.lambda.a2 = number(lam, "a2", "controller.lambda");
    params.coord.lambda.a3 = number(lam, "a3", "controller.lambda");
    params.coord.lambda.beta1 = number(lam, "beta1", "controller.lambda");
    params.coord.lambda.beta2 = number(lam, "beta2", "controller.lambda");
    params.coord.lambda.beta3 = number(lam, "beta3", "controller.lambda");

    const Json& sig = field(ctrl, "sigma", "controller");
    reject_unknown(sig, {"s1", "s2", "s3", "s4"}, "controller.sigma");
    params.coord.sigma.s1 = number(sig, "s1", "controller.sigma");
    params.coord.sigma.s2 = number(sig, "s2", "controller.sigma");
    params.coord.sigma.s3 = number(sig, "s3", "controller.sigma");
    params.coord.sigma.s4 = number(sig, "s4", "controller.sigma");

    const Json& gains = field(ctrl, "gains", "controller");
    reject_unknown(gains, {"k1", "k2", "m1", "alpha_c"}, "controller.gains");
    params.gains.k1 = number(gains, "k1", "controller.gains");
    params.gains.k2 = number(gains, "k2", "controller.gains");
    params.gains.m1 = number(gains, "m1", "controller.gains");
    params.gains.c = number(gains, "alpha_c", "controller.gains");

    const Json& weights = field(ctrl, "weights", "controller");
    reject_unknown(weights, {"h_v", "h_omega", "p_v", "p_omega"}, "controller.weights");
    params.weights.h_v = number(weights, "h_v", "controller.weights");
    params.weights.h_omega = number(weights, "h_omega", "controller.weights");
    params.weights.p_v = number(weights, "p_v", "controller.weights");
    params.weights.p_omega = number(weights, "p_omega", "controller.weights");

    const Json& bounds = field(ctrl, "bounds", "controller");
    reject_unknown(bounds, {"v_min", "v_max", "omega_min", "omega_max"}, "controller.bounds");
    params.bounds.v_min = number(bounds, "v_min", "controller.bounds");
    params.bounds.v_max = number(bounds, "v_max", "controller.bounds");
    params.bounds.omega_min = number(bounds, "omega_min", "controller.bounds");
    params.bounds.omega_max = number(bounds, "omega_max", "controller.bounds");

    const Json& vehicles = field(root, "vehicles", "config");
    if (!vehicles.is_array() || vehicles.empty()) {
        throw ConfigError("config must list at least one vehicle");
    }
    for (std::size_t i = 0; i < vehicles.size(); ++i) {
        const std::string context = "vehicles[" + std::to_string(i) + "]";
        const Json& vj = vehicles[i];
        reject_unknown(vj, {"initial", "v_ref", "lane_schedule"}, context);
        VehicleSpec spec;
        spec.initial = parse_state(field(vj, "initial", context), context + ".initial");
        spec.v_ref = number(vj, "v_ref", context);
        const Json& sched = field(vj, "lane_schedule", context);
        if (!sched.is_array() || sched.empty()) {
            throw ConfigError(context + ".lane_schedule must be a non-empty array");
        }
        for (const Json& entry : sched) {
            reject_unknown(entry, {"time", "lane"}, context + ".lane_schedule");
            spec.schedule.entries.emplace_back(number(entry, "time", context),
                                               integer(entry, "lane", context));
        }
        scenario.vehicles.push_back(std::move(spec));
    }
    return scenario;
}

ScenarioConfig load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file " + path.string());
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_scenario(buffer.str());
}

std::string scenario_to_json(const ScenarioConfig& s) {
    Json root;
    root["name"] = s.name;
    root["geometry"] = {{"lane_width", s.geometry.lane_width},
                        {"lane_count", s.geometry.lane_count},
                        {"epsilon", s.geometry.epsilon}};
    root["sensor_range"] = s.sensor_range;
    root["control_period"] = s.control_period;
    root["dt"] = s.dt;
    root["horizon"] = s.horizon;
    const ControllerParams& p = s.controller;
    root["controller"] = {
        {"tau_d", p.coord.tau_d},
        {"lambda",
         {{"a1", p.coord.lambda.a1},
          {"a2", p.coord.lambda.a2},
          {"a3", p.coord.lambda.a3},
          {"beta1", p.coord.lambda.beta1},
          {"beta2", p.coord.lambda.beta2},
          {"beta3", p.coord.lambda.beta3}}},
        {"sigma",
         {{"s1", p.coord.sigma.s1},
          {"s2", p.coord.sigma.s2},
          {"s3", p.coord.sigma.s3},
          {"s4", p.coord.sigma.s4}}},
        {"gains",
         {{"k1", p.gains.k1}, {"k2", p.gains.k2}, {"m1", p.gains.m1}, {"alpha_c", p.gains.c}}},
        {"weights",
         {{"h_v", p.weights.h_v},
          {"h_omega", p.weights.h_omega},
          {"p_v", p.weights.p_v},
          {"p_omega", p.weights.p_omega}}},
        {"bounds",
         {{"v_min", p.bounds.v_min},
          {"v_max", p.bounds.v_max},
          {"omega_min", p.bounds.omega_min},
          {"omega_max", p.bounds.omega_max}}}};
    root["vehicles"] = Json::array();
    for (const VehicleSpec& spec : s.vehicles) {
        Json vj;
        vj["initial"] = {{"x", spec.initial.x},
                         {"y", spec.initial.y},
                         {"psi", spec.initial.psi},
                         {"v", spec.initial.v_applied},
                         {"omega", spec.initial.omega_applied}};
        vj["v_ref"] = spec.v_ref;
        vj["lane_schedule"] = Json::array();
        for (const auto& [time, lane] : spec.schedule.entries) {
            vj["lane_schedule"].push_back({{"time", time}, {"lane", lane}});
        }
        root["vehicles"].push_back(std::move(vj));
    }
    return root.dump(2) + "\n";
}

std::string trajectory_to_jsonl(const TrajectoryLog& log) {
    std::ostringstream out;
    Json meta;
    meta["meta"] = {{"scenario", log.scenario_name},
                    {"lane_width", log.geometry.lane_width},
                    {"lane_count", log.geometry.lane_count},
                    {"epsilon", log.geometry.epsilon},
                    {"control_period", log.control_period},
                    {"horizon", log.horizon},
                    {"vehicles", log.vehicle_count}};
    out << meta.dump() << "\n";

    for (const StepRecord& r : log.records) {
        Json rec;
        rec["t"] = r.t;
        rec["vehicle"] = r.vehicle;
        rec["x"] = r.state.x;
        rec["y"] = r.state.y;
        rec["psi"] = r.state.psi;
        rec["v"] = r.applied.v;
        rec["omega"] = r.applied.omega;
        rec["b"] = r.barriers;
        rec["V"] = r.lyapunov;
        rec["eta0"] = r.eta0;
        rec["delta_v"] = r.delta_v;
        rec["delta_omega"] = r.delta_omega;
        rec["v_ref"] = r.v_ref;
        rec["y_ref"] = r.y_ref;
        rec["status"] = status_name(r.status);
        rec["fallback"] = r.fallback;
        rec["active_set"] = r.active_set;
        out << rec.dump() << "\n";
    }

    Json fin;
    fin["final"] = Json::object();
    fin["final"]["t"] = log.final_time;
    fin["final"]["states"] = Json::array();
    for (const VehicleState& s : log.final_states) {
        fin["final"]["states"].push_back({{"x", s.x},
                                          {"y", s.y},
                                          {"psi", s.psi},
                                          {"v", s.v_applied},
                                          {"omega", s.omega_applied}});
    }
    out << fin.dump() << "\n";
    return out.str();
}

void write_trajectory_jsonl(const TrajectoryLog& log, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) {
        throw ConfigError("cannot write trajectory log to " + path.string());
    }
    out << trajectory_to_jsonl(log);
}

TrajectoryLog read_trajectory_jsonl(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open trajectory log " + path.string());
    }
    TrajectoryLog log;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        Json obj;
        try {
            obj = Json::parse(line);
        } catch (const Json::parse_error& e) {
            throw ConfigError(std::string("trajectory log line is not valid JSON: ") + e.what());
        }
        if (obj.contains("meta")) {
            const Json& m = obj["meta"];
            log.scenario_name = m.value("scenario", "");
            log.geometry.lane_width = m.value("lane_width", 4.0);
            log.geometry.lane_count = m.value("lane_count", 2);
            log.geometry.epsilon = m.value("epsilon", 0.1);
            log.control_period = m.value("control_period", 0.1);
            log.horizon = m.value("horizon", 0.0);
            log.vehicle_count = m.value("vehicles", 0);
        } else if (obj.contains("final")) {
            const Json& f = obj["final"];
            log.final_time = f.value("t", 0.0);
            for (const Json& sj : f["states"]) {
                VehicleState s;
                s.x = sj.value("x", 0.0);
                s.y = sj.value("y", 0.0);
                s.psi = sj.value("psi", 0.0);
                s.v_applied = sj.value("v", 0.0);
                s.omega_applied = sj.value("omega", 0.0);
                log.final_states.push_back(s);
            }
        } else {
            StepRecord r;
            r.t = obj.value("t", 0.0);
            r.vehicle = obj.value("vehicle", 0);
            r.state.x = obj.value("x", 0.0);
            r.state.y = obj.value("y", 0.0);
            r.state.psi = obj.value("psi", 0.0);
            r.applied.v = obj.value("v", 0.0);
            r.applied.omega = obj.value("omega", 0.0);
            r.state.v_applied = r.applied.v;
            r.state.omega_applied = r.applied.omega;
            const auto& b = obj["b"];
            for (std::size_t k = 0; k < 7 && k < b.size(); ++k) {
                r.barriers[k] = b[k].get<double>();
            }
            r.lyapunov = obj.value("V", 0.0);
            r.eta0 = obj.value("eta0", 0.0);
            r.delta_v = obj.value("delta_v", 0.0);
            r.delta_omega = obj.value("delta_omega", 0.0);
            r.v_ref = obj.value("v_ref", 0.0);
            r.y_ref = obj.value("y_ref", 0.0);
            r.status = status_from_name(obj.value("status", "optimal"));
            r.fallback = obj.value("fallback", false);
            if (obj.contains("active_set")) {
                for (const Json& a : obj["active_set"]) {
                    r.active_set.push_back(a.get<int>());
                }
            }
            log.records.push_back(std::move(r));
        }
    }
    return log;
}

void write_summary_csv(const TrajectoryLog& log, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) {
        throw ConfigError("cannot write summary CSV to " + path.string());
    }
    out << "t";
    for (int v = 0; v < log.vehicle_count; ++v) {
        out << ",veh" << v << "_x,veh" << v << "_y,veh" << v << "_v,veh" << v << "_minb";
    }
    out << "\n";
    out.precision(12);
    for (std::size_t i = 0; i < log.records.size();
         i += static_cast<std::size_t>(log.vehicle_count)) {
        out << log.records[i].t;
        for (int v = 0; v < log.vehicle_count; ++v) {
            const StepRecord& r = log.records[i + static_cast<std::size_t>(v)];
            const double minb = *std::min_element(r.barriers.begin(), r.barriers.end());
            out << "," << r.state.x << "," << r.state.y << "," << r.applied.v << "," << minb;
        }
        out << "\n";
    }
}

RunReport make_run_report(const ScenarioConfig& scenario, const TrajectoryLog& log,
                          const RunStats& stats, const InvarianceReport& invariance) {
    RunReport report;
    report.scenario = scenario.name;
    report.invariance_pass = invariance.pass;
    report.invariance_tol = invariance.tolerance;
    report.min_barrier_value = invariance.min_value;
    report.min_barrier = barrier_name(invariance.min_barrier);
    report.min_barrier_time = invariance.min_time;
    report.min_barrier_vehicle = invariance.min_vehicle;
    for (std::size_t i = 0; i < scenario.vehicles.size(); ++i) {
        const VehicleSpec& spec = scenario.vehicles[i];
        const VehicleState& fin = log.final_states[i];
        report.final_speed_error.push_back(std::abs(fin.v_applied - spec.v_ref));
        const double y_ref =
            spec.schedule.lane_at(log.final_time) * scenario.geometry.lane_width;
        report.final_lateral_error.push_back(std::abs(fin.y - y_ref));
    }
    report.mean_control_ms = stats.mean_control_seconds * 1e3;
    report.max_control_ms = stats.max_control_seconds * 1e3;
    report.fallback_count = stats.fallback_count;
    report.non_optimal_count = stats.non_optimal_count;
    return report;
}

std::string report_to_json(const RunReport& report) {
    Json j;
    j["scenario"] = report.scenario;
    j["invariance"] = {{"pass", report.invariance_pass},
                       {"tolerance", report.invariance_tol},
                       {"min_value", report.min_barrier_value},
                       {"barrier", report.min_barrier},
                       {"time", report.min_barrier_time},
                       {"vehicle", report.min_barrier_vehicle}};
    j["final_speed_error"] = report.final_speed_error;
    j["final_lateral_error"] = report.final_lateral_error;
    j["controller"] = {{"mean_ms", report.mean_control_ms},
                       {"max_ms", report.max_control_ms},
                       {"fallbacks", report.fallback_count},
                       {"non_optimal", report.non_optimal_count}};
    return j.dump(2) + "\n";
}

void write_run_report(const RunReport& report, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) {
        throw ConfigError("cannot write run report to " + path.string());
    }
    out << report_to_json(report);
}

}  // namespace lanesafe
