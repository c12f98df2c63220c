#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "lanesafe/simulator.hpp"

namespace lanesafe {

/// Strict JSON scenario parsing: unknown fields are rejected so typos in
/// safety-critical parameters cannot pass silently. Throws ConfigError.
ScenarioConfig parse_scenario(const std::string& json_text);
ScenarioConfig load_scenario(const std::filesystem::path& path);
std::string scenario_to_json(const ScenarioConfig& scenario);

/// Trajectory persistence: one JSON object per line. The first line carries
/// the scenario meta data (so plots can be regenerated from the log alone),
/// then one record per vehicle per control step, then the final states.
std::string trajectory_to_jsonl(const TrajectoryLog& log);
void write_trajectory_jsonl(const TrajectoryLog& log, const std::filesystem::path& path);
TrajectoryLog read_trajectory_jsonl(const std::filesystem::path& path);

/// Summary CSV: time plus per-vehicle x / y / v / min-barrier columns.
void write_summary_csv(const TrajectoryLog& log, const std::filesystem::path& path);

struct RunReport {
    std::string scenario;
    bool invariance_pass = false;
    double invariance_tol = 0.0;
    double min_barrier_value = 0.0;
    std::string min_barrier;
    double min_barrier_time = 0.0;
    int min_barrier_vehicle = 0;
    std::vector<double> final_speed_error;    // |v - v_ref| per vehicle
    std::vector<double> final_lateral_error;  // |y - y_ref| per vehicle
    double mean_control_ms = 0.0;
    double max_control_ms = 0.0;
    int fallback_count = 0;
    int non_optimal_count = 0;
};

RunReport make_run_report(const ScenarioConfig& scenario, const TrajectoryLog& log,
                          const RunStats& stats, const InvarianceReport& invariance);
std::string report_to_json(const RunReport& report);
void write_run_report(const RunReport& report, const std::filesystem::path& path);

}  // namespace lanesafe
