#pragma once

#include <string>
#include <utility>
#include <vector>

#include "lanesafe/qp.hpp"

namespace lanesafe {

/// Piecewise-constant lane reference: the lane commanded at time t is the
/// entry with the largest time <= t. The first entry must start at 0.
struct LaneSchedule {
    std::vector<std::pair<double, int>> entries;

    int lane_at(double t) const;
};

struct VehicleSpec {
    VehicleState initial;
    double v_ref = 0.0;
    LaneSchedule schedule;
};

struct ScenarioConfig {
    std::string name;
    LaneGeometry geometry;
    double sensor_range = 100.0;
    double control_period = 0.1;  // [s]
    double dt = 0.01;             // integrator substep [s]
    double horizon = 20.0;        // [s]
    ControllerParams controller;
    std::vector<VehicleSpec> vehicles;

    double mock_speed() const { return controller.bounds.v_max; }
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Structural checks: dt divides the control period, schedules start at 0,
/// lanes exist, weights/bounds sane, every vehicle's initial frame has all
/// seven barriers >= 0. Throws ConfigError with a specific message.
void validate_scenario(const ScenarioConfig& scenario);

struct StepRecord {
    double t = 0.0;
    int vehicle = 0;
    VehicleState state;     // state the controller acted on
    ControlInput applied;
    std::array<double, 7> barriers{};
    double lyapunov = 0.0;  // V at this step
    double eta0 = 0.0;
    double delta_v = 0.0;
    double delta_omega = 0.0;
    double v_ref = 0.0;
    double y_ref = 0.0;
    SolveStatus status = SolveStatus::Optimal;
    bool fallback = false;
    std::vector<int> active_set;
};

struct TrajectoryLog {
    std::string scenario_name;
    LaneGeometry geometry;
    double control_period = 0.0;
    double horizon = 0.0;
    int vehicle_count = 0;
    std::vector<StepRecord> records;          // vehicle-major within each step
    std::vector<VehicleState> final_states;   // after the last integration
    double final_time = 0.0;
};

/// Wall-clock statistics of the controller solves; kept out of the log so
/// identical configs produce bit-identical logs.
struct RunStats {
    double mean_control_seconds = 0.0;
    double max_control_seconds = 0.0;
    int solve_count = 0;
    int fallback_count = 0;
    int non_optimal_count = 0;
};

/// Synchronous decentralized loop: each control period every vehicle
/// classifies its own frame from the previous step's world, solves its own
/// QP, and all inputs are applied simultaneously; states integrate in RK4
/// substeps between control instants. Deterministic.
TrajectoryLog run(const ScenarioConfig& scenario, RunStats* stats = nullptr);

struct InvarianceReport {
    bool pass = false;
    double tolerance = 0.0;
    double min_value = 0.0;
    double min_time = 0.0;
    int min_vehicle = 0;
    BarrierId min_barrier = BarrierId::B1;
    std::array<double, 7> per_barrier_min{};
};

/// Empirical forward-invariance check: minimum of every barrier over all
/// steps and vehicles; PASS iff all stay >= -tol.
InvarianceReport check_invariance(const TrajectoryLog& log, double tol);

}  // namespace lanesafe
