#include "lanesafe/simulator.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

namespace lanesafe {

int LaneSchedule::lane_at(double t) const {
    int lane = entries.empty() ? 1 : entries.front().second;
    for (const auto& [time, l] : entries) {
        if (time <= t) {
            lane = l;
        } else {
            break;
        }
    }
    return lane;
}

namespace {

std::vector<VehicleState> other_states(const std::vector<VehicleState>& world, std::size_t self) {
    std::vector<VehicleState> others;
    others.reserve(world.size() - 1);
    for (std::size_t i = 0; i < world.size(); ++i) {
        if (i != self) {
            others.push_back(world[i]);
        }
    }
    return others;
}

}  // namespace

void validate_scenario(const ScenarioConfig& scenario) {
    const auto fail = [](const std::string& msg) { throw ConfigError(msg); };

    if (scenario.vehicles.empty()) fail("scenario has no vehicles");
    if (!(scenario.dt > 0.0)) fail("dt must be positive");
    if (!(scenario.control_period > 0.0)) fail("control_period must be positive");
    if (!(scenario.horizon >= scenario.control_period)) {
        fail("horizon must cover at least one control period");
    }
    const double ratio = scenario.control_period / scenario.dt;
    if (std::abs(ratio - std::round(ratio)) > 1e-9) {
        fail("dt does not divide control_period");
    }
    if (scenario.geometry.lane_count < 2) fail("lane_count must be >= 2");
    if (!(scenario.geometry.lane_width > 0.0)) fail("lane_width must be positive");
    if (scenario.geometry.epsilon < 0.0 ||
        scenario.geometry.epsilon >= scenario.geometry.lane_width / 2.0) {
        fail("epsilon must lie in [0, lane_width/2)");
    }
    if (!(scenario.sensor_range > 0.0)) fail("sensor_range must be positive");
    if (!(scenario.controller.bounds.v_max > scenario.controller.bounds.v_min)) {
        fail("v_max must exceed v_min");
    }
    if (!(scenario.controller.bounds.omega_max > scenario.controller.bounds.omega_min)) {
        fail("omega_max must exceed omega_min");
    }

    std::vector<VehicleState> world;
    for (const VehicleSpec& spec : scenario.vehicles) {
        world.push_back(spec.initial);
    }
    for (std::size_t i = 0; i < scenario.vehicles.size(); ++i) {
        const VehicleSpec& spec = scenario.vehicles[i];
        const std::string tag = "vehicle " + std::to_string(i);
        if (!spec.initial.finite()) fail(tag + ": non-finite initial state");
        if (std::abs(spec.initial.psi) >= M_PI / 2.0) {
            fail(tag + ": initial heading outside (-pi/2, pi/2)");
        }
        if (spec.initial.v_applied < 0.0) fail(tag + ": initial speed is negative");
        if (spec.schedule.entries.empty()) fail(tag + ": empty lane schedule");
        if (spec.schedule.entries.front().first != 0.0) {
            fail(tag + ": lane schedule must start at time 0");
        }
        double prev = -1.0;
        for (const auto& [time, lane] : spec.schedule.entries) {
            if (time <= prev) fail(tag + ": lane schedule times must be increasing");
            if (lane < 1 || lane > scenario.geometry.lane_count) {
                fail(tag + ": scheduled lane " + std::to_string(lane) + " does not exist");
            }
            prev = time;
        }

        const NeighborFrame frame =
            classify(spec.initial, other_states(world, i), scenario.geometry,
                     scenario.sensor_range, scenario.mock_speed());
        for (BarrierId id : kAllBarriers) {
            const double b = eval_b(id, frame, scenario.geometry, scenario.controller.coord);
            if (b < 0.0) {
                fail(tag + ": initially unsafe, " + barrier_name(id) + " = " + std::to_string(b));
            }
        }
    }
}

TrajectoryLog run(const ScenarioConfig& scenario, RunStats* stats) {
    validate_scenario(scenario);

    TrajectoryLog log;
    log.scenario_name = scenario.name;
    log.geometry = scenario.geometry;
    log.control_period = scenario.control_period;
    log.horizon = scenario.horizon;
    log.vehicle_count = static_cast<int>(scenario.vehicles.size());

    const int steps = static_cast<int>(std::round(scenario.horizon / scenario.control_period));
    const int substeps =
        static_cast<int>(std::round(scenario.control_period / scenario.dt));

    std::vector<VehicleState> world;
    for (const VehicleSpec& spec : scenario.vehicles) {
        world.push_back(spec.initial);
    }

    double total_seconds = 0.0;
    double max_seconds = 0.0;
    int solves = 0;
    int fallbacks = 0;
    int non_optimal = 0;

    for (int step_idx = 0; step_idx < steps; ++step_idx) {
        const double t = step_idx * scenario.control_period;

        // Every controller sees the same immutable snapshot of the world and
        // knows only its own references.
        std::vector<ControlInput> inputs(world.size());
        for (std::size_t i = 0; i < world.size(); ++i) {
            const VehicleSpec& spec = scenario.vehicles[i];
            const VehicleState& ego = world[i];
            if (!ego.finite()) {
                throw SimulationError("vehicle " + std::to_string(i) +
                                      " reached a non-finite state at t = " + std::to_string(t));
            }
            if (std::abs(ego.psi) >= M_PI / 2.0) {
                throw SimulationError("vehicle " + std::to_string(i) +
                                      " left the valid heading range at t = " + std::to_string(t));
            }

            const NeighborFrame frame =
                classify(ego, other_states(world, i), scenario.geometry, scenario.sensor_range,
                         scenario.mock_speed());
            References refs;
            refs.v_ref = spec.v_ref;
            refs.y_ref = spec.schedule.lane_at(t) * scenario.geometry.lane_width;

            const auto clock_start = std::chrono::steady_clock::now();
            const ControlDecision decision =
                control_step(frame, refs, scenario.geometry, scenario.controller);
            const double seconds =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - clock_start)
                    .count();
            total_seconds += seconds;
            max_seconds = std::max(max_seconds, seconds);
            ++solves;
            if (decision.diagnostics.fallback) ++fallbacks;
            if (decision.diagnostics.solution.status != SolveStatus::Optimal) ++non_optimal;

            inputs[i] = decision.input;

            StepRecord record;
            record.t = t;
            record.vehicle = static_cast<int>(i);
            record.state = ego;
            record.applied = decision.input;
            for (std::size_t k = 0; k < 7; ++k) {
                record.barriers[k] = decision.diagnostics.barriers[k].value;
            }
            record.lyapunov = decision.diagnostics.lyapunov.V;
            record.eta0 = decision.diagnostics.lyapunov.eta0;
            record.delta_v = decision.diagnostics.solution.delta_v;
            record.delta_omega = decision.diagnostics.solution.delta_omega;
            record.v_ref = refs.v_ref;
            record.y_ref = refs.y_ref;
            record.status = decision.diagnostics.solution.status;
            record.fallback = decision.diagnostics.fallback;
            record.active_set = decision.diagnostics.solution.active_set;
            log.records.push_back(std::move(record));
        }

        for (std::size_t i = 0; i < world.size(); ++i) {
            for (int s = 0; s < substeps; ++s) {
                world[i] = step(world[i], inputs[i], scenario.dt);
            }
        }
    }

    log.final_states = world;
    log.final_time = steps * scenario.control_period;

    if (stats) {
        stats->solve_count = solves;
        stats->mean_control_seconds = solves > 0 ? total_seconds / solves : 0.0;
        stats->max_control_seconds = max_seconds;
        stats->fallback_count = fallbacks;
        stats->non_optimal_count = non_optimal;
    }
    return log;
}

InvarianceReport check_invariance(const TrajectoryLog& log, double tol) {
    InvarianceReport report;
    report.tolerance = tol;
    report.min_value = std::numeric_limits<double>::infinity();
    report.per_barrier_min.fill(std::numeric_limits<double>::infinity());

    for (const StepRecord& record : log.records) {
        for (std::size_t k = 0; k < 7; ++k) {
            const double b = record.barriers[k];
            report.per_barrier_min[k] = std::min(report.per_barrier_min[k], b);
            if (b < report.min_value) {
                report.min_value = b;
                report.min_time = record.t;
                report.min_vehicle = record.vehicle;
                report.min_barrier = kAllBarriers[k];
            }
        }
    }
    report.pass = !log.records.empty() && report.min_value >= -tol;
    return report;
}

}  // namespace lanesafe
