#include "lanesafe/builtin_scenarios.hpp"

namespace lanesafe {

namespace {

ScenarioConfig base_scenario() {
    ScenarioConfig s;
    s.geometry = LaneGeometry{4.0, 2, 0.1};
    s.sensor_range = 100.0;
    s.control_period = 0.05;
    s.dt = 0.01;
    s.controller = ControllerParams{};
    // With linear class-K gains the published omega weight lets the sampled
    // controller step too coarsely at lane touchdown; a 10x penalty and a
    // faster mu-chain give a smooth switch without grazing any barrier.
    s.controller.gains.m1 = 2.0;
    s.controller.weights.h_omega = 700000.0;
    return s;
}

VehicleSpec vehicle(double x, double y, double v, double v_ref,
                    std::vector<std::pair<double, int>> schedule) {
    VehicleSpec spec;
    spec.initial = VehicleState{x, y, 0.0, v, 0.0};
    spec.v_ref = v_ref;
    spec.schedule.entries = std::move(schedule);
    return spec;
}

}  // namespace

std::vector<ScenarioConfig> builtin_scenarios() {
    std::vector<ScenarioConfig> all;

    {
        // Ego catches up to a slower leader on the same lane and settles at
        // the velocity-proportional safety distance.
        ScenarioConfig s = base_scenario();
        s.name = "scenario1-acc";
        s.horizon = 30.0;
        s.vehicles.push_back(vehicle(0.0, 4.0, 20.0, 20.0, {{0.0, 1}}));
        s.vehicles.push_back(vehicle(40.0, 4.0, 15.0, 15.0, {{0.0, 1}}));
        all.push_back(std::move(s));
    }
    {
        // Lane switch commanded at t = 1 s in front of a slower vehicle on
        // the target lane.
        ScenarioConfig s = base_scenario();
        s.name = "scenario2-lane-switch";
        s.horizon = 20.0;
        s.vehicles.push_back(vehicle(30.0, 4.0, 20.0, 20.0, {{0.0, 1}, {1.0, 2}}));
        s.vehicles.push_back(vehicle(0.0, 8.0, 18.0, 18.0, {{0.0, 2}}));
        all.push_back(std::move(s));
    }
    {
        // Three vehicles: the rear neighbor on the target lane is too close
        // for an immediate switch and has to open the gap first.
        ScenarioConfig s = base_scenario();
        s.name = "scenario3-gap-opening";
        s.horizon = 25.0;
        s.vehicles.push_back(vehicle(30.0, 4.0, 20.0, 20.0, {{0.0, 1}, {1.0, 2}}));
        s.vehicles.push_back(vehicle(55.0, 8.0, 17.0, 17.0, {{0.0, 2}}));
        s.vehicles.push_back(vehicle(16.0, 8.0, 18.0, 18.0, {{0.0, 2}}));
        all.push_back(std::move(s));
    }
    return all;
}

ScenarioConfig builtin_scenario(const std::string& name) {
    for (ScenarioConfig& s : builtin_scenarios()) {
        if (s.name == name) {
            return std::move(s);
        }
    }
    throw ConfigError("unknown builtin scenario \"" + name + "\"");
}

}  // namespace lanesafe
