#pragma once

#include <stdexcept>

namespace lanesafe {

/// Planar pose of one vehicle plus the input it is currently holding.
/// Headings are kept unwrapped; the controller is only valid on
/// psi in (-pi/2, pi/2) and the simulator aborts outside that range.
struct VehicleState {
    double x = 0.0;              // longitudinal position [m]
    double y = 0.0;              // lateral position [m]
    double psi = 0.0;            // heading [rad]
    double v_applied = 0.0;      // last applied speed [m/s]
    double omega_applied = 0.0;  // last applied turn rate [rad/s]

    bool finite() const;
};

struct ControlInput {
    double v = 0.0;      // speed [m/s]
    double omega = 0.0;  // turn rate [rad/s]
};

struct StateDerivative {
    double dx = 0.0;
    double dy = 0.0;
    double dpsi = 0.0;
};

/// Unicycle kinematics: dx = v cos(psi), dy = v sin(psi), dpsi = omega.
StateDerivative dynamics(const VehicleState& state, const ControlInput& input);

/// One classical RK4 step of size dt under a zero-order-hold input.
/// v_applied/omega_applied of the result are set to the held input.
/// Throws std::invalid_argument for dt <= 0 or a non-finite state.
VehicleState step(const VehicleState& state, const ControlInput& input, double dt);

struct SimulationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace lanesafe
