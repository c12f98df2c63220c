#include "lanesafe/vehicle_model.hpp"

#include <cmath>

namespace lanesafe {

bool VehicleState::finite() const {
    return std::isfinite(x) && std::isfinite(y) && std::isfinite(psi) &&
           std::isfinite(v_applied) && std::isfinite(omega_applied);
}

StateDerivative dynamics(const VehicleState& state, const ControlInput& input) {
    return {input.v * std::cos(state.psi), input.v * std::sin(state.psi), input.omega};
}

VehicleState step(const VehicleState& state, const ControlInput& input, double dt) {
    if (!(dt > 0.0)) {
        throw std::invalid_argument("step: dt must be positive");
    }
    if (!state.finite() || !std::isfinite(input.v) || !std::isfinite(input.omega)) {
        throw std::invalid_argument("step: non-finite state or input");
    }

    auto eval = [&](const VehicleState& s) { return dynamics(s, input); };
    auto advance = [&](const VehicleState& s, const StateDerivative& d, double h) {
        VehicleState out = s;
        out.x += h * d.dx;
        out.y += h * d.dy;
        out.psi += h * d.dpsi;
        return out;
    };

    const StateDerivative k1 = eval(state);
    const StateDerivative k2 = eval(advance(state, k1, dt / 2.0));
    const StateDerivative k3 = eval(advance(state, k2, dt / 2.0));
    const StateDerivative k4 = eval(advance(state, k3, dt));

    VehicleState out = state;
    out.x += dt / 6.0 * (k1.dx + 2.0 * k2.dx + 2.0 * k3.dx + k4.dx);
    out.y += dt / 6.0 * (k1.dy + 2.0 * k2.dy + 2.0 * k3.dy + k4.dy);
    out.psi += dt / 6.0 * (k1.dpsi + 2.0 * k2.dpsi + 2.0 * k3.dpsi + k4.dpsi);
    out.v_applied = input.v;
    out.omega_applied = input.omega;
    return out;
}

}  // namespace lanesafe
