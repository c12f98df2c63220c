#pragma once

#include <array>
#include <optional>
#include <string>

#include "lanesafe/coordination.hpp"
#include "lanesafe/perception.hpp"

namespace lanesafe {

/// Linear class-K gains for the certificate chains:
/// gamma_i(s) = k_i * s (barriers), mu_1(s) = m1 * s and
/// alpha(V) = c * V (Lyapunov).
struct ClassKConfig {
    double k1 = 1.0;
    double k2 = 1.0;
    double m1 = 1.0;
    double c = 0.8;
};

enum class BarrierId { B1 = 0, B2, B3, B4, B5, B6, B7 };

constexpr std::array<BarrierId, 7> kAllBarriers = {
    BarrierId::B1, BarrierId::B2, BarrierId::B3, BarrierId::B4,
    BarrierId::B5, BarrierId::B6, BarrierId::B7};

std::string barrier_name(BarrierId id);

/// One affine inequality a_v * v + a_omega * omega + a_delta_omega * delta_omega >= rhs.
struct ConstraintRow {
    double a_v = 0.0;
    double a_omega = 0.0;
    double a_delta_omega = 0.0;
    double rhs = 0.0;
};

struct BarrierEval {
    BarrierId id;
    double value = 0.0;              // b_k, frozen-input convention applied
    std::optional<double> psi1;      // first chain function, relative degree 2 only
    ConstraintRow row;
};

struct LyapunovEval {
    double V = 0.0;
    double eta0 = 0.0;
    ConstraintRow row;  // a_delta_omega = 1
};

/// Gradient of a scalar certificate with respect to the (x, y, psi) of the
/// ego and of each slot occupant. Measured speeds and the ego's frozen
/// applied input are treated as constants.
struct FrameGradient {
    std::array<double, 3> ego{};                        // d/d(x_E, y_E, psi_E)
    std::array<std::array<double, 3>, kSlotCount> slot{};
};

struct FrameError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Barrier value b_k on a frame. The ego speed inside safety-distance
/// products and coordination arguments is the frozen applied speed.
double eval_b(BarrierId id, const NeighborFrame& frame, const LaneGeometry& geometry,
              const CoordinationConfig& coord);

/// Gradient of the plain barrier value with respect to the frame poses.
FrameGradient barrier_value_gradient(BarrierId id, const NeighborFrame& frame,
                                     const LaneGeometry& geometry,
                                     const CoordinationConfig& coord);

/// The scalar whose derivative along the dynamics forms the QP row:
/// b_k itself for the relative-degree-1 barriers (B1, B6, B7) and
/// psi_1 = db/dt|frozen + k1 * b for B2..B5.
double certificate_value(BarrierId id, const NeighborFrame& frame, const LaneGeometry& geometry,
                         const CoordinationConfig& coord, const ClassKConfig& gains);

/// Hand-derived gradient of certificate_value; validated against central
/// finite differences by the gradient-check suite.
FrameGradient certificate_gradient(BarrierId id, const NeighborFrame& frame,
                                   const LaneGeometry& geometry, const CoordinationConfig& coord,
                                   const ClassKConfig& gains);

double lyapunov_eta0(const NeighborFrame& frame, double y_ref, const ClassKConfig& gains);
FrameGradient lyapunov_eta0_gradient(const NeighborFrame& frame, double y_ref,
                                     const ClassKConfig& gains);

/// Full barrier row: value, chain function and the affine constraint on the
/// current inputs. Neighbor motion enters as a drift at constant measured
/// velocity along constant heading.
BarrierEval barrier_row(BarrierId id, const NeighborFrame& frame, const LaneGeometry& geometry,
                        const CoordinationConfig& coord, const ClassKConfig& gains);

LyapunovEval lyapunov_row(const NeighborFrame& frame, double y_ref, const ClassKConfig& gains);

/// Contract a certificate gradient with the frame kinematics. The ego part
/// stays symbolic in (v, omega); the neighbor part becomes the drift term.
/// Row: a_v * v + a_omega * omega + a_delta_omega * delta >= -drift - gain * value.
ConstraintRow row_from_gradient(double value, const FrameGradient& grad,
                                const NeighborFrame& frame, double gain,
                                double a_delta_omega = 0.0);

}  // namespace lanesafe
