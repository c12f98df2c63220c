#include "lanesafe/certificates.hpp"

#include <cmath>

namespace lanesafe {

namespace {

constexpr std::size_t kPF = static_cast<std::size_t>(Slot::LeftFront);
constexpr std::size_t kPB = static_cast<std::size_t>(Slot::LeftBack);
constexpr std::size_t kZF = static_cast<std::size_t>(Slot::SameFront);
constexpr std::size_t kMF = static_cast<std::size_t>(Slot::RightFront);
constexpr std::size_t kMB = static_cast<std::size_t>(Slot::RightBack);

const VehicleState& occupant(const NeighborFrame& frame, std::size_t idx) {
    return frame.slots[idx].state;
}

void require_finite(double value, const char* what) {
    if (!std::isfinite(value)) {
        throw FrameError(std::string("certificates: non-finite ") + what);
    }
}

// Time derivative of theta at frozen ego speed: both vehicles advance with
// their measured velocities, the ego with v_hat along its heading.
struct ThetaTerms {
    double theta = 0.0;
    double denom = 0.0;       // tau_d * v2
    double rate_frozen = 0.0; // d(theta)/dt with frozen inputs
};

}  // namespace

std::string barrier_name(BarrierId id) {
    switch (id) {
        case BarrierId::B1: return "b1";
        case BarrierId::B2: return "b2";
        case BarrierId::B3: return "b3";
        case BarrierId::B4: return "b4";
        case BarrierId::B5: return "b5";
        case BarrierId::B6: return "b6";
        case BarrierId::B7: return "b7";
    }
    return "?";
}

double eval_b(BarrierId id, const NeighborFrame& frame, const LaneGeometry& geometry,
              const CoordinationConfig& coord) {
    const VehicleState& ego = frame.ego;
    const double v_hat = ego.v_applied;
    const double w = geometry.lane_width;
    const double y_min = geometry.y_lower(frame.ego_lane);
    const double y_max = geometry.y_upper(frame.ego_lane);
    const double tau = coord.tau_d;

    double value = 0.0;
    switch (id) {
        case BarrierId::B1:
            value = occupant(frame, kZF).x - ego.x - tau * v_hat;
            break;
        case BarrierId::B2: {
            const VehicleState& mb = occupant(frame, kMB);
            value = ego.y - y_min +
                    w * lambda(theta(ego.x, mb.x, mb.v_applied, tau), coord.lambda);
            break;
        }
        case BarrierId::B3: {
            const VehicleState& mf = occupant(frame, kMF);
            value = ego.y - y_min + w * lambda(theta(mf.x, ego.x, v_hat, tau), coord.lambda);
            break;
        }
        case BarrierId::B4: {
            const VehicleState& pb = occupant(frame, kPB);
            value = w * lambda(theta(ego.x, pb.x, pb.v_applied, tau), coord.lambda) +
                    y_max - ego.y;
            break;
        }
        case BarrierId::B5: {
            const VehicleState& pf = occupant(frame, kPF);
            value = w * lambda(theta(pf.x, ego.x, v_hat, tau), coord.lambda) + y_max - ego.y;
            break;
        }
        case BarrierId::B6: {
            const VehicleState& mf = occupant(frame, kMF);
            value = mf.x - ego.x - tau * v_hat * sigma(rho(ego.y, mf.y, w), coord.sigma);
            break;
        }
        case BarrierId::B7: {
            const VehicleState& pf = occupant(frame, kPF);
            value = pf.x - ego.x - tau * v_hat * sigma(rho(pf.y, ego.y, w), coord.sigma);
            break;
        }
    }
    require_finite(value, "barrier value");
    return value;
}

namespace {

// Gradient of the plain barrier value (frozen-input convention applied).
FrameGradient barrier_gradient(BarrierId id, const NeighborFrame& frame,
                               const LaneGeometry& geometry, const CoordinationConfig& coord) {
    FrameGradient g;
    const VehicleState& ego = frame.ego;
    const double v_hat = ego.v_applied;
    const double w = geometry.lane_width;
    const double tau = coord.tau_d;

    switch (id) {
        case BarrierId::B1:
            g.ego[0] = -1.0;
            g.slot[kZF][0] = 1.0;
            break;
        case BarrierId::B2: {
            const VehicleState& mb = occupant(frame, kMB);
            const double d = tau * mb.v_applied;
            const double lp = lambda_prime(theta(ego.x, mb.x, mb.v_applied, tau), coord.lambda);
            g.ego[1] = 1.0;
            g.ego[0] = w * lp / d;
            g.slot[kMB][0] = -w * lp / d;
            break;
        }
        case BarrierId::B3: {
            const VehicleState& mf = occupant(frame, kMF);
            const double d = tau * v_hat;
            const double lp = lambda_prime(theta(mf.x, ego.x, v_hat, tau), coord.lambda);
            g.ego[1] = 1.0;
            g.ego[0] = -w * lp / d;
            g.slot[kMF][0] = w * lp / d;
            break;
        }
        case BarrierId::B4: {
            const VehicleState& pb = occupant(frame, kPB);
            const double d = tau * pb.v_applied;
            const double lp = lambda_prime(theta(ego.x, pb.x, pb.v_applied, tau), coord.lambda);
            g.ego[1] = -1.0;
            g.ego[0] = w * lp / d;
            g.slot[kPB][0] = -w * lp / d;
            break;
        }
        case BarrierId::B5: {
            const VehicleState& pf = occupant(frame, kPF);
            const double d = tau * v_hat;
            const double lp = lambda_prime(theta(pf.x, ego.x, v_hat, tau), coord.lambda);
            g.ego[1] = -1.0;
            g.ego[0] = -w * lp / d;
            g.slot[kPF][0] = w * lp / d;
            break;
        }
        case BarrierId::B6: {
            const VehicleState& mf = occupant(frame, kMF);
            const double sp = sigma_prime(rho(ego.y, mf.y, w), coord.sigma);
            g.ego[0] = -1.0;
            g.slot[kMF][0] = 1.0;
            g.ego[1] = -tau * v_hat * sp / w;
            g.slot[kMF][1] = tau * v_hat * sp / w;
            break;
        }
        case BarrierId::B7: {
            const VehicleState& pf = occupant(frame, kPF);
            const double sp = sigma_prime(rho(pf.y, ego.y, w), coord.sigma);
            g.ego[0] = -1.0;
            g.slot[kPF][0] = 1.0;
            g.slot[kPF][1] = -tau * v_hat * sp / w;
            g.ego[1] = tau * v_hat * sp / w;
            break;
        }
    }
    return g;
}

// Lie derivative of a scalar along the frame kinematics with all inputs
// frozen: the ego advances with its applied speed along its heading and
// every neighbor with its measured speed along its heading.
double lie_derivative_frozen(const FrameGradient& grad, const NeighborFrame& frame) {
    const VehicleState& ego = frame.ego;
    double total = grad.ego[0] * ego.v_applied * std::cos(ego.psi) +
                   grad.ego[1] * ego.v_applied * std::sin(ego.psi);
    for (std::size_t i = 0; i < kSlotCount; ++i) {
        const VehicleState& s = frame.slots[i].state;
        total += grad.slot[i][0] * s.v_applied * std::cos(s.psi) +
                 grad.slot[i][1] * s.v_applied * std::sin(s.psi);
    }
    return total;
}

bool relative_degree_two(BarrierId id) {
    return id == BarrierId::B2 || id == BarrierId::B3 || id == BarrierId::B4 ||
           id == BarrierId::B5;
}

// Hand-derived gradient of psi1 = db/dt|frozen + k1 * b for B2..B5.
// psi1 has the shape (+-) v_hat sin(psi_E) + w * lambda'(theta) * rate + k1 * b
// where rate is the frozen theta rate; differentiating brings in lambda''.
FrameGradient psi1_gradient(BarrierId id, const NeighborFrame& frame,
                            const LaneGeometry& geometry, const CoordinationConfig& coord,
                            const ClassKConfig& gains) {
    FrameGradient g;
    const VehicleState& ego = frame.ego;
    const double v_hat = ego.v_applied;
    const double w = geometry.lane_width;
    const double tau = coord.tau_d;
    const double k1 = gains.k1;
    const double cos_e = std::cos(ego.psi);
    const double sin_e = std::sin(ego.psi);

    switch (id) {
        case BarrierId::B2: {
            const VehicleState& mb = occupant(frame, kMB);
            const double d = tau * mb.v_applied;
            const double th = theta(ego.x, mb.x, mb.v_applied, tau);
            const double lp = lambda_prime(th, coord.lambda);
            const double lpp = lambda_second(th, coord.lambda);
            const double rate = (v_hat * cos_e - mb.v_applied * std::cos(mb.psi)) / d;
            g.ego[0] = w * lpp * rate / d + k1 * w * lp / d;
            g.ego[1] = k1;
            g.ego[2] = v_hat * cos_e - w * lp * v_hat * sin_e / d;
            g.slot[kMB][0] = -w * lpp * rate / d - k1 * w * lp / d;
            g.slot[kMB][2] = w * lp * mb.v_applied * std::sin(mb.psi) / d;
            break;
        }
        case BarrierId::B3: {
            const VehicleState& mf = occupant(frame, kMF);
            const double d = tau * v_hat;
            const double th = theta(mf.x, ego.x, v_hat, tau);
            const double lp = lambda_prime(th, coord.lambda);
            const double lpp = lambda_second(th, coord.lambda);
            const double rate = (mf.v_applied * std::cos(mf.psi) - v_hat * cos_e) / d;
            g.ego[0] = -w * lpp * rate / d - k1 * w * lp / d;
            g.ego[1] = k1;
            g.ego[2] = v_hat * cos_e + w * lp * v_hat * sin_e / d;
            g.slot[kMF][0] = w * lpp * rate / d + k1 * w * lp / d;
            g.slot[kMF][2] = -w * lp * mf.v_applied * std::sin(mf.psi) / d;
            break;
        }
        case BarrierId::B4: {
            const VehicleState& pb = occupant(frame, kPB);
            const double d = tau * pb.v_applied;
            const double th = theta(ego.x, pb.x, pb.v_applied, tau);
            const double lp = lambda_prime(th, coord.lambda);
            const double lpp = lambda_second(th, coord.lambda);
            const double rate = (v_hat * cos_e - pb.v_applied * std::cos(pb.psi)) / d;
            g.ego[0] = w * lpp * rate / d + k1 * w * lp / d;
            g.ego[1] = -k1;
            g.ego[2] = -v_hat * cos_e - w * lp * v_hat * sin_e / d;
            g.slot[kPB][0] = -w * lpp * rate / d - k1 * w * lp / d;
            g.slot[kPB][2] = w * lp * pb.v_applied * std::sin(pb.psi) / d;
            break;
        }
        case BarrierId::B5: {
            const VehicleState& pf = occupant(frame, kPF);
            const double d = tau * v_hat;
            const double th = theta(pf.x, ego.x, v_hat, tau);
            const double lp = lambda_prime(th, coord.lambda);
            const double lpp = lambda_second(th, coord.lambda);
            const double rate = (pf.v_applied * std::cos(pf.psi) - v_hat * cos_e) / d;
            g.ego[0] = -w * lpp * rate / d - k1 * w * lp / d;
            g.ego[1] = -k1;
            g.ego[2] = -v_hat * cos_e + w * lp * v_hat * sin_e / d;
            g.slot[kPF][0] = w * lpp * rate / d + k1 * w * lp / d;
            g.slot[kPF][2] = -w * lp * pf.v_applied * std::sin(pf.psi) / d;
            break;
        }
        default:
            break;
    }
    return g;
}

}  // namespace

FrameGradient barrier_value_gradient(BarrierId id, const NeighborFrame& frame,
                                     const LaneGeometry& geometry,
                                     const CoordinationConfig& coord) {
    return barrier_gradient(id, frame, geometry, coord);
}

double certificate_value(BarrierId id, const NeighborFrame& frame, const LaneGeometry& geometry,
                         const CoordinationConfig& coord, const ClassKConfig& gains) {
    const double b = eval_b(id, frame, geometry, coord);
    if (!relative_degree_two(id)) {
        return b;
    }
    const FrameGradient g = barrier_gradient(id, frame, geometry, coord);
    const double psi1 = lie_derivative_frozen(g, frame) + gains.k1 * b;
    require_finite(psi1, "psi1");
    return psi1;
}

FrameGradient certificate_gradient(BarrierId id, const NeighborFrame& frame,
                                   const LaneGeometry& geometry, const CoordinationConfig& coord,
                                   const ClassKConfig& gains) {
    if (!relative_degree_two(id)) {
        return barrier_gradient(id, frame, geometry, coord);
    }
    return psi1_gradient(id, frame, geometry, coord, gains);
}

double lyapunov_eta0(const NeighborFrame& frame, double y_ref, const ClassKConfig& gains) {
    const double err = y_ref - frame.ego.y;
    const double V = 0.5 * err * err;
    return err * frame.ego.v_applied * std::sin(frame.ego.psi) - gains.c * V;
}

FrameGradient lyapunov_eta0_gradient(const NeighborFrame& frame, double y_ref,
                                     const ClassKConfig& gains) {
    FrameGradient g;
    const double err = y_ref - frame.ego.y;
    const double v_hat = frame.ego.v_applied;
    g.ego[1] = -v_hat * std::sin(frame.ego.psi) + gains.c * err;
    g.ego[2] = err * v_hat * std::cos(frame.ego.psi);
    return g;
}

ConstraintRow row_from_gradient(double value, const FrameGradient& grad,
                                const NeighborFrame& frame, double gain,
                                double a_delta_omega) {
    const VehicleState& ego = frame.ego;
    ConstraintRow row;
    row.a_v = grad.ego[0] * std::cos(ego.psi) + grad.ego[1] * std::sin(ego.psi);
    row.a_omega = grad.ego[2];
    row.a_delta_omega = a_delta_omega;
    double drift = 0.0;
    for (std::size_t i = 0; i < kSlotCount; ++i) {
        const VehicleState& s = frame.slots[i].state;
        drift += grad.slot[i][0] * s.v_applied * std::cos(s.psi) +
                 grad.slot[i][1] * s.v_applied * std::sin(s.psi);
    }
    row.rhs = -drift - gain * value;
    if (!std::isfinite(row.a_v) || !std::isfinite(row.a_omega) || !std::isfinite(row.rhs)) {
        throw FrameError("certificates: non-finite constraint row");
    }
    return row;
}

BarrierEval barrier_row(BarrierId id, const NeighborFrame& frame, const LaneGeometry& geometry,
                        const CoordinationConfig& coord, const ClassKConfig& gains) {
    if (id == BarrierId::B1 && std::abs(frame.ego.psi) >= M_PI / 2.0) {
        throw FrameError("b1 is only a valid barrier for |psi| < pi/2");
    }
    BarrierEval eval{.id = id};
    eval.value = eval_b(id, frame, geometry, coord);
    const FrameGradient grad = certificate_gradient(id, frame, geometry, coord, gains);
    if (relative_degree_two(id)) {
        eval.psi1 = certificate_value(id, frame, geometry, coord, gains);
        eval.row = row_from_gradient(*eval.psi1, grad, frame, gains.k2);
    } else {
        eval.row = row_from_gradient(eval.value, grad, frame, gains.k1);
    }
    return eval;
}

LyapunovEval lyapunov_row(const NeighborFrame& frame, double y_ref, const ClassKConfig& gains) {
    LyapunovEval eval;
    const double err = y_ref - frame.ego.y;
    eval.V = 0.5 * err * err;
    eval.eta0 = lyapunov_eta0(frame, y_ref, gains);
    const FrameGradient grad = lyapunov_eta0_gradient(frame, y_ref, gains);
    eval.row = row_from_gradient(eval.eta0, grad, frame, gains.m1, 1.0);
    return eval;
}

}  // namespace lanesafe
