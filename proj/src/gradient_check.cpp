#include "lanesafe/gradient_check.hpp"

#include <cmath>

namespace lanesafe {

namespace {

int slot_relative_lane(Slot s) {
    switch (s) {
        case Slot::LeftFront:
        case Slot::LeftBack: return +1;
        case Slot::SameFront:
        case Slot::SameBack: return 0;
        case Slot::RightFront:
        case Slot::RightBack: return -1;
    }
    return 0;
}

bool slot_is_front(Slot s) {
    return s == Slot::LeftFront || s == Slot::SameFront || s == Slot::RightFront;
}

bool near_breakpoint(double theta_value, double margin) {
    return std::abs(theta_value - 0.9) < margin || std::abs(theta_value - 1.0) < margin;
}

}  // namespace

NeighborFrame sample_frame(std::mt19937_64& rng, const FrameSamplerOptions& opt) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const LaneGeometry& geo = opt.geometry;
    const double w = geo.lane_width;

    for (int attempt = 0; attempt < 1000; ++attempt) {
        NeighborFrame frame;
        std::uniform_int_distribution<int> lane_dist(1, geo.lane_count);
        frame.ego_lane = lane_dist(rng);

        VehicleState& ego = frame.ego;
        ego.x = 200.0 * unit(rng);
        if (opt.ego_inside_lane) {
            ego.y = geo.y_lower(frame.ego_lane) +
                    (geo.y_upper(frame.ego_lane) - geo.y_lower(frame.ego_lane)) * unit(rng);
        } else {
            ego.y = frame.ego_lane * w - w / 2.0 + w * unit(rng);
        }
        ego.psi = opt.psi_range * (2.0 * unit(rng) - 1.0);
        ego.v_applied = opt.v_min + (opt.v_max - opt.v_min) * unit(rng);
        ego.omega_applied = 0.4 * (2.0 * unit(rng) - 1.0);

        for (Slot s : kAllSlots) {
            const auto idx = static_cast<std::size_t>(s);
            const int lane = frame.ego_lane + slot_relative_lane(s);
            if (unit(rng) < opt.mock_probability) {
                VehicleState mock;
                mock.x = ego.x + (slot_is_front(s) ? opt.sensor_range : -opt.sensor_range);
                mock.y = lane * w;
                mock.v_applied = opt.v_max;
                frame.slots[idx] = SlotOccupant{mock, true};
            } else {
                VehicleState other;
                const double gap = 0.5 + 90.0 * unit(rng);
                other.x = ego.x + (slot_is_front(s) ? gap : -gap);
                const double band = w / 2.0 - geo.epsilon;
                other.y = lane * w + band * (2.0 * unit(rng) - 1.0);
                other.psi = opt.psi_range * 0.7 * (2.0 * unit(rng) - 1.0);
                other.v_applied = opt.v_min + (opt.v_max - opt.v_min) * unit(rng);
                frame.slots[idx] = SlotOccupant{other, false};
            }
        }

        if (opt.breakpoint_margin > 0.0) {
            const double tau = opt.tau_d;
            const auto& pf = frame.slot(Slot::LeftFront).state;
            const auto& pb = frame.slot(Slot::LeftBack).state;
            const auto& mf = frame.slot(Slot::RightFront).state;
            const auto& mb = frame.slot(Slot::RightBack).state;
            const bool clean =
                !near_breakpoint(theta(ego.x, mb.x, mb.v_applied, tau), opt.breakpoint_margin) &&
                !near_breakpoint(theta(mf.x, ego.x, ego.v_applied, tau), opt.breakpoint_margin) &&
                !near_breakpoint(theta(ego.x, pb.x, pb.v_applied, tau), opt.breakpoint_margin) &&
                !near_breakpoint(theta(pf.x, ego.x, ego.v_applied, tau), opt.breakpoint_margin);
            if (!clean) continue;
        }
        return frame;
    }
    throw std::runtime_error("sample_frame: could not sample away from lambda breakpoints");
}

FrameGradient fd_gradient(const std::function<double(const NeighborFrame&)>& fn,
                          const NeighborFrame& frame, double h) {
    FrameGradient grad;
    auto central = [&](auto&& mutate) {
        NeighborFrame plus = frame;
        NeighborFrame minus = frame;
        mutate(plus, +h);
        mutate(minus, -h);
        return (fn(plus) - fn(minus)) / (2.0 * h);
    };

    grad.ego[0] = central([](NeighborFrame& f, double d) { f.ego.x += d; });
    grad.ego[1] = central([](NeighborFrame& f, double d) { f.ego.y += d; });
    grad.ego[2] = central([](NeighborFrame& f, double d) { f.ego.psi += d; });
    for (std::size_t i = 0; i < kSlotCount; ++i) {
        grad.slot[i][0] = central([i](NeighborFrame& f, double d) { f.slots[i].state.x += d; });
        grad.slot[i][1] = central([i](NeighborFrame& f, double d) { f.slots[i].state.y += d; });
        grad.slot[i][2] = central([i](NeighborFrame& f, double d) { f.slots[i].state.psi += d; });
    }
    return grad;
}

namespace {

struct Comparison {
    double error = 0.0;
    std::string component;
};

Comparison compare(const FrameGradient& analytic, const FrameGradient& fd, double floor_value) {
    Comparison worst;
    auto check = [&](double a, double f, const std::string& name) {
        const double denom = std::max({std::abs(a), std::abs(f), floor_value});
        const double err = std::abs(a - f) / denom;
        if (err > worst.error) {
            worst.error = err;
            worst.component = name;
        }
    };
    check(analytic.ego[0], fd.ego[0], "d/dx_E");
    check(analytic.ego[1], fd.ego[1], "d/dy_E");
    check(analytic.ego[2], fd.ego[2], "d/dpsi_E");
    for (std::size_t i = 0; i < kSlotCount; ++i) {
        const std::string slot = slot_name(kAllSlots[i]);
        check(analytic.slot[i][0], fd.slot[i][0], "d/dx_" + slot);
        check(analytic.slot[i][1], fd.slot[i][1], "d/dy_" + slot);
        check(analytic.slot[i][2], fd.slot[i][2], "d/dpsi_" + slot);
    }
    return worst;
}

}  // namespace

GradientCheckResult check_certificate_gradients(int samples, std::uint64_t seed,
                                                const CoordinationConfig& coord,
                                                const ClassKConfig& gains,
                                                const GradientCheckOptions& options) {
    GradientCheckResult result;
    result.samples = samples;

    std::mt19937_64 rng(seed);
    FrameSamplerOptions sampler;
    sampler.tau_d = coord.tau_d;
    sampler.breakpoint_margin = 0.01;
    std::uniform_int_distribution<int> lane_dist(1, sampler.geometry.lane_count);

    for (int n = 0; n < samples; ++n) {
        const NeighborFrame frame = sample_frame(rng, sampler);
        const double y_ref = lane_dist(rng) * sampler.geometry.lane_width;

        auto record = [&](FrameGradient analytic, const FrameGradient& fd,
                          const std::string& label) {
            if (options.inject_error) {
                analytic.ego[1] += 0.5;
            }
            const Comparison cmp = compare(analytic, fd, options.denominator_floor);
            if (cmp.error > result.worst_error) {
                result.worst_error = cmp.error;
                result.worst_detail =
                    label + " " + cmp.component + " at sample " + std::to_string(n);
            }
        };

        for (BarrierId id : kAllBarriers) {
            // The bare barrier gradient anchors the chain; for r = 2 the
            // psi1 gradient is checked on top of it.
            const FrameGradient fd_b = fd_gradient(
                [&](const NeighborFrame& f) { return eval_b(id, f, sampler.geometry, coord); },
                frame, options.fd_step);
            record(barrier_value_gradient(id, frame, sampler.geometry, coord), fd_b,
                   barrier_name(id));
            if (id == BarrierId::B2 || id == BarrierId::B3 || id == BarrierId::B4 ||
                id == BarrierId::B5) {
                const FrameGradient fd_psi1 = fd_gradient(
                    [&](const NeighborFrame& f) {
                        return certificate_value(id, f, sampler.geometry, coord, gains);
                    },
                    frame, options.fd_step);
                record(certificate_gradient(id, frame, sampler.geometry, coord, gains), fd_psi1,
                       "psi1(" + barrier_name(id) + ")");
            }
        }

        const FrameGradient fd_eta = fd_gradient(
            [&](const NeighborFrame& f) { return lyapunov_eta0(f, y_ref, gains); }, frame,
            options.fd_step);
        record(lyapunov_eta0_gradient(frame, y_ref, gains), fd_eta, "eta0");
    }

    result.pass = result.worst_error <= options.tolerance;
    return result;
}

}  // namespace lanesafe
