#pragma once

#include <functional>
#include <random>
#include <string>

#include "lanesafe/certificates.hpp"

namespace lanesafe {

/// Random frames with valid slot geometry: fronts ahead of the ego, backs
/// behind, slot occupants inside their lane band, positive speeds. Used by
/// the gradient-check suite and the property tests.
struct FrameSamplerOptions {
    LaneGeometry geometry{4.0, 3, 0.1};
    double tau_d = 0.9;
    double sensor_range = 100.0;
    double mock_probability = 0.3;
    double psi_range = 0.3;       // ego and neighbor headings in [-range, range]
    double v_min = 1.0;
    double v_max = 30.0;
    bool ego_inside_lane = true;  // ego y within [y_lower, y_upper] of its lane
    /// Resample while any coordination argument is within this margin of a
    /// lambda breakpoint (0.9 or 1.0), where the piecewise derivative jumps.
    double breakpoint_margin = 0.0;
};

NeighborFrame sample_frame(std::mt19937_64& rng, const FrameSamplerOptions& options);

/// Central finite-difference gradient of a scalar frame function,
/// perturbing each pose coordinate of the ego and of every slot occupant.
/// The step balances truncation against cancellation noise on the steep
/// sigmoid shoulder of lambda.
FrameGradient fd_gradient(const std::function<double(const NeighborFrame&)>& fn,
                          const NeighborFrame& frame, double h = 2e-6);

struct GradientCheckResult {
    bool pass = true;
    double worst_error = 0.0;  // relative with a small-denominator floor
    std::string worst_detail;
    int samples = 0;
};

struct GradientCheckOptions {
    double tolerance = 1e-5;
    double fd_step = 2e-6;
    /// Denominator floor of the relative error, absorbs finite-difference
    /// noise on near-zero coefficients.
    double denominator_floor = 1e-3;
    /// Test hook: corrupt one analytic gradient component to exercise the
    /// failure path.
    bool inject_error = false;
};

/// Compare every analytic certificate gradient (b1..b7, psi1 of b2..b5 and
/// eta0) against central finite differences of the corresponding scalar on
/// `samples` random frames.
GradientCheckResult check_certificate_gradients(int samples, std::uint64_t seed,
                                                const CoordinationConfig& coord,
                                                const ClassKConfig& gains,
                                                const GradientCheckOptions& options = {});

}  // namespace lanesafe
