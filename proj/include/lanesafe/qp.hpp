#pragma once

#include <array>
#include <string>
#include <vector>

#include "lanesafe/certificates.hpp"

namespace lanesafe {

struct QpWeights {
    double h_v = 1.0;
    double h_omega = 70000.0;
    double p_v = 1e9;
    double p_omega = 1e9;
};

struct InputBounds {
    double v_min = 0.0;
    double v_max = 30.0;
    double omega_min = -0.5;
    double omega_max = 0.5;
};

/// Per-step program over z = (v, omega, delta_v, delta_omega) with cost
/// h_v v^2 + h_omega omega^2 + p_v delta_v^2 + p_omega delta_omega^2,
/// eight inequality rows (B1..B7 + Lyapunov), the tracking equality
/// (v - v_ref) + delta_v = 0 and box bounds on v and omega. delta_v is
/// eliminated analytically through the equality before solving.
struct QpProblem {
    std::array<ConstraintRow, 8> rows;  // B1..B7, then the Lyapunov row
    QpWeights weights;
    InputBounds bounds;
    double v_ref = 0.0;
};

enum class SolveStatus { Optimal, Infeasible, MaxIterations };

std::string status_name(SolveStatus status);

struct QpSolution {
    double v = 0.0;
    double omega = 0.0;
    double delta_v = 0.0;
    double delta_omega = 0.0;
    double objective = 0.0;
    std::vector<int> active_set;  // row indices; 8..11 are the box bounds
    double kkt_residual = 0.0;    // scaled stationarity + complementarity residual
    int iterations = 0;
    SolveStatus status = SolveStatus::Optimal;
};

/// Dual active-set iteration on the reduced 3-variable problem
/// (v, omega, delta_omega). Starts from the unconstrained minimum and adds
/// violated constraints one at a time; detects infeasibility exactly.
/// kkt_tol = 1e-8 (scaled), feas_tol = 1e-7, at most 100 iterations.
QpSolution solve(const QpProblem& qp);

struct OracleResult {
    bool feasible = false;
    double v = 0.0;
    double omega = 0.0;
    double delta_omega = 0.0;
    double objective = 0.0;
};

/// Exhaustive grid over (v, omega) at `resolution` points per axis; at each
/// feasible grid point delta_omega takes its constrained minimum (max of 0
/// and the Lyapunov-row violation). Test oracle, intentionally independent
/// of solve().
OracleResult brute_force_oracle(const QpProblem& qp, int resolution);

constexpr double kKktTol = 1e-8;
constexpr double kFeasTol = 1e-7;
constexpr int kMaxIterations = 100;

struct ControllerParams {
    CoordinationConfig coord;
    ClassKConfig gains;
    QpWeights weights;
    InputBounds bounds;
};

struct References {
    double v_ref = 0.0;
    double y_ref = 0.0;
};

QpProblem assemble(const NeighborFrame& frame, const References& refs,
                   const LaneGeometry& geometry, const ControllerParams& params);

struct StepDiagnostics {
    std::array<BarrierEval, 7> barriers;
    LyapunovEval lyapunov;
    QpSolution solution;
    bool fallback = false;  // emergency (v_min, 0) applied
};

struct ControlDecision {
    ControlInput input;
    StepDiagnostics diagnostics;
};

/// Assemble and solve one control step. A non-optimal solve falls back to
/// maximal braking with zero steering; every condition is reported in the
/// diagnostics, nothing escapes as an exception except a corrupt frame.
ControlDecision control_step(const NeighborFrame& frame, const References& refs,
                             const LaneGeometry& geometry, const ControllerParams& params);

}  // namespace lanesafe
