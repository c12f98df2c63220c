#include "lanesafe/qp.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>

namespace lanesafe {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

// Reduced problem over z = (v, omega, delta_omega):
// min 1/2 z^T Q z + q^T z + c0  s.t.  G z >= h  (12 rows).
struct Reduced {
    Mat3 Q = Mat3::Zero();
    Vec3 q = Vec3::Zero();
    double c0 = 0.0;
    Eigen::Matrix<double, 12, 3> G;
    Eigen::Matrix<double, 12, 1> h;
};

Reduced reduce(const QpProblem& qp) {
    Reduced r;
    const QpWeights& w = qp.weights;
    // delta_v = v_ref - v folds p_v (v_ref - v)^2 into the cost.
    r.Q.diagonal() << 2.0 * (w.h_v + w.p_v), 2.0 * w.h_omega, 2.0 * w.p_omega;
    r.q << -2.0 * w.p_v * qp.v_ref, 0.0, 0.0;
    r.c0 = w.p_v * qp.v_ref * qp.v_ref;

    for (int i = 0; i < 8; ++i) {
        const ConstraintRow& row = qp.rows[static_cast<std::size_t>(i)];
        r.G.row(i) << row.a_v, row.a_omega, row.a_delta_omega;
        r.h(i) = row.rhs;
    }
    r.G.row(8) << 1, 0, 0;
    r.h(8) = qp.bounds.v_min;
    r.G.row(9) << -1, 0, 0;
    r.h(9) = -qp.bounds.v_max;
    r.G.row(10) << 0, 1, 0;
    r.h(10) = qp.bounds.omega_min;
    r.G.row(11) << 0, -1, 0;
    r.h(11) = -qp.bounds.omega_max;
    return r;
}

double objective_of(const QpProblem& qp, double v, double omega, double delta_omega) {
    const QpWeights& w = qp.weights;
    const double delta_v = qp.v_ref - v;
    return w.h_v * v * v + w.h_omega * omega * omega + w.p_v * delta_v * delta_v +
           w.p_omega * delta_omega * delta_omega;
}

// Scaled KKT residual: stationarity and complementary slackness relative to
// the gradient magnitude (the raw weights reach 1e9, so absolute residuals
// would be meaningless).
double kkt_residual(const Reduced& r, const Vec3& z, const std::vector<int>& active,
                    const std::vector<double>& multipliers) {
    const Vec3 grad = r.Q * z + r.q;
    Vec3 correction = Vec3::Zero();
    for (std::size_t i = 0; i < active.size(); ++i) {
        correction += multipliers[i] * r.G.row(active[i]).transpose();
    }
    const double scale = std::max({1.0, (r.Q * z).lpNorm<Eigen::Infinity>(),
                                   r.q.lpNorm<Eigen::Infinity>(),
                                   correction.lpNorm<Eigen::Infinity>()});
    double resid = (grad - correction).lpNorm<Eigen::Infinity>() / scale;
    for (std::size_t i = 0; i < active.size(); ++i) {
        const double slack = r.G.row(active[i]).dot(z) - r.h(active[i]);
        resid = std::max(resid, std::abs(multipliers[i] * slack) / scale);
        resid = std::max(resid, std::max(0.0, -multipliers[i]) / scale);
    }
    return resid;
}

}  // namespace

std::string status_name(SolveStatus status) {
    switch (status) {
        case SolveStatus::Optimal: return "optimal";
        case SolveStatus::Infeasible: return "infeasible";
        case SolveStatus::MaxIterations: return "max_iter";
    }
    return "?";
}

QpSolution solve(const QpProblem& qp) {
    const Reduced r = reduce(qp);
    QpSolution sol;

    // Dual active-set method: start at the unconstrained minimum, repeatedly
    // add the most violated constraint, taking full primal steps or partial
    // dual steps (dropping a blocking constraint) as dictated by the step
    // ratios.
    const Vec3 q_inv_diag = r.Q.diagonal().cwiseInverse();
    Vec3 z = -(q_inv_diag.asDiagonal() * r.q);
    std::vector<int> active;
    std::vector<double> u;  // multipliers of the active rows
    int iterations = 0;
    bool infeasible = false;

    auto most_violated = [&](double* worst) {
        int idx = -1;
        double min_slack = -1e-11;
        for (int i = 0; i < 12; ++i) {
            if (std::find(active.begin(), active.end(), i) != active.end()) continue;
            const double slack = r.G.row(i).dot(z) - r.h(i);
            if (slack < min_slack) {
                min_slack = slack;
                idx = i;
            }
        }
        if (worst) *worst = min_slack;
        return idx;
    };

    while (iterations < kMaxIterations) {
        ++iterations;
        const int p = most_violated(nullptr);
        if (p < 0) {
            break;  // primal feasible and dual feasible by construction
        }
        const Vec3 n_plus = r.G.row(p).transpose();
        double u_plus = 0.0;

        bool resolved = false;
        while (iterations < kMaxIterations) {
            // Projection operators for the current active set.
            const auto qa = static_cast<Eigen::Index>(active.size());
            Eigen::MatrixXd N(3, qa);
            for (Eigen::Index j = 0; j < qa; ++j) {
                N.col(j) = r.G.row(active[static_cast<std::size_t>(j)]).transpose();
            }
            Vec3 zstep;
            Eigen::VectorXd rstep(qa);
            if (qa == 0) {
                zstep = q_inv_diag.asDiagonal() * n_plus;
            } else {
                const Eigen::MatrixXd QinvN = q_inv_diag.asDiagonal() * N;
                const Eigen::MatrixXd M = N.transpose() * QinvN;
                rstep = M.ldlt().solve(N.transpose() * (q_inv_diag.asDiagonal() * n_plus));
                zstep = q_inv_diag.asDiagonal() * n_plus - QinvN * rstep;
            }

            const double step_norm = zstep.lpNorm<Eigen::Infinity>();
            const bool primal_move = step_norm > 1e-13;

            double t1 = kInf;
            int blocking = -1;
            for (Eigen::Index j = 0; j < qa; ++j) {
                if (rstep(j) > 1e-13) {
                    const double ratio = u[static_cast<std::size_t>(j)] / rstep(j);
                    if (ratio < t1) {
                        t1 = ratio;
                        blocking = static_cast<int>(j);
                    }
                }
            }
            double t2 = kInf;
            if (primal_move) {
                const double slack = r.G.row(p).dot(z) - r.h(p);
                const double dir = n_plus.dot(zstep);
                if (dir > 1e-16) {
                    t2 = -slack / dir;
                }
            }

            const double t = std::min(t1, t2);
            if (t == kInf) {
                infeasible = true;
                resolved = true;
                break;
            }

            if (primal_move) {
                z += t * zstep;
            }
            u_plus += t;
            for (Eigen::Index j = 0; j < qa; ++j) {
                u[static_cast<std::size_t>(j)] -= t * rstep(j);
            }

            if (t2 <= t1) {
                active.push_back(p);
                u.push_back(u_plus);
                resolved = true;
                break;
            }
            // Partial step: drop the blocking constraint and retry.
            active.erase(active.begin() + blocking);
            u.erase(u.begin() + blocking);
            ++iterations;
        }
        if (infeasible || !resolved) {
            break;
        }
    }

    sol.iterations = iterations;
    sol.v = z(0);
    sol.omega = z(1);
    sol.delta_omega = z(2);
    sol.delta_v = qp.v_ref - z(0);
    sol.objective = objective_of(qp, z(0), z(1), z(2));
    sol.active_set = active;
    std::sort(sol.active_set.begin(), sol.active_set.end());

    if (infeasible) {
        sol.status = SolveStatus::Infeasible;
        return sol;
    }

    double worst_violation = 0.0;
    for (int i = 0; i < 12; ++i) {
        worst_violation = std::max(worst_violation, r.h(i) - r.G.row(i).dot(z));
    }
    sol.kkt_residual = kkt_residual(r, z, active, u);
    if (iterations >= kMaxIterations || worst_violation > kFeasTol ||
        sol.kkt_residual > kKktTol) {
        sol.status = SolveStatus::MaxIterations;
    } else {
        sol.status = SolveStatus::Optimal;
    }
    return sol;
}

OracleResult brute_force_oracle(const QpProblem& qp, int resolution) {
    OracleResult best;
    best.objective = kInf;
    const InputBounds& b = qp.bounds;
    for (int i = 0; i < resolution; ++i) {
        const double v = b.v_min + (b.v_max - b.v_min) * i / (resolution - 1);
        for (int j = 0; j < resolution; ++j) {
            const double omega = b.omega_min + (b.omega_max - b.omega_min) * j / (resolution - 1);
            bool feasible = true;
            double delta_omega = 0.0;
            for (const ConstraintRow& row : qp.rows) {
                const double lhs = row.a_v * v + row.a_omega * omega;
                if (row.a_delta_omega == 0.0) {
                    if (lhs < row.rhs - 1e-9) {
                        feasible = false;
                        break;
                    }
                } else {
                    delta_omega = std::max(delta_omega, (row.rhs - lhs) / row.a_delta_omega);
                }
            }
            if (!feasible) continue;
            const double obj = objective_of(qp, v, omega, delta_omega);
            if (obj < best.objective) {
                best = OracleResult{true, v, omega, delta_omega, obj};
            }
        }
    }
    if (!best.feasible) {
        best.objective = kInf;
    }
    return best;
}

QpProblem assemble(const NeighborFrame& frame, const References& refs,
                   const LaneGeometry& geometry, const ControllerParams& params) {
    QpProblem qp;
    qp.weights = params.weights;
    qp.bounds = params.bounds;
    qp.v_ref = refs.v_ref;
    for (std::size_t k = 0; k < kAllBarriers.size(); ++k) {
        qp.rows[k] = barrier_row(kAllBarriers[k], frame, geometry, params.coord, params.gains).row;
    }
    qp.rows[7] = lyapunov_row(frame, refs.y_ref, params.gains).row;
    return qp;
}

ControlDecision control_step(const NeighborFrame& frame, const References& refs,
                             const LaneGeometry& geometry, const ControllerParams& params) {
    ControlDecision decision;
    StepDiagnostics& diag = decision.diagnostics;

    QpProblem qp;
    qp.weights = params.weights;
    qp.bounds = params.bounds;
    qp.v_ref = refs.v_ref;
    for (std::size_t k = 0; k < kAllBarriers.size(); ++k) {
        diag.barriers[k] = barrier_row(kAllBarriers[k], frame, geometry, params.coord, params.gains);
        qp.rows[k] = diag.barriers[k].row;
    }
    diag.lyapunov = lyapunov_row(frame, refs.y_ref, params.gains);
    qp.rows[7] = diag.lyapunov.row;

    diag.solution = solve(qp);
    if (diag.solution.status == SolveStatus::Optimal) {
        decision.input = ControlInput{diag.solution.v, diag.solution.omega};
    } else {
        diag.fallback = true;
        decision.input = ControlInput{params.bounds.v_min, 0.0};
    }
    return decision;
}

}  // namespace lanesafe
