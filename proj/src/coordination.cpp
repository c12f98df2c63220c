#include "lanesafe/coordination.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lanesafe {

namespace {

// Overflow-safe logistic 1/(1+e^-z) and its first two derivatives.
double logistic(double z) {
    if (z >= 0.0) {
        return 1.0 / (1.0 + std::exp(-z));
    }
    const double e = std::exp(z);
    return e / (1.0 + e);
}

// L'(z) = e/(1+e)^2 with e = exp(-|z|); forming L*(1-L) instead would
// cancel catastrophically in the tails.
double logistic_d1(double z) {
    const double e = std::exp(-std::abs(z));
    const double denom = 1.0 + e;
    return e / (denom * denom);
}

// L''(z) = L'(z)*(1-2L(z)); 1-2L(|z|) = (e-1)/(1+e), odd in z.
double logistic_d2(double z) {
    const double e = std::exp(-std::abs(z));
    const double denom = 1.0 + e;
    const double d1 = e / (denom * denom);
    const double tail = (e - 1.0) / denom;
    return z >= 0.0 ? d1 * tail : -d1 * tail;
}

constexpr double kLambdaLinearSlope = 0.5 / 0.9;
constexpr double kLambdaBreakLow = 0.9;
constexpr double kLambdaBreakHigh = 1.0;

}  // namespace

double theta(double x1, double x2, double v2, double tau_d) {
    if (!(v2 > 0.0)) {
        throw std::domain_error("theta: v2 must be positive");
    }
    if (x1 < x2) {
        throw std::domain_error("theta: x1 < x2 violates slot classification");
    }
    return (x1 - x2) / (tau_d * v2);
}

double lambda(double theta, const LambdaParams& p) {
    if (theta <= kLambdaBreakLow) {
        return kLambdaLinearSlope * theta;
    }
    if (theta <= kLambdaBreakHigh) {
        const double u = theta + p.a2;
        return p.a1 * u * u * u + p.a3;
    }
    return logistic(p.beta1 * (theta + p.beta2)) + p.beta3;
}

double lambda_prime(double theta, const LambdaParams& p) {
    if (theta <= kLambdaBreakLow) {
        return kLambdaLinearSlope;
    }
    if (theta <= kLambdaBreakHigh) {
        const double u = theta + p.a2;
        return 3.0 * p.a1 * u * u;
    }
    return p.beta1 * logistic_d1(p.beta1 * (theta + p.beta2));
}

double lambda_second(double theta, const LambdaParams& p) {
    if (theta <= kLambdaBreakLow) {
        return 0.0;
    }
    if (theta <= kLambdaBreakHigh) {
        return 6.0 * p.a1 * (theta + p.a2);
    }
    return p.beta1 * p.beta1 * logistic_d2(p.beta1 * (theta + p.beta2));
}

double rho(double y1, double y2, double w) {
    if (!(w > 0.0)) {
        throw std::domain_error("rho: lane width must be positive");
    }
    if (y1 < y2) {
        throw std::domain_error("rho: y1 < y2 violates slot classification");
    }
    return (y1 - y2) / w;
}

double sigma(double rho, const SigmaParams& p) {
    return p.s1 * logistic(-p.s2 * (rho - p.s3)) - p.s4;
}

double sigma_prime(double rho, const SigmaParams& p) {
    return -p.s1 * p.s2 * logistic_d1(p.s2 * (rho - p.s3));
}

bool ValidationReport::all_pass() const {
    return std::all_of(checks.begin(), checks.end(),
                       [](const ValidationCheck& c) { return c.pass; });
}

bool ValidationReport::any_warning() const {
    return std::any_of(checks.begin(), checks.end(),
                       [](const ValidationCheck& c) { return c.warn; });
}

namespace {

constexpr int kGridPerBranch = 2000;

std::vector<double> grid(double lo, double hi, int n) {
    std::vector<double> pts;
    pts.reserve(n + 1);
    for (int i = 0; i <= n; ++i) {
        pts.push_back(lo + (hi - lo) * i / n);
    }
    return pts;
}

}  // namespace

ValidationReport validate(const CoordinationConfig& config, double continuity_tol) {
    ValidationReport report;
    report.continuity_tol = continuity_tol;
    const LambdaParams& lp = config.lambda;
    const SigmaParams& sp = config.sigma;

    auto add = [&](ValidationCheck c) { report.checks.push_back(std::move(c)); };

    {
        ValidationCheck c{.name = "tau_d positive"};
        c.pass = config.tau_d > 0.0;
        c.worst_value = config.tau_d;
        add(c);
    }
    {
        ValidationCheck c{.name = "sigma params positive"};
        c.pass = sp.s1 > 0.0 && sp.s2 > 0.0 && sp.s3 > 0.0 && sp.s4 > 0.0;
        add(c);
    }

    {
        ValidationCheck c{.name = "lambda(0) = 0"};
        c.worst_value = lambda(0.0, lp);
        c.pass = c.worst_value == 0.0;
        add(c);
    }
    {
        ValidationCheck c{.name = "lambda(0.9) = 0.5"};
        c.worst_point = 0.9;
        c.worst_value = lambda(0.9, lp);
        c.pass = std::abs(c.worst_value - 0.5) <= 1e-9;
        add(c);
    }
    {
        ValidationCheck c{.name = "lambda monotone nondecreasing on [0, 3]"};
        double prev = lambda(0.0, lp);
        const auto pts = grid(0.0, 3.0, 3 * kGridPerBranch);
        for (std::size_t i = 1; i < pts.size(); ++i) {
            const double cur = lambda(pts[i], lp);
            if (cur < prev - 1e-12 && cur - prev < c.worst_value) {
                c.pass = false;
                c.worst_point = pts[i];
                c.worst_value = cur - prev;
            }
            prev = cur;
        }
        if (!c.pass) {
            c.message = "decrease of " + std::to_string(c.worst_value);
        }
        add(c);
    }
    {
        // Eq-band above 1: strict [1, 1.01], accepted up to continuity_tol.
        ValidationCheck c{.name = "lambda in [1, 1.01] for theta >= 1"};
        double worst_excess = 0.0;
        for (double t : grid(1.0, 5.0, 4 * kGridPerBranch)) {
            const double val = lambda(t, lp);
            const double excess = std::max(1.0 - val, val - 1.01);
            if (excess > worst_excess) {
                worst_excess = excess;
                c.worst_point = t;
                c.worst_value = val;
            }
        }
        c.pass = worst_excess <= continuity_tol;
        c.warn = c.pass && worst_excess > 1e-9;
        if (c.warn) {
            c.message = "band exceeded by " + std::to_string(worst_excess) +
                        " (within continuity tolerance)";
        }
        add(c);
    }

    auto branch_gap = [&](const char* name, double at, double left, double right) {
        ValidationCheck c{.name = name};
        const double gap = std::abs(right - left);
        c.worst_point = at;
        c.worst_value = gap;
        c.pass = gap <= continuity_tol;
        c.warn = c.pass && gap > 1e-9;
        if (c.warn) {
            c.message = "value gap " + std::to_string(gap) + " (within continuity tolerance)";
        }
        add(c);
    };
    branch_gap("lambda continuity at 0.9", 0.9, kLambdaLinearSlope * 0.9,
               lp.a1 * std::pow(0.9 + lp.a2, 3) + lp.a3);
    branch_gap("lambda continuity at 1", 1.0, lp.a1 * std::pow(1.0 + lp.a2, 3) + lp.a3,
               logistic(lp.beta1 * (1.0 + lp.beta2)) + lp.beta3);

    {
        ValidationCheck c{.name = "sigma strictly decreasing on [0, 1.5]"};
        double prev = sigma(0.0, sp);
        for (double r : grid(0.0, 1.5, 2 * kGridPerBranch)) {
            if (r == 0.0) continue;
            const double cur = sigma(r, sp);
            if (cur >= prev) {
                c.pass = false;
                c.worst_point = r;
                c.worst_value = cur - prev;
            }
            prev = cur;
        }
        add(c);
    }
    {
        ValidationCheck c{.name = "sigma <= 0 for rho >= 0.9"};
        for (double r : grid(0.9, 3.0, 2 * kGridPerBranch)) {
            const double val = sigma(r, sp);
            if (val > c.worst_value) {
                c.pass = false;
                c.worst_point = r;
                c.worst_value = val;
            }
        }
        add(c);
    }
    {
        ValidationCheck c{.name = "sigma >= 0.9 for rho <= 0.5"};
        double worst = 1e300;
        for (double r : grid(0.0, 0.5, kGridPerBranch)) {
            const double val = sigma(r, sp);
            if (val < worst) {
                worst = val;
                c.worst_point = r;
                c.worst_value = val;
            }
        }
        c.pass = worst >= 0.9;
        add(c);
    }
    {
        ValidationCheck c{.name = "sigma in [1, 1.01] for rho <= 0.3"};
        double worst_excess = -1e300;
        for (double r : grid(0.0, 0.3, kGridPerBranch)) {
            const double val = sigma(r, sp);
            const double excess = std::max(1.0 - val, val - 1.01);
            if (excess > worst_excess) {
                worst_excess = excess;
                c.worst_point = r;
                c.worst_value = val;
            }
        }
        c.pass = worst_excess <= 0.0;
        add(c);
    }
    return report;
}

LambdaParams refit_lambda_cubic(const LambdaParams& p) {
    // Conditions: c(0.9) = 0.5, c'(0.9) = linear slope, c(1) = sigmoid(1),
    // with c(t) = a1*(t + a2)^3 + a3. Substituting u = 0.9 + a2 reduces to
    // a quadratic in u.
    const double s = kLambdaLinearSlope;
    const double target1 = logistic(p.beta1 * (1.0 + p.beta2)) + p.beta3;
    const double rise = target1 - 0.5;
    // a1*((u+0.1)^3 - u^3) = rise with 3*a1*u^2 = s:
    // (s/3)*(0.3 + 0.03/u + 0.001/u^2) = rise.
    const double k = 3.0 * rise / s;
    // (k - 0.3)*u^2 - 0.03*u - 0.001 = 0.
    const double qa = k - 0.3;
    const double qb = -0.03;
    const double qc = -0.001;
    const double disc = qb * qb - 4.0 * qa * qc;
    if (!(qa > 0.0) || !(disc > 0.0)) {
        throw std::domain_error("refit_lambda_cubic: sigmoid target leaves no valid cubic");
    }
    const double u = (-qb + std::sqrt(disc)) / (2.0 * qa);
    LambdaParams out = p;
    out.a2 = u - 0.9;
    out.a1 = s / (3.0 * u * u);
    out.a3 = 0.5 - out.a1 * u * u * u;
    return out;
}

}  // namespace lanesafe
