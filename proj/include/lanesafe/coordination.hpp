#pragma once

#include <string>
#include <vector>

namespace lanesafe {

/// Parameters of the piecewise longitudinal coordination function lambda:
/// linear up to 0.9, cubic a1*(theta+a2)^3 + a3 on (0.9, 1], shifted
/// logistic 1/(1+exp(-beta1*(theta+beta2))) + beta3 above 1.
struct LambdaParams {
    double a1 = 234.14;
    double a2 = -0.872;
    double a3 = 0.4949;
    double beta1 = 1209.2;
    double beta2 = -0.9962;
    double beta3 = 0.01;
};

/// Parameters of the lateral coordination sigmoid
/// sigma(rho) = s1 / (1 + exp(s2*(rho - s3))) - s4.
struct SigmaParams {
    double s1 = 1.03;
    double s2 = 16.0;
    double s3 = 0.64;
    double s4 = 0.02;
};

struct CoordinationConfig {
    double tau_d = 0.9;  // safety-time constant [s]
    LambdaParams lambda;
    SigmaParams sigma;
};

/// Fraction of the safety distance tau_d * v2 covered by the gap x1 - x2.
/// Throws std::domain_error for v2 <= 0 or x1 < x2 (corrupt frame).
double theta(double x1, double x2, double v2, double tau_d);

double lambda(double theta, const LambdaParams& p);
/// Piecewise analytic derivative; at the breakpoints the left branch is used.
double lambda_prime(double theta, const LambdaParams& p);
double lambda_second(double theta, const LambdaParams& p);

/// Fraction of a lane width covered by the lateral gap y1 - y2.
/// Throws std::domain_error for y1 < y2 or w <= 0.
double rho(double y1, double y2, double w);

double sigma(double rho, const SigmaParams& p);
double sigma_prime(double rho, const SigmaParams& p);

struct ValidationCheck {
    std::string name;
    bool pass = true;
    bool warn = false;          // inside continuity tolerance but outside the strict band
    double worst_point = 0.0;   // argument of the worst offending grid point
    double worst_value = 0.0;
    std::string message;
};

struct ValidationReport {
    std::vector<ValidationCheck> checks;
    double continuity_tol = 0.02;

    bool all_pass() const;
    bool any_warning() const;
};

/// Grid-check the lambda/sigma axioms (>= 1000 points per branch):
/// lambda(0) = 0, lambda(0.9) = 0.5, lambda monotone nondecreasing,
/// lambda within [1, 1.01] (up to continuity_tol) for theta >= 1, value
/// continuity at both breakpoints within continuity_tol; sigma strictly
/// decreasing, sigma <= 0 for rho >= 0.9, sigma >= 0.9 for rho <= 0.5,
/// sigma within [1, 1.01] for rho <= 0.3.
ValidationReport validate(const CoordinationConfig& config, double continuity_tol = 0.02);

/// Re-solve the cubic coefficients (a1, a2, a3) so the cubic matches the
/// linear branch in value and slope at 0.9 and the sigmoid value at 1.
/// (All four value+slope conditions cannot hold with three coefficients;
/// the slope residual at 1 remains and shows up in the validation report.)
LambdaParams refit_lambda_cubic(const LambdaParams& p);

}  // namespace lanesafe
