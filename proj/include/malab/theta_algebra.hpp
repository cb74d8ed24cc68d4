#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "malab/family.hpp"

namespace malab {

// Admissible theta interval attached to a theorem family; endpoints may be
// open or closed, and fixed-theta families use a degenerate closed interval.
struct ThetaRange {
    double lo = 0.0, hi = 0.0;
    bool lo_open = true, hi_open = true;
    int N = 0;

    bool contains(double th) const;
    std::string describe() const;
};

// Range for a theorem tag: "8.1", "8.2", "9.1", "9.1cor", "10.1", "10.2".
ThetaRange theta_range_for(const std::string& theorem, int N);

// How a parameter solve arrived at its answer.
struct SolveTrace {
    std::string method; // "closed-form" | "bisection"
    int iterations = 0;
    std::vector<std::array<double, 2>> brackets;
    double final_residual = 0.0;
};

// u = C1 |y|^2 + C2 t^{2 - 1/theta} + C3 t + C4 on t > 0, theta in (0, 1/2)
ConvexFamily make_thm81(int N, double theta, double C1, double C2, double C3, double C4);

// u = C1 |y|^2 / t + C2 t^{n+2-1/theta} + C3 t + C4 on t > 0, theta in (0, 1/(N+1))
ConvexFamily make_thm82(int N, double theta, double C1, double C2, double C3, double C4);

// Solutions phi of the separable profile equation t zeta' = theta (zeta + b1)^2 - b2
// with zeta = t phi''' / phi''. Three branches keyed by beta3:
//   beta3 == 0     -> phi = beta4 t^{n+2} + beta5 t + beta6
//   beta3 == -inf  -> phi = beta4 t^{n+2-1/theta} + beta5 t + beta6
//   beta3 < 0      -> phi'' = beta4 t^n (t - 1/beta3)^{-1/theta}; phi itself by
//                     adaptive quadrature of the repeated integral
CurvePtr riccati_phi(int n, double theta, double beta3, double beta4, double beta5,
                     double beta6);

// u = e^{|y|^alpha + t} at theta = (N-1)/N; alpha is 2, or (N-1)(N-2) for N >= 3
ConvexFamily make_thm91(int N, double alpha);
double thm91_theta(int N);

// u = e^{y_1^2 + t} + quadratic in the remaining y; solution at theta = 1/2
ConvexFamily make_cor91(int n, Eigen::MatrixXd A, Eigen::VectorXd B, double C);

enum class ProductVariant { HalfSpace, Full };

// Theta for which the product family with the given exponents is a solution.
double theta_of_alpha(const Eigen::VectorXd& alpha, int N, ProductVariant variant);

// Symmetric-exponent solves: alpha = a * ones. The half-space case inverts the
// solvability condition in closed form; the full case bisects on the ray.
std::pair<Eigen::VectorXd, SolveTrace> solve_alpha_halfspace(double theta, int N);
std::pair<Eigen::VectorXd, SolveTrace> solve_alpha_full(double theta, int N);

// (4 theta - 2) beta gamma + (N^2-4)(theta - (N+1)/(N+2)) beta - N (N theta - 1)
// with beta = N s + 1, gamma = N / s + 1: the symmetric-ray solvability gap.
double symmetric_full_condition(double s, double theta, int N);

// Critical point and minimum of the symmetric-ray condition for
// theta > (N-1)/N, where no root exists; returns (s*, F(s*)).
std::pair<double, double> symmetric_F_min(double theta, int N);

// (lower, upper) bounds on the largest dimension admitting nontrivial
// solutions at the given theta in (0, 1).
std::pair<int, int> critical_dimension_bounds(double theta);

} // namespace malab
