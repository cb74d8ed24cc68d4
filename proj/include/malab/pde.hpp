#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "malab/family.hpp"

namespace malab {

// Residual of the fourth-order operator u^{ij} D_ij w at one point, where
// w = (det D^2 u)^{-theta}. The scale is the largest |u^{ij} (D^2 w)_{ij}|
// among the individual contraction terms, so normalized = raw / scale is
// dimensionless and comparable across families of very different magnitudes.
struct ResidualReport {
    Eigen::VectorXd point;
    double theta = 0.0;
    double det = 0.0;
    double w = 0.0;
    double raw = 0.0;
    double scale = 0.0;
    double normalized = 0.0;
};

double w_value(const ConvexFamily& u, double theta, const Eigen::VectorXd& x);

ResidualReport residual(const ConvexFamily& u, double theta, const Eigen::VectorXd& x);

// Same computation driven by a caller-supplied degree-4 jet of u at x.
ResidualReport residual_from_jet(const Jet& u4, double theta, const Eigen::VectorXd& x);

// Jet of v(x) = u(A x) at the matching base point, given the jet of u at A x.
// Used to test affine invariance of the residual for det A = 1.
Jet jet_linear_image(const Jet& u_at_image, const Eigen::MatrixXd& A);

// Deterministic residual sweep over admissible sample points. Per-point rows
// depend only on (family, theta, seed, index), never on the worker count.
std::vector<ResidualReport> residual_scan(const ConvexFamily& u, double theta, int npts,
                                          std::uint64_t seed, int workers = 1);

struct ScanSummary {
    int points = 0;
    double max_normalized = 0.0;
    double max_raw = 0.0;
    double min_det = 0.0;
};
ScanSummary summarize_scan(const std::vector<ResidualReport>& rows);

std::string residual_csv(const std::vector<ResidualReport>& rows);

// Closed-form reductions. Each one evaluates the algebraic factor that
// multiplies the positive prefactor of the raw residual on its family, so a
// zero of the reduction is a zero of the residual. They are independent
// oracles for the generic jet path above, not shortcuts used by it.

struct WarrenReduction {
    double A = 0.0, B = 0.0, C = 0.0;
};
WarrenReduction warren_reduction(const CurvePtr& eta, const CurvePtr& phi, double theta, int n,
                                 double t);
// Full predicted raw residual theta (2 eta)^{-n theta - 1} psi^{-theta-3} (A r^4 + B r^2 + C)
double warren_predicted_raw(const ConvexFamily& u, double theta, const Eigen::VectorXd& x);

struct TWCondition {
    double B1 = 0.0, B2 = 0.0;
};
TWCondition tw_exponential_condition(double alpha, double theta, int n);
// Predicted raw residual of u = e^{|y|^alpha + t}
double exp_power_predicted_raw(int n, double alpha, double theta, const Eigen::VectorXd& x);

// Solution-manifold left-hand sides for the product families: zero exactly on
// the parameter sets where the families solve the equation.
double product_halfspace_residual(const Eigen::VectorXd& alpha, double theta, int N);
double product_full_residual(const Eigen::VectorXd& alpha, double theta, int N);
double product_halfspace_predicted_raw(const Eigen::VectorXd& alpha, double theta,
                                       const Eigen::VectorXd& x);
double product_full_predicted_raw(const Eigen::VectorXd& alpha, double theta,
                                  const Eigen::VectorXd& x);

} // namespace malab
