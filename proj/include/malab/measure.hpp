#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "malab/domain.hpp"
#include "malab/family.hpp"

namespace malab {

// det D^2 u at a point: closed form when the family has one, else the jet Hessian
double det_hessian_at(const ConvexFamily& u, const Eigen::VectorXd& x);

struct MassReport {
    double value = 0.0;
    double error_estimate = 0.0;      // change over the last refinement step
    int level = 0;                    // finest quadrature level used
    std::vector<double> levels;       // value at each level, coarse to fine
};

// Quadrature of det D^2 u over dom, refined level by level. Throws
// numeric_error when successive refinements keep growing geometrically,
// the signature of a non-integrable determinant on the closure.
MassReport ma_mass(const ConvexFamily& u, const Domain& dom, int max_level = 3,
                   int workers = 1);

// Region below the tangent plane lifted by t: {x : u(x) - u(x0) - Du(x0)(x-x0) < t}.
// Boundary sampled by radial bisection from x0.
struct SubLevelSet {
    Eigen::VectorXd x0;
    double t = 0.0;
    Eigen::MatrixXd directions;  // rows are unit vectors
    Eigen::VectorXd radii;
    double diameter = 0.0;
    double volume = 0.0;

    Eigen::VectorXd vertex(int m) const;
    Domain polytope() const;
    std::string to_json() const;
};

// directions = 0 picks the default count for the dimension (256 in the plane,
// 2048 in space, 64 dim^2 above). Radial bisection to 1e-10 relative.
SubLevelSet sublevel(const ConvexFamily& u, const Eigen::VectorXd& x0, double t,
                     int directions = 0, int workers = 1);

// mass(S) / mass(sigma S), the dilation taken about the base point x0
double doubling_ratio(const ConvexFamily& u, const SubLevelSet& S, double sigma,
                      int level = 3, int workers = 1);

// mean of det D^2 u over S
double average_density(const ConvexFamily& u, const SubLevelSet& S, int level = 3,
                       int workers = 1);

// v(z/2) / v(z) for v(x) = u(x0 + x) - u(x0) - Du(x0) x; at most 1/2 for convex u
double halving_ratio(const ConvexFamily& u, const Eigen::VectorXd& x0,
                     const Eigen::VectorXd& z);

// {x : (x - c)^T M (x - c) <= 1}
struct Ellipsoid {
    Eigen::MatrixXd M;
    Eigen::VectorXd c;
};

// Approximate minimum-volume enclosing ellipsoid by Khachiyan's barycentric
// coordinate descent on the lifted point set, stopping at (1 + eps)
Ellipsoid mvee(const std::vector<Eigen::VectorXd>& pts, double eps = 1e-4,
               int max_iter = 200000);

struct JohnNormalization {
    Eigen::MatrixXd A;       // unit determinant
    double lambda = 1.0;     // full map is lambda * A about the center
    Eigen::VectorXd center;
    double rho = 1.0;        // B(1/rho) inside the image inside B(rho)

    Eigen::VectorXd apply(const Eigen::VectorXd& x) const {
        return lambda * (A * (x - center));
    }
};

JohnNormalization john_normalize(const SubLevelSet& S);

std::string family_tag_name(ConvexFamily::Tag tag);
std::string domain_kind_name(Domain::Kind kind);

// CSV row: family, domain, grid, value, error_estimate
std::string mass_csv_row(const ConvexFamily& u, const Domain& dom, const MassReport& rep);

} // namespace malab
