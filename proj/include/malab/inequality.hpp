#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "malab/domain.hpp"
#include "malab/family.hpp"
#include "malab/measure.hpp"
#include "malab/normal_image.hpp"

namespace malab {

using ScalarField = std::function<double(const Eigen::VectorXd&)>;

struct PairOptions {
    int levels = 4;            // refinement passes; each one samples closer pairs
    int pairs_per_level = 4000;
    std::uint64_t seed = 1;
    int workers = 1;
    bool polish = true;        // pattern-search the best pair after sampling
};

// Sampled Holder quotient sup |u(x)-u(y)| / |x-y|^alpha. level_sups records the
// running supremum after each pass, so a growth trend across passes is visible
// even when no single finite value is conclusive. The witness pair is polished
// by a local pattern search when opt.polish is set; level_sups stays raw.
struct HolderReport {
    double sup = 0.0;
    Eigen::VectorXd x, y;
    std::vector<double> level_sups;
};

HolderReport holder_seminorm(const ScalarField& u, const Domain& omega, double alpha,
                             const PairOptions& opt = {});
HolderReport holder_seminorm(const ConvexFamily& u, const Domain& omega, double alpha,
                             const PairOptions& opt = {});

// One inequality evaluation. rhs carries the geometric quantity only; for the
// checks that fix a universal constant (the enclosing/inscribed radius bounds)
// pass/margin report the comparison with that constant included.
struct InequalityReport {
    std::string check;
    double lhs = 0.0;
    double rhs = 0.0;
    double ratio = 0.0;                   // lhs / rhs
    bool pass = true;
    double margin = 0.0;
    std::vector<Eigen::VectorXd> witness; // extremal points found by the sampler
    std::string grid;                     // sampling/quadrature resolution used
};

// check, family, grid, lhs, rhs, ratio
std::string inequality_csv_row(const InequalityReport& r, const std::string& family);

// [u]_{1/N}^N  vs  R^{N-1} * mass(Omega) for u vanishing on the boundary;
// R is the half-diameter of Omega
InequalityReport check_c1n(const ConvexFamily& u, const Domain& omega,
                           const PairOptions& opt = {}, int quad_level = 3);
InequalityReport check_c1n_pl(const PLConvex& p, const Domain& omega,
                              const PairOptions& opt = {});

// sup_{Omega_s} |Du|  vs  (diam(Omega_t)/(t-s))^{N-1} * mass(Omega_t),
// with Omega_r = {u < r}, s < t <= 0, u = 0 on the boundary of Omega
InequalityReport check_gradient_sublevel(const ConvexFamily& u, const Domain& omega,
                                         double s, double t, int directions = 0,
                                         int level = 3, int workers = 1);

// |Du(x)|  vs  (R/dist(x, boundary))^{N-1} * mass(Omega) at an interior point
InequalityReport check_gradient_interior(const ConvexFamily& u, const Domain& omega,
                                         const Eigen::VectorXd& x, int level = 3,
                                         int workers = 1);

// max over x in Omega_s of (h/d)(h/D)^{N-1}  vs  mass(Omega_t), where
// h = t - u(x), d = dist(x, boundary of Omega_t), D = diam(Omega_t)
InequalityReport check_cone_lemma(const ConvexFamily& u, const Domain& omega,
                                  double t, double s, int directions = 0,
                                  int level = 3, int workers = 1);

// enclosing radius: R2^{-N} <= omega_N^{-1} * mass(Omega) for u + shift with
// boundary value 1 and a critical zero at the origin; R2 = max |x| on the boundary
InequalityReport check_lemma42(const ConvexFamily& u, const Domain& omega,
                               double shift = 0.0, int level = 3, int workers = 1);

// inscribed radius: R1^{-N} >= (2^N omega_N)^{-1} (1-sigma)^N * mass(sigma Omega),
// same normalization; R1 = min |x| on the boundary, 0 < sigma < 1
InequalityReport check_lemma43(const ConvexFamily& u, const Domain& omega, double sigma,
                               double shift = 0.0, int level = 3, int workers = 1);

// minimizer of a convex family over the domain, by damped Newton from the center
Eigen::VectorXd find_min(const ConvexFamily& u, const Domain& omega);

// star-shaped polytope sample of {u < t}, rays shot from the minimizer;
// requires min u < t and u >= t somewhere along every ray inside omega
Domain level_set_polytope(const ConvexFamily& u, const Domain& omega, double t,
                          int directions = 0, int workers = 1);

// distance to the domain boundary from an interior point; exact for balls and
// boxes, a dense support-plane estimate for polytopes
double boundary_distance(const Domain& dom, const Eigen::VectorXd& x);

} // namespace malab
