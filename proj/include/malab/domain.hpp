#pragma once

#include <cstddef>
#include <functional>

#include <Eigen/Dense>

#include "malab/errors.hpp"

namespace malab {

// Bounded convex integration/sampling regions. Balls and boxes are exact;
// polytopes are star-shaped samples of a convex boundary (base point, unit
// ray directions, hit radii), the form produced by sub-level sampling.
// OrthantBox marks boxes whose low faces sit on singular coordinate planes,
// so quadrature grades toward them.
class Domain {
public:
    enum class Kind { Ball, Box, OrthantBox, Polytope };

    static Domain ball(Eigen::VectorXd center, double radius);
    static Domain box(Eigen::VectorXd lo, Eigen::VectorXd hi);
    static Domain orthant_box(Eigen::VectorXd lo, Eigen::VectorXd hi); // 0 < lo < hi
    static Domain polytope(Eigen::VectorXd base, Eigen::MatrixXd dirs, Eigen::VectorXd radii);

    Kind kind() const { return kind_; }
    int dim() const { return dim_; }

    double diameter() const;
    double inradius() const; // exact for balls/boxes, ray-sample estimate for polytopes
    double volume() const;
    bool contains(const Eigen::VectorXd& x, double margin = 0.0) const;

    // scale by s about the anchor; boxes stay boxes, polytopes require the
    // anchor to be their base point
    Domain dilate(double s, const Eigen::VectorXd& anchor) const;

    const Eigen::VectorXd& center() const { return a_; } // ball center / polytope base
    double radius() const { return radius_; }
    const Eigen::VectorXd& lo() const { return a_; }
    const Eigen::VectorXd& hi() const { return b_; }
    const Eigen::MatrixXd& dirs() const { return dirs_; }
    const Eigen::VectorXd& radii() const { return radii_; }

private:
    Domain() = default;
    Kind kind_ = Kind::Ball;
    int dim_ = 0;
    Eigen::VectorXd a_, b_;  // ball center / box corners / polytope base
    double radius_ = 0.0;
    Eigen::MatrixXd dirs_;   // rows are unit directions
    Eigen::VectorXd radii_;
};

using QuadVisitor = std::function<void(const Eigen::VectorXd&, double)>;

// Deterministic sweep of the level-dependent quadrature rule; node order is a
// pure function of (domain, level). Levels refine: 0 is the base rule.
void quad_sweep(const Domain& dom, int level, const QuadVisitor& visit);

// node count of the sweep, for preallocating per-node buffers
std::size_t quad_size(const Domain& dom, int level);

// i-th node/weight without running the whole sweep (used by parallel maps)
void quad_node(const Domain& dom, int level, std::size_t i, Eigen::VectorXd& x, double& w);

// M quasi-uniform unit directions: equal angles in the plane, spherical
// Fibonacci lattice for dim 3, fixed-seed normalized Gaussians above
Eigen::MatrixXd sphere_directions(int dim, int M);

double unit_ball_volume(int dim);

} // namespace malab
