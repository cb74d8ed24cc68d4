#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "malab/domain.hpp"
#include "malab/family.hpp"

namespace malab {

// Nodal samples of a convex function on a uniform box grid. The implied
// piecewise-linear interpolant is the discretization vehicle for the
// subgradient image; only the nodal values ever enter the computation.
struct PLConvex {
    Eigen::VectorXd lo, hi;
    int dim = 0;
    int nodes = 0;               // per axis
    std::vector<double> values;  // row major, last axis fastest

    std::size_t node_count() const;
    double spacing(int axis) const;
    Eigen::VectorXd node_point(std::size_t flat) const;
};

PLConvex pl_sample(const std::function<double(const Eigen::VectorXd&)>& f,
                   Eigen::VectorXd lo, Eigen::VectorXd hi, int nodes_per_axis);
PLConvex pl_sample(const ConvexFamily& u, const Domain& box, int nodes_per_axis);

// Count of nodal second differences below -tol*(1 + max|u|), over axis and
// diagonal directions. Zero for samples of any convex function.
int convexity_violations(const PLConvex& p, double rel_tol = 1e-9);

// N-volume of the subgradient image of omega: sweep a uniform gradient-space
// grid sized from the observed nodal gradient range padded 10 percent, mark p
// whose best supporting node lies in omega clear of its boundary, sum cell
// volumes. Brute force, dim <= 3.
double normal_image_area(const PLConvex& p, const Domain& omega, int pgrid_nodes = 0,
                         int workers = 1);

} // namespace malab
