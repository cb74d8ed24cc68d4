#pragma once

#include <string>
#include <utility>

#include "malab/family.hpp"
#include "malab/inequality.hpp"

namespace malab {

// Roots 0 < l1 < 1/2 < l2 of l^2 - l + gamma(gamma+1) = 0. Real and distinct
// exactly when 0 < gamma < (sqrt(2)-1)/2, which is also the admissible range
// for the slab profile exponent.
std::pair<double, double> lambda_roots(double gamma);

// seam position with pinch value -2/3, the midpoint of the admissible band
double default_sigma0(double gamma);

// Wall profile: x^gamma up to sigma0, then continued so that the pinch
// quantity zeta''/zeta - 2 zeta'^2/zeta^2 ramps smoothly from its seam value
// -gamma(gamma+1)/sigma0^2 to -1/2 and stays there. The seam value must lie
// in [-3/4, -1/2); the continued pinch stays in [-1, -1/4), which keeps the
// log-derivative Riccati flow bounded and zeta positive and decaying.
CurvePtr build_zeta(double gamma, double sigma0);

struct EtaProfile {
    CurvePtr eta;
    double omega;  // first zero of eta beyond sigma0
};

// Ceiling profile: x^lambda up to sigma0, then the solution of
// eta'' = pinch(x) eta + g2 with g2 frozen at its seam value
// (lambda(lambda-1) + gamma(gamma+1)) sigma0^{lambda-2} < 0. The forcing keeps
// eta strictly concave relative to the pinch oscillator, so it crosses zero;
// the crossing is the slab extent omega.
EtaProfile build_eta(double gamma, double lambda, const CurvePtr& zeta, double sigma0);

// zeta(x1)|x'|^2 - eta(x1) on its natural domain: convex, vanishing on the
// curved boundary, with Monge-Ampere density bounded between positive
// constants near x1 = 0, yet only C^gamma in the wall direction at the edge.
struct SlabCounterexample {
    int N = 0;
    double gamma = 0.0;
    double lambda = 0.0;
    double sigma0 = 0.0;
    double omega = 0.0;
    CurvePtr zeta;
    CurvePtr eta;
    ConvexFamily u;

    std::string to_json(int profile_samples = 200) const;
};

// Full construction with the admissibility gates: N >= 5,
// gamma in (1/N, (sqrt(2)-1)/2), lambda strictly between the roots and > gamma.
// Verifies the convexity inequality and the pinch band on a grid before
// returning.
SlabCounterexample assemble_slab(int N, double gamma, double lambda);

// integral of det D^2 u over the slab domain via the axisymmetric reduction
// to (x1, |x'|), graded toward x1 = 0
double slab_mass(const SlabCounterexample& s, int level = 3, int workers = 1);

// Holder quotient sampler specialized to the slab geometry: pairs concentrate
// on the wall scale 2^{-level} sigma0 and on rim/axis contrasts where the
// quotient is largest
HolderReport slab_holder_probe(const SlabCounterexample& s, double alpha, int levels = 4,
                               int pairs_per_level = 4000, std::uint64_t seed = 1);

} // namespace malab
