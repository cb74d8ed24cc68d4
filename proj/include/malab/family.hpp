#pragma once

#include <optional>

#include <Eigen/Dense>

#include "malab/curve.hpp"
#include "malab/jet.hpp"

namespace malab {

enum class Convexity { StrictlyConvex, Degenerate, NotConvex };

struct ConvexityReport {
    Convexity kind;
    double min_eig;
    double max_eig;
};

// Catalogue of closed-form convex functions: quadratics plus the separable,
// exponential, product and slab constructions. Coordinates are x = (y, t)
// with t last for the families that single out a distinguished axis.
// Immutable after construction; evaluation is pure.
class ConvexFamily {
public:
    enum class Tag {
        Quadratic,
        WarrenSeparable,
        TWSeparable,
        ExpPower,
        HalfExp,
        ProductHalfSpace,
        ProductFull,
        PowerRadial,
        SlabSeparable
    };

    // u = x'Qx + b'x + c with the Hessian equal to 2Q (so Q = I/2 gives the
    // unit Hessian); Q must be symmetric positive semidefinite
    static ConvexFamily quadratic(Eigen::MatrixXd Q, Eigen::VectorXd b, double c);
    // u = |y|^2 eta(t) + phi(t), y in R^n
    static ConvexFamily warren(int n, CurvePtr eta, CurvePtr phi);
    // u = phi(|y|) eta(t), y in R^n
    static ConvexFamily tw(int n, CurvePtr phi, CurvePtr eta);
    // u = exp(|y|^alpha + t), y in R^n, alpha > 1
    static ConvexFamily exp_power(int n, double alpha);
    // u = exp(y_1^2 + t) + q'Aq + B'q + C over q = (y_2..y_n); A positive definite
    static ConvexFamily half_exp(int n, Eigen::MatrixXd A, Eigen::VectorXd B, double C);
    // u = prod_i y_i^{-alpha_i} e^t on y_i > 0
    static ConvexFamily product_halfspace(Eigen::VectorXd alpha);
    // u = prod_i y_i^{-alpha_i} on the positive orthant, dimension alpha.size()
    static ConvexFamily product_full(Eigen::VectorXd alpha);
    // u = |x|^beta - 1, beta > 1
    static ConvexFamily power_radial(int N, double beta);
    // u = zeta(x_1)|x'|^2 - eta(x_1) on {0 < x_1 < omega, zeta|x'|^2 < eta}
    static ConvexFamily slab(int n, CurvePtr zeta, CurvePtr eta, double omega);

    Tag tag() const { return tag_; }
    int dim() const { return dim_; }
    int n() const { return dim_ - 1; } // y-dimension for (y,t) families

    // strict-interior admissibility; the margin keeps jets finite near
    // singular boundaries (y_i = 0, t = 0)
    bool in_domain(const Eigen::VectorXd& x, double margin_scale = 1e-8) const;

    double value(const Eigen::VectorXd& x) const;
    Eigen::VectorXd gradient(const Eigen::VectorXd& x) const;
    Jet eval_jet(const Eigen::VectorXd& x, int deg = kMaxJetDeg) const;
    ConvexityReport is_convex_at(const Eigen::VectorXd& x) const;
    std::optional<double> det_hessian_closed_form(const Eigen::VectorXd& x) const;

    // axis-aligned box from which interior points can be drawn by rejection
    void sample_box(Eigen::VectorXd& lo, Eigen::VectorXd& hi) const;

    const CurvePtr& eta() const { return eta_; }
    const CurvePtr& phi() const { return phi_; }
    const CurvePtr& zeta() const { return zeta_; }
    const Eigen::VectorXd& alpha_vec() const { return alpha_; }
    double alpha() const { return scalar_; } // ExpPower exponent
    double beta() const { return scalar_; }  // PowerRadial exponent
    double omega() const { return omega_; }  // slab extent
    const Eigen::MatrixXd& Q() const { return Q_; }
    const Eigen::VectorXd& b() const { return b_; }
    double c() const { return c_; }

private:
    ConvexFamily() = default;
    Tag tag_ = Tag::Quadratic;
    int dim_ = 0;
    Eigen::MatrixXd Q_; // quadratic form (Quadratic) or the A block (HalfExp)
    Eigen::VectorXd b_;
    double c_ = 0.0;
    CurvePtr eta_, phi_, zeta_;
    Eigen::VectorXd alpha_;
    double scalar_ = 0.0;
    double omega_ = 0.0;
};

// classification threshold: 1e-10 of the largest absolute Hessian eigenvalue
ConvexityReport classify_hessian(const Eigen::MatrixXd& H);

} // namespace malab
