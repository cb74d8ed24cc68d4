#include "malab/family.hpp"

#include <algorithm>
#include <cmath>

namespace malab {

namespace {

bool is_even_power(double alpha) {
    const double half = 0.5 * alpha;
    return half == std::floor(half) && half <= 32.0;
}

// jet of c0 + lin.x + x'quad x at x0 (quad symmetric)
Jet poly2_jet(int dim, int deg, double c0, const Eigen::VectorXd& lin,
              const Eigen::MatrixXd& quad, const Eigen::VectorXd& x0) {
    Jet j = Jet::constant(dim, c0 + lin.dot(x0) + x0.dot(quad * x0), deg);
    const Eigen::VectorXd g = lin + 2.0 * (quad * x0);
    const auto& tab = j.table();
    for (int i = 0; i < dim; ++i) {
        MultiIndex m{};
        m[static_cast<std::size_t>(i)] = 1;
        j.coeff(tab.position(m)) = g[i];
    }
    if (deg >= 2) {
        for (int i = 0; i < dim; ++i)
            for (int k = i; k < dim; ++k) {
                MultiIndex m{};
                m[static_cast<std::size_t>(i)] += 1;
                m[static_cast<std::size_t>(k)] += 1;
                j.coeff(tab.position(m)) = (i == k) ? quad(i, i) : 2.0 * quad(i, k);
            }
    }
    return j;
}

Eigen::MatrixXd y_block_identity(int dim) {
    Eigen::MatrixXd q = Eigen::MatrixXd::Zero(dim, dim);
    q.topLeftCorner(dim - 1, dim - 1).setIdentity();
    return q;
}

double curve_interval_lo(const CurvePtr& a, const CurvePtr& b) {
    return std::max(a->lo(), b->lo());
}
double curve_interval_hi(const CurvePtr& a, const CurvePtr& b) {
    return std::min(a->hi(), b->hi());
}

void require_symmetric(const Eigen::MatrixXd& Q, const char* what) {
    if (Q.rows() != Q.cols() || (Q - Q.transpose()).cwiseAbs().maxCoeff() >
                                    1e-12 * (1.0 + Q.cwiseAbs().maxCoeff()))
        throw precondition_error(std::string(what) + " must be symmetric");
}

} // namespace

ConvexityReport classify_hessian(const Eigen::MatrixXd& H) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H, Eigen::EigenvaluesOnly);
    const double lo = es.eigenvalues().minCoeff();
    const double hi = es.eigenvalues().maxCoeff();
    const double eps = 1e-10 * std::max(std::abs(lo), std::abs(hi));
    ConvexityReport rep{Convexity::Degenerate, lo, hi};
    if (lo > eps)
        rep.kind = Convexity::StrictlyConvex;
    else if (lo < -eps)
        rep.kind = Convexity::NotConvex;
    return rep;
}

ConvexFamily ConvexFamily::quadratic(Eigen::MatrixXd Q, Eigen::VectorXd b, double c) {
    require_symmetric(Q, "quadratic form Q");
    if (Q.rows() != b.size()) throw precondition_error("quadratic b has wrong length");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Q, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() <
        -1e-10 * std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff()))
        throw precondition_error("quadratic form Q must be positive semidefinite");
    ConvexFamily f;
    f.tag_ = Tag::Quadratic;
    f.dim_ = static_cast<int>(Q.rows());
    f.Q_ = std::move(Q);
    f.b_ = std::move(b);
    f.c_ = c;
    return f;
}

ConvexFamily ConvexFamily::warren(int n, CurvePtr eta, CurvePtr phi) {
    if (n < 1 || !eta || !phi) throw precondition_error("warren family needs n >= 1 and curves");
    if (!(curve_interval_lo(eta, phi) < curve_interval_hi(eta, phi)))
        throw precondition_error("warren curves have disjoint t-intervals");
    ConvexFamily f;
    f.tag_ = Tag::WarrenSeparable;
    f.dim_ = n + 1;
    f.eta_ = std::move(eta);
    f.phi_ = std::move(phi);
    return f;
}

ConvexFamily ConvexFamily::tw(int n, CurvePtr phi, CurvePtr eta) {
    if (n < 1 || !eta || !phi) throw precondition_error("tw family needs n >= 1 and curves");
    ConvexFamily f;
    f.tag_ = Tag::TWSeparable;
    f.dim_ = n + 1;
    f.eta_ = std::move(eta);
    f.phi_ = std::move(phi);
    return f;
}

ConvexFamily ConvexFamily::exp_power(int n, double alpha) {
    if (n < 1) throw precondition_error("exp_power needs n >= 1");
    if (!(alpha > 1.0)) throw precondition_error("exp_power needs alpha > 1");
    ConvexFamily f;
    f.tag_ = Tag::ExpPower;
    f.dim_ = n + 1;
    f.scalar_ = alpha;
    return f;
}

ConvexFamily ConvexFamily::half_exp(int n, Eigen::MatrixXd A, Eigen::VectorXd B, double C) {
    if (n < 1) throw precondition_error("half_exp needs n >= 1");
    if (A.rows() != n - 1 || B.size() != n - 1)
        throw precondition_error("half_exp A must be (n-1)x(n-1) and B length n-1");
    require_symmetric(A, "half_exp A");
    if (n > 1) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A, Eigen::EigenvaluesOnly);
        if (!(es.eigenvalues().minCoeff() > 0.0))
            throw precondition_error("half_exp A must be positive definite");
    }
    ConvexFamily f;
    f.tag_ = Tag::HalfExp;
    f.dim_ = n + 1;
    f.Q_ = std::move(A);
    f.b_ = std::move(B);
    f.c_ = C;
    return f;
}

ConvexFamily ConvexFamily::product_halfspace(Eigen::VectorXd alpha) {
    if (alpha.size() < 1 || (alpha.array() <= 0.0).any())
        throw precondition_error("product family exponents must be positive");
    ConvexFamily f;
    f.tag_ = Tag::ProductHalfSpace;
    f.dim_ = static_cast<int>(alpha.size()) + 1;
    f.alpha_ = std::move(alpha);
    return f;
}

ConvexFamily ConvexFamily::product_full(Eigen::VectorXd alpha) {
    if (alpha.size() < 2 || (alpha.array() <= 0.0).any())
        throw precondition_error("product family exponents must be positive, dimension >= 2");
    ConvexFamily f;
    f.tag_ = Tag::ProductFull;
    f.dim_ = static_cast<int>(alpha.size());
    f.alpha_ = std::move(alpha);
    return f;
}

ConvexFamily ConvexFamily::power_radial(int N, double beta) {
    if (N < 1) throw precondition_error("power_radial needs N >= 1");
    if (!(beta > 1.0)) throw precondition_error("power_radial needs beta > 1");
    ConvexFamily f;
    f.tag_ = Tag::PowerRadial;
    f.dim_ = N;
    f.scalar_ = beta;
    return f;
}

ConvexFamily ConvexFamily::slab(int n, CurvePtr zeta, CurvePtr eta, double omega) {
    if (n < 1 || !zeta || !eta) throw precondition_error("slab family needs n >= 1 and curves");
    if (!(omega > 0.0)) throw precondition_error("slab needs a positive extent");
    ConvexFamily f;
    f.tag_ = Tag::SlabSeparable;
    f.dim_ = n + 1;
    f.zeta_ = std::move(zeta);
    f.eta_ = std::move(eta);
    f.omega_ = omega;
    return f;
}

bool ConvexFamily::in_domain(const Eigen::VectorXd& x, double margin_scale) const {
    if (x.size() != dim_) return false;
    const int n = dim_ - 1;
    switch (tag_) {
    case Tag::Quadratic:
    case Tag::HalfExp:
        return true;
    case Tag::WarrenSeparable:
    case Tag::TWSeparable: {
        const double t = x[n];
        const double lo = curve_interval_lo(eta_, phi_);
        const double hi = curve_interval_hi(eta_, phi_);
        const double m = margin_scale * (1.0 + std::abs(t));
        if (!(t > lo + m && t < hi - m)) return false;
        if (tag_ == Tag::TWSeparable) {
            const double r = x.head(n).norm();
            if (!(r > margin_scale && r > phi_->lo() + margin_scale * (1.0 + r))) return false;
        }
        return true;
    }
    case Tag::ExpPower:
        return is_even_power(scalar_) || x.head(n).norm() > margin_scale;
    case Tag::ProductHalfSpace:
        return (x.head(n).array() > margin_scale).all();
    case Tag::ProductFull:
        return (x.array() > margin_scale).all();
    case Tag::PowerRadial:
        return x.norm() > margin_scale;
    case Tag::SlabSeparable: {
        const double x1 = x[0];
        const double m = margin_scale * (1.0 + omega_);
        if (!(x1 > m && x1 < omega_ - m)) return false;
        const double z = zeta_->value(x1), e = eta_->value(x1);
        const double r2 = x.tail(n).squaredNorm();
        return z * r2 - e < -margin_scale * (1.0 + std::abs(e));
    }
    }
    return false;
}

double ConvexFamily::value(const Eigen::VectorXd& x) const {
    const int n = dim_ - 1;
    switch (tag_) {
    case Tag::Quadratic:
        return x.dot(Q_ * x) + b_.dot(x) + c_;
    case Tag::WarrenSeparable:
        return x.head(n).squaredNorm() * eta_->value(x[n]) + phi_->value(x[n]);
    case Tag::TWSeparable:
        return phi_->value(x.head(n).norm()) * eta_->value(x[n]);
    case Tag::ExpPower:
        return std::exp(std::pow(x.head(n).squaredNorm(), 0.5 * scalar_) + x[n]);
    case Tag::HalfExp: {
        const auto q = x.segment(1, n - 1);
        return std::exp(x[0] * x[0] + x[n]) + q.dot(Q_ * q) + b_.dot(q) + c_;
    }
    case Tag::ProductHalfSpace:
        return (x.head(n).array().pow(-alpha_.array())).prod() * std::exp(x[n]);
    case Tag::ProductFull:
        return (x.array().pow(-alpha_.array())).prod();
    case Tag::PowerRadial:
        return std::pow(x.norm(), scalar_) - 1.0;
    case Tag::SlabSeparable:
        return zeta_->value(x[0]) * x.tail(n).squaredNorm() - eta_->value(x[0]);
    }
    return 0.0;
}

Jet ConvexFamily::eval_jet(const Eigen::VectorXd& x, int deg) const {
    deg = std::clamp(deg, 2, kMaxJetDeg);
    if (!in_domain(x))
        throw domain_error("evaluation point outside the family's admissible domain");
    const int n = dim_ - 1;
    const Eigen::VectorXd zero = Eigen::VectorXd::Zero(dim_);
    switch (tag_) {
    case Tag::Quadratic:
        return poly2_jet(dim_, deg, c_, b_, Q_, x);
    case Tag::WarrenSeparable: {
        const double t = x[n];
        const Jet jt = Jet::variable(dim_, n, t, deg);
        const Jet r2 = poly2_jet(dim_, deg, 0.0, zero, y_block_identity(dim_), x);
        return r2 * compose(jt, eta_->derivs(t)) + compose(jt, phi_->derivs(t));
    }
    case Tag::TWSeparable: {
        const double t = x[n];
        const Jet jt = Jet::variable(dim_, n, t, deg);
        const Jet r2 = poly2_jet(dim_, deg, 0.0, zero, y_block_identity(dim_), x);
        const Jet r = sqrt(r2);
        return compose(r, phi_->derivs(r.value())) * compose(jt, eta_->derivs(t));
    }
    case Tag::ExpPower: {
        const Jet jt = Jet::variable(dim_, n, x[n], deg);
        const Jet r2 = poly2_jet(dim_, deg, 0.0, zero, y_block_identity(dim_), x);
        return exp(pow(r2, 0.5 * scalar_) + jt);
    }
    case Tag::HalfExp: {
        Eigen::MatrixXd quad = Eigen::MatrixXd::Zero(dim_, dim_);
        quad(0, 0) = 1.0;
        Eigen::VectorXd lin = Eigen::VectorXd::Zero(dim_);
        lin[n] = 1.0;
        const Jet arg = poly2_jet(dim_, deg, 0.0, lin, quad, x);
        Eigen::MatrixXd quad2 = Eigen::MatrixXd::Zero(dim_, dim_);
        quad2.block(1, 1, n - 1, n - 1) = Q_;
        Eigen::VectorXd lin2 = Eigen::VectorXd::Zero(dim_);
        lin2.segment(1, n - 1) = b_;
        return exp(arg) + poly2_jet(dim_, deg, c_, lin2, quad2, x);
    }
    case Tag::ProductHalfSpace:
    case Tag::ProductFull: {
        const int ny = (tag_ == Tag::ProductHalfSpace) ? n : dim_;
        Jet acc = pow(Jet::variable(dim_, 0, x[0], deg), -alpha_[0]);
        for (int i = 1; i < ny; ++i)
            acc = acc * pow(Jet::variable(dim_, i, x[i], deg), -alpha_[i]);
        if (tag_ == Tag::ProductHalfSpace) acc = acc * exp(Jet::variable(dim_, n, x[n], deg));
        return acc;
    }
    case Tag::PowerRadial: {
        const Jet r2 = poly2_jet(dim_, deg, 0.0, zero, Eigen::MatrixXd::Identity(dim_, dim_), x);
        return pow(r2, 0.5 * scalar_) - 1.0;
    }
    case Tag::SlabSeparable: {
        const double x1 = x[0];
        const Jet j1 = Jet::variable(dim_, 0, x1, deg);
        Eigen::MatrixXd quad = Eigen::MatrixXd::Zero(dim_, dim_);
        quad.bottomRightCorner(n, n).setIdentity();
        const Jet r2 = poly2_jet(dim_, deg, 0.0, zero, quad, x);
        return compose(j1, zeta_->derivs(x1)) * r2 - compose(j1, eta_->derivs(x1));
    }
    }
    throw numeric_error("unhandled family tag");
}

Eigen::VectorXd ConvexFamily::gradient(const Eigen::VectorXd& x) const {
    switch (tag_) {
    case Tag::Quadratic:
        return 2.0 * (Q_ * x) + b_;
    case Tag::PowerRadial: {
        const double r = x.norm();
        if (r == 0.0) return Eigen::VectorXd::Zero(dim_);
        return scalar_ * std::pow(r, scalar_ - 2.0) * x;
    }
    default:
        return eval_jet(x, 2).gradient();
    }
}

ConvexityReport ConvexFamily::is_convex_at(const Eigen::VectorXd& x) const {
    return classify_hessian(eval_jet(x, 2).hessian());
}

std::optional<double> ConvexFamily::det_hessian_closed_form(const Eigen::VectorXd& x) const {
    const int n = dim_ - 1;
    switch (tag_) {
    case Tag::Quadratic:
        return (2.0 * Q_).determinant();
    case Tag::WarrenSeparable: {
        const double t = x[n];
        const auto e = eta_->derivs(t);
        const auto p = phi_->derivs(t);
        const double r2 = x.head(n).squaredNorm();
        return std::pow(2.0 * e[0], n) * (r2 * (e[2] - 2.0 * e[1] * e[1] / e[0]) + p[2]);
    }
    case Tag::TWSeparable: {
        const double t = x[n];
        const double r = x.head(n).norm();
        const auto p = phi_->derivs(r);
        const auto e = eta_->derivs(t);
        const double core = p[0] * p[2] * e[0] * e[2] - (p[1] * e[1]) * (p[1] * e[1]);
        return core * std::pow(p[1] * e[0] / r, n - 1);
    }
    case Tag::ExpPower: {
        const double a = scalar_;
        const double r = x.head(n).norm();
        const double ra = std::pow(r, a);
        return std::pow(a, n) * (a - 1.0) * std::pow(r, n * (a - 2.0)) *
               std::exp((n + 1.0) * (ra + x[n]));
    }
    case Tag::HalfExp: {
        const double base = 2.0 * std::exp(2.0 * (x[0] * x[0] + x[n]));
        return base * (2.0 * Q_).determinant();
    }
    case Tag::ProductHalfSpace: {
        double acc = std::exp(dim_ * x[n]);
        for (int i = 0; i < n; ++i)
            acc *= alpha_[i] * std::pow(x[i], -dim_ * alpha_[i] - 2.0);
        return acc;
    }
    case Tag::ProductFull: {
        double acc = alpha_.sum() + 1.0;
        for (int i = 0; i < dim_; ++i)
            acc *= alpha_[i] * std::pow(x[i], -dim_ * alpha_[i] - 2.0);
        return acc;
    }
    case Tag::PowerRadial: {
        const double beta = scalar_;
        return std::pow(beta, dim_) * (beta - 1.0) * std::pow(x.norm(), dim_ * (beta - 2.0));
    }
    case Tag::SlabSeparable: {
        const double x1 = x[0];
        const auto z = zeta_->derivs(x1);
        const auto e = eta_->derivs(x1);
        const double r2 = x.tail(n).squaredNorm();
        return std::pow(2.0 * z[0], n) * ((z[2] - 2.0 * z[1] * z[1] / z[0]) * r2 - e[2]);
    }
    }
    return std::nullopt;
}

void ConvexFamily::sample_box(Eigen::VectorXd& lo, Eigen::VectorXd& hi) const {
    lo.resize(dim_);
    hi.resize(dim_);
    const int n = dim_ - 1;
    switch (tag_) {
    case Tag::Quadratic:
    case Tag::HalfExp:
        lo.setConstant(-1.2);
        hi.setConstant(1.2);
        return;
    case Tag::WarrenSeparable:
    case Tag::TWSeparable: {
        if (tag_ == Tag::WarrenSeparable) {
            lo.head(n).setConstant(-1.2);
            hi.head(n).setConstant(1.2);
        } else {
            lo.head(n).setConstant(0.25); // keeps |y| off the axis
            hi.head(n).setConstant(1.25);
        }
        const double tlo = curve_interval_lo(eta_, phi_);
        const double thi = curve_interval_hi(eta_, phi_);
        lo[n] = std::isfinite(tlo) ? tlo + 0.3 : -1.0;
        hi[n] = std::isfinite(thi) ? std::min(thi - 0.1, lo[n] + 2.0) : lo[n] + 2.0;
        return;
    }
    case Tag::ExpPower:
        lo.head(n).setConstant(0.2);
        hi.head(n).setConstant(1.2);
        lo[n] = -1.0;
        hi[n] = 1.0;
        return;
    case Tag::ProductHalfSpace:
        lo.head(n).setConstant(0.4);
        hi.head(n).setConstant(2.0);
        lo[n] = -1.0;
        hi[n] = 1.0;
        return;
    case Tag::ProductFull:
        lo.setConstant(0.4);
        hi.setConstant(2.0);
        return;
    case Tag::PowerRadial:
        lo.setConstant(-0.95);
        hi.setConstant(0.95);
        return;
    case Tag::SlabSeparable: {
        lo[0] = 0.02 * omega_;
        hi[0] = 0.98 * omega_;
        double rmax = 0.0;
        for (int k = 1; k <= 40; ++k) {
            const double x1 = omega_ * k / 41.0;
            const double z = zeta_->value(x1), e = eta_->value(x1);
            if (z > 0.0 && e > 0.0) rmax = std::max(rmax, std::sqrt(e / z));
        }
        lo.tail(n).setConstant(-rmax);
        hi.tail(n).setConstant(rmax);
        return;
    }
    }
}

} // namespace malab
