#include "malab/domain.hpp"

#include <algorithm>
#include <cmath>

#include "malab/report.hpp"

namespace malab {

namespace {

// Gauss-Legendre 8 on [-1,1]
constexpr int kG = 8;
constexpr double kGx[kG] = {-0.96028985649753623168, -0.79666647741362673959,
                            -0.52553240991632898582, -0.18343464249564980494,
                            0.18343464249564980494,  0.52553240991632898582,
                            0.79666647741362673959,  0.96028985649753623168};
constexpr double kGw[kG] = {0.10122853629037625915, 0.22238103445337447054,
                            0.31370664587788728734, 0.36268378337836198297,
                            0.36268378337836198297, 0.31370664587788728734,
                            0.22238103445337447054, 0.10122853629037625915};

constexpr double kPi = 3.14159265358979323846;

int ball_shells(int level) { return 10 + 2 * level; }

int ball_dirs_count(int dim, int level) {
    if (dim == 2) return 256 << std::min(level, 2);
    if (dim == 3) return 2048 << std::min(level, 1);
    return 64 * dim * dim << std::min(level, 1);
}

// direction m of the M-point quasi-uniform family, computable in O(1)
Eigen::VectorXd dir_at(int dim, int M, int m) {
    Eigen::VectorXd d(dim);
    if (dim == 2) {
        const double a = 2.0 * kPi * static_cast<double>(m) / static_cast<double>(M);
        d << std::cos(a), std::sin(a);
        return d;
    }
    if (dim == 3) {
        const double z = 1.0 - (2.0 * m + 1.0) / static_cast<double>(M);
        const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
        const double golden = 2.39996322972865332223; // 2*pi*(1 - 1/golden ratio)
        const double a = golden * static_cast<double>(m);
        d << rho * std::cos(a), rho * std::sin(a), z;
        return d;
    }
    Rng rng = Rng::for_index(0x5eedd1a5u + static_cast<std::uint64_t>(dim), static_cast<std::uint64_t>(m));
    for (;;) {
        for (int i = 0; i < dim; ++i) d[i] = rng.normal();
        const double n = d.norm();
        if (n > 1e-8) return d / n;
    }
}

// dyadic panel p of [0,1]: outermost first, innermost closes at 0
void dyadic_panel(int p, int shells, double& lo01, double& hi01) {
    if (p < shells) {
        hi01 = std::ldexp(1.0, -p);
        lo01 = 0.5 * hi01;
    } else {
        hi01 = std::ldexp(1.0, -shells);
        lo01 = 0.0;
    }
}

int box_panels(int level) { return 2 << level; }
int orthant_shells(int level) { return 6 + 2 * level; }
int poly_panels(int level) { return 4 << level; }

} // namespace

Domain Domain::ball(Eigen::VectorXd center, double radius) {
    if (!(radius > 0.0)) throw precondition_error("ball needs a positive radius");
    if (center.size() < 1) throw precondition_error("ball center must be nonempty");
    Domain d;
    d.kind_ = Kind::Ball;
    d.dim_ = static_cast<int>(center.size());
    d.a_ = std::move(center);
    d.radius_ = radius;
    return d;
}

Domain Domain::box(Eigen::VectorXd lo, Eigen::VectorXd hi) {
    if (lo.size() != hi.size() || lo.size() < 1) throw precondition_error("box corners mismatch");
    if (((hi - lo).array() <= 0.0).any()) throw precondition_error("box needs lo < hi per axis");
    Domain d;
    d.kind_ = Kind::Box;
    d.dim_ = static_cast<int>(lo.size());
    d.a_ = std::move(lo);
    d.b_ = std::move(hi);
    return d;
}

Domain Domain::orthant_box(Eigen::VectorXd lo, Eigen::VectorXd hi) {
    if ((lo.array() <= 0.0).any())
        throw precondition_error("orthant box must sit strictly inside the positive orthant");
    Domain d = box(std::move(lo), std::move(hi));
    d.kind_ = Kind::OrthantBox;
    return d;
}

Domain Domain::polytope(Eigen::VectorXd base, Eigen::MatrixXd dirs, Eigen::VectorXd radii) {
    if (dirs.rows() != radii.size() || dirs.cols() != base.size() || dirs.rows() < 3)
        throw precondition_error("polytope needs matching base/directions/radii");
    if ((radii.array() <= 0.0).any()) throw precondition_error("polytope radii must be positive");
    Domain d;
    d.kind_ = Kind::Polytope;
    d.dim_ = static_cast<int>(base.size());
    d.a_ = std::move(base);
    d.dirs_ = std::move(dirs);
    d.dirs_.rowwise().normalize();
    d.radii_ = std::move(radii);
    return d;
}

double unit_ball_volume(int dim) {
    // omega_N = pi^{N/2} / Gamma(N/2 + 1)
    return std::pow(kPi, 0.5 * dim) / std::tgamma(0.5 * dim + 1.0);
}

double Domain::diameter() const {
    switch (kind_) {
    case Kind::Ball:
        return 2.0 * radius_;
    case Kind::Box:
    case Kind::OrthantBox:
        return (b_ - a_).norm();
    case Kind::Polytope: {
        double best = 0.0;
        const Eigen::Index m = dirs_.rows();
        Eigen::MatrixXd verts(m, dim_);
        for (Eigen::Index i = 0; i < m; ++i)
            verts.row(i) = a_.transpose() + radii_[i] * dirs_.row(i);
        for (Eigen::Index i = 0; i < m; ++i)
            for (Eigen::Index j = i + 1; j < m; ++j)
                best = std::max(best, (verts.row(i) - verts.row(j)).norm());
        return best;
    }
    }
    return 0.0;
}

double Domain::inradius() const {
    switch (kind_) {
    case Kind::Ball:
        return radius_;
    case Kind::Box:
    case Kind::OrthantBox:
        return 0.5 * (b_ - a_).minCoeff();
    case Kind::Polytope:
        return radii_.minCoeff();
    }
    return 0.0;
}

double Domain::volume() const {
    switch (kind_) {
    case Kind::Ball:
        return unit_ball_volume(dim_) * std::pow(radius_, dim_);
    case Kind::Box:
    case Kind::OrthantBox:
        return (b_ - a_).prod();
    case Kind::Polytope: {
        // radial formula with equal angular weights
        const double surf = dim_ * unit_ball_volume(dim_);
        const double am = surf / static_cast<double>(dirs_.rows());
        double acc = 0.0;
        for (Eigen::Index i = 0; i < radii_.size(); ++i) acc += std::pow(radii_[i], dim_);
        return acc * am / dim_;
    }
    }
    return 0.0;
}

bool Domain::contains(const Eigen::VectorXd& x, double margin) const {
    if (x.size() != dim_) return false;
    switch (kind_) {
    case Kind::Ball:
        return (x - a_).norm() < radius_ - margin;
    case Kind::Box:
    case Kind::OrthantBox:
        return (x.array() > a_.array() + margin).all() && (x.array() < b_.array() - margin).all();
    case Kind::Polytope: {
        // approximate: radial test against the nearest sampled direction
        const Eigen::VectorXd rel = x - a_;
        const double len = rel.norm();
        if (len == 0.0) return true;
        Eigen::Index best = 0;
        (dirs_ * (rel / len)).maxCoeff(&best);
        return len < radii_[best] - margin;
    }
    }
    return false;
}

Domain Domain::dilate(double s, const Eigen::VectorXd& anchor) const {
    if (!(s > 0.0)) throw precondition_error("dilation factor must be positive");
    switch (kind_) {
    case Kind::Ball:
        return ball(anchor + s * (a_ - anchor), s * radius_);
    case Kind::Box:
    case Kind::OrthantBox: {
        Domain d = box(anchor + s * (a_ - anchor), anchor + s * (b_ - anchor));
        d.kind_ = kind_;
        return d;
    }
    case Kind::Polytope:
        if ((anchor - a_).norm() > 1e-12 * (1.0 + a_.norm()))
            throw precondition_error("polytope dilation is only defined about its base point");
        return polytope(a_, dirs_, s * radii_);
    }
    throw numeric_error("unhandled domain kind");
}

namespace {

struct AxisRule {
    // graded == true: dyadic panels toward lo
    double lo, hi;
    int panels;
    bool graded;
    int count() const { return panels * kG; }
    void node(int idx, double& x, double& w) const {
        const int p = idx / kG, g = idx % kG;
        double l01, h01;
        if (graded) {
            dyadic_panel(p, panels - 1, l01, h01);
        } else {
            l01 = static_cast<double>(p) / panels;
            h01 = static_cast<double>(p + 1) / panels;
        }
        const double pl = lo + (hi - lo) * l01, ph = lo + (hi - lo) * h01;
        const double mid = 0.5 * (pl + ph), half = 0.5 * (ph - pl);
        x = mid + half * kGx[g];
        w = half * kGw[g];
    }
};

AxisRule box_axis(const Domain& dom, int axis, int level) {
    AxisRule r;
    r.lo = dom.lo()[axis];
    r.hi = dom.hi()[axis];
    if (dom.kind() == Domain::Kind::OrthantBox) {
        r.graded = true;
        r.panels = orthant_shells(level) + 1;
    } else {
        r.graded = false;
        r.panels = box_panels(level);
    }
    return r;
}

} // namespace

std::size_t quad_size(const Domain& dom, int level) {
    switch (dom.kind()) {
    case Domain::Kind::Ball: {
        const std::size_t radial = static_cast<std::size_t>(ball_shells(level) + 1) * kG;
        return radial * static_cast<std::size_t>(ball_dirs_count(dom.dim(), level));
    }
    case Domain::Kind::Box:
    case Domain::Kind::OrthantBox: {
        std::size_t n = 1;
        for (int a = 0; a < dom.dim(); ++a)
            n *= static_cast<std::size_t>(box_axis(dom, a, level).count());
        return n;
    }
    case Domain::Kind::Polytope:
        return static_cast<std::size_t>(dom.dirs().rows()) *
               static_cast<std::size_t>(poly_panels(level)) * kG;
    }
    return 0;
}

void quad_node(const Domain& dom, int level, std::size_t i, Eigen::VectorXd& x, double& w) {
    const int dim = dom.dim();
    switch (dom.kind()) {
    case Domain::Kind::Ball: {
        const int M = ball_dirs_count(dim, level);
        const int m = static_cast<int>(i % static_cast<std::size_t>(M));
        const std::size_t rest = i / static_cast<std::size_t>(M);
        const int g = static_cast<int>(rest % kG);
        const int p = static_cast<int>(rest / kG);
        double l01, h01;
        dyadic_panel(p, ball_shells(level), l01, h01);
        const double pl = dom.radius() * l01, ph = dom.radius() * h01;
        const double mid = 0.5 * (pl + ph), half = 0.5 * (ph - pl);
        const double r = mid + half * kGx[g];
        const double wr = half * kGw[g];
        const double am = dim * unit_ball_volume(dim) / static_cast<double>(M);
        x = dom.center() + r * dir_at(dim, M, m);
        w = wr * std::pow(r, dim - 1) * am;
        return;
    }
    case Domain::Kind::Box:
    case Domain::Kind::OrthantBox: {
        x.resize(dim);
        w = 1.0;
        std::size_t rem = i;
        for (int a = dim - 1; a >= 0; --a) {
            const AxisRule rule = box_axis(dom, a, level);
            const auto cnt = static_cast<std::size_t>(rule.count());
            const int idx = static_cast<int>(rem % cnt);
            rem /= cnt;
            double xa, wa;
            rule.node(idx, xa, wa);
            x[a] = xa;
            w *= wa;
        }
        return;
    }
    case Domain::Kind::Polytope: {
        const int P = poly_panels(level);
        const int g = static_cast<int>(i % kG);
        const std::size_t rest = i / kG;
        const int p = static_cast<int>(rest % static_cast<std::size_t>(P));
        const int m = static_cast<int>(rest / static_cast<std::size_t>(P));
        const double rm = dom.radii()[m];
        const double pl = rm * p / P, ph = rm * (p + 1) / P;
        const double mid = 0.5 * (pl + ph), half = 0.5 * (ph - pl);
        const double rho = mid + half * kGx[g];
        const double wr = half * kGw[g];
        const double am = dim * unit_ball_volume(dim) / static_cast<double>(dom.dirs().rows());
        x = dom.center() + rho * dom.dirs().row(m).transpose();
        w = wr * std::pow(rho, dim - 1) * am;
        return;
    }
    }
}

void quad_sweep(const Domain& dom, int level, const QuadVisitor& visit) {
    const std::size_t n = quad_size(dom, level);
    Eigen::VectorXd x;
    double w = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        quad_node(dom, level, i, x, w);
        visit(x, w);
    }
}

Eigen::MatrixXd sphere_directions(int dim, int M) {
    if (dim < 2 || M < 1) throw precondition_error("sphere_directions needs dim >= 2, M >= 1");
    Eigen::MatrixXd out(M, dim);
    for (int m = 0; m < M; ++m) out.row(m) = dir_at(dim, M, m).transpose();
    return out;
}

} // namespace malab
