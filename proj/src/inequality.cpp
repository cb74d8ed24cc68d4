#include "malab/inequality.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "malab/report.hpp"

namespace malab {

namespace {

Eigen::VectorXd domain_center(const Domain& dom) {
    switch (dom.kind()) {
    case Domain::Kind::Ball:
    case Domain::Kind::Polytope:
        return dom.center();
    case Domain::Kind::Box:
    case Domain::Kind::OrthantBox:
        return 0.5 * (dom.lo() + dom.hi());
    }
    return Eigen::VectorXd();
}

void bounding_box(const Domain& dom, Eigen::VectorXd& lo, Eigen::VectorXd& hi) {
    switch (dom.kind()) {
    case Domain::Kind::Ball:
        lo = dom.center().array() - dom.radius();
        hi = dom.center().array() + dom.radius();
        return;
    case Domain::Kind::Box:
    case Domain::Kind::OrthantBox:
        lo = dom.lo();
        hi = dom.hi();
        return;
    case Domain::Kind::Polytope: {
        lo = dom.center();
        hi = dom.center();
        for (int m = 0; m < dom.dirs().rows(); ++m) {
            const Eigen::VectorXd v =
                dom.center() + dom.radii()[m] * dom.dirs().row(m).transpose();
            lo = lo.cwiseMin(v);
            hi = hi.cwiseMax(v);
        }
        return;
    }
    }
}

// distance from an interior point to the boundary along a ray, by bisecting
// the containment predicate
double boundary_radius(const Domain& dom, const Eigen::VectorXd& from,
                       const Eigen::VectorXd& d) {
    double hi = 1e-3 * dom.diameter();
    int guard = 0;
    while (dom.contains(from + hi * d) && guard++ < 200) hi *= 2.0;
    double lo = 0.0;
    for (int it = 0; it < 100; ++it) {
        const double mid = 0.5 * (lo + hi);
        (dom.contains(from + mid * d) ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

Eigen::VectorXd random_direction(Rng& rng, int dim) {
    Eigen::VectorXd d(dim);
    double norm2 = 0.0;
    do {
        for (int i = 0; i < dim; ++i) d[i] = rng.normal();
        norm2 = d.squaredNorm();
    } while (!(norm2 > 1e-12));
    return d / std::sqrt(norm2);
}

Eigen::VectorXd random_point(Rng& rng, const Domain& dom, const Eigen::VectorXd& lo,
                             const Eigen::VectorXd& hi, const Eigen::VectorXd& fallback) {
    Eigen::VectorXd x(dom.dim());
    for (int attempt = 0; attempt < 400; ++attempt) {
        for (int i = 0; i < dom.dim(); ++i) x[i] = rng.uniform(lo[i], hi[i]);
        if (dom.contains(x)) return x;
    }
    return fallback;
}

int default_direction_count(int dim) {
    if (dim == 2) return 256;
    if (dim == 3) return 2048;
    return 64 * dim * dim;
}

std::string grid_label(const PairOptions& opt) {
    std::ostringstream os;
    os << "pairs=" << opt.levels << "x" << opt.pairs_per_level;
    return os.str();
}

HolderReport holder_core(const ScalarField& u, const Domain& omega, double alpha,
                         const PairOptions& opt) {
    if (!(alpha > 0.0 && alpha <= 1.0))
        throw precondition_error("holder exponent must lie in (0, 1]");
    if (opt.levels < 1 || opt.pairs_per_level < 16)
        throw precondition_error("holder sampler needs at least one level and 16 pairs");
    const int N = omega.dim();
    const double diam = omega.diameter();
    const Eigen::VectorXd c = domain_center(omega);
    Eigen::VectorXd blo, bhi;
    bounding_box(omega, blo, bhi);

    HolderReport rep;
    rep.x = c;
    rep.y = c;
    double sup = 0.0;

    const auto consider = [&](const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
        const double dist = (x - y).norm();
        if (!(dist > 0.0)) return;
        const double quot = std::abs(u(x) - u(y)) / std::pow(dist, alpha);
        if (quot > sup) {
            sup = quot;
            rep.x = x;
            rep.y = y;
        }
    };

    std::uint64_t index = 0;
    for (int lev = 0; lev < opt.levels; ++lev) {
        const double shortscale = diam * std::ldexp(1.0, -lev);
        for (int k = 0; k < opt.pairs_per_level; ++k) {
            Rng rng = Rng::for_index(opt.seed, index++);
            switch (k % 4) {
            case 0: { // free pairs
                const Eigen::VectorXd x = random_point(rng, omega, blo, bhi, c);
                const Eigen::VectorXd y = random_point(rng, omega, blo, bhi, c);
                consider(x, y);
                break;
            }
            case 1: { // colinear pairs through the center, both rays
                const Eigen::VectorXd d = random_direction(rng, N);
                const double rp = boundary_radius(omega, c, d);
                const double rm = boundary_radius(omega, c, -d);
                const double a = rng.uniform() * rp;
                const double b =
                    (rng.uniform() < 0.5) ? rng.uniform() * rp : -rng.uniform() * rm;
                consider(c + a * d, c + b * d);
                break;
            }
            case 2: { // boundary point against a near-boundary partner
                const Eigen::VectorXd d = random_direction(rng, N);
                const double r = boundary_radius(omega, c, d);
                const double pull = rng.uniform() * std::min(1.0, shortscale / diam);
                consider(c + r * d, c + (1.0 - pull) * r * d);
                break;
            }
            default: { // short-range pairs at the level scale
                const Eigen::VectorXd x = random_point(rng, omega, blo, bhi, c);
                const Eigen::VectorXd e = random_direction(rng, N);
                const double reach = boundary_radius(omega, x, e);
                const double delta = std::min(rng.uniform() * shortscale, reach);
                consider(x, x + delta * e);
                break;
            }
            }
        }
        rep.level_sups.push_back(sup);
    }

    if (opt.polish && sup > 0.0) {
        // joint pattern search over both endpoints, allowed to sit on the
        // boundary itself
        const auto inside = [&](const Eigen::VectorXd& p) {
            return omega.contains(p, -1e-9 * diam);
        };
        Eigen::VectorXd x = rep.x, y = rep.y;
        double best = sup;
        double h = 0.125 * diam;
        for (int round = 0; round < 400 && h > 1e-10 * diam; ++round) {
            bool improved = false;
            for (int side = 0; side < 2; ++side) {
                Eigen::VectorXd& p = side == 0 ? x : y;
                for (int i = 0; i < N; ++i) {
                    for (double sgn : {1.0, -1.0}) {
                        Eigen::VectorXd cand = p;
                        cand[i] += sgn * h;
                        if (!inside(cand)) continue;
                        const double dist = side == 0 ? (cand - y).norm() : (x - cand).norm();
                        if (!(dist > 0.0)) continue;
                        const double val = side == 0 ? u(cand) : u(x);
                        const double other = side == 0 ? u(y) : u(cand);
                        const double quot = std::abs(val - other) / std::pow(dist, alpha);
                        if (quot > best) {
                            best = quot;
                            p = cand;
                            improved = true;
                        }
                    }
                }
            }
            if (!improved) h *= 0.5;
        }
        sup = best;
        rep.x = x;
        rep.y = y;
    }

    rep.sup = sup;
    return rep;
}

// multilinear interpolation of nodal samples, clamped to the grid box
double pl_value(const PLConvex& p, const Eigen::VectorXd& x) {
    const int dim = p.dim;
    std::vector<int> base(dim);
    std::vector<double> frac(dim);
    for (int a = 0; a < dim; ++a) {
        const double t =
            std::clamp((x[a] - p.lo[a]) / p.spacing(a), 0.0, static_cast<double>(p.nodes - 1));
        const int i = std::min(static_cast<int>(t), p.nodes - 2);
        base[a] = i;
        frac[a] = t - static_cast<double>(i);
    }
    std::vector<std::size_t> stride(dim);
    stride[dim - 1] = 1;
    for (int a = dim - 2; a >= 0; --a)
        stride[a] = stride[a + 1] * static_cast<std::size_t>(p.nodes);
    double acc = 0.0;
    for (int corner = 0; corner < (1 << dim); ++corner) {
        double w = 1.0;
        std::size_t flat = 0;
        for (int a = 0; a < dim; ++a) {
            const bool high = (corner >> a) & 1;
            w *= high ? frac[a] : 1.0 - frac[a];
            flat += stride[a] * static_cast<std::size_t>(base[a] + (high ? 1 : 0));
        }
        acc += w * p.values[flat];
    }
    return acc;
}

void check_vanishing_boundary(const ConvexFamily& u, const Domain& omega) {
    const int N = omega.dim();
    const Eigen::VectorXd c = domain_center(omega);
    const Eigen::MatrixXd dirs = sphere_directions(N, std::max(64, 32 * N));
    const double scale = 1.0 + std::abs(u.value(c));
    for (int m = 0; m < dirs.rows(); ++m) {
        const Eigen::VectorXd d = dirs.row(m).transpose();
        const double r = boundary_radius(omega, c, d);
        if (std::abs(u.value(c + r * d)) > 1e-6 * scale)
            throw precondition_error("the function must vanish on the domain boundary");
    }
}

// boundary samples |x| about the origin for the radius checks; also verifies
// the stated boundary value after the shift
void boundary_radii_about_origin(const ConvexFamily& u, const Domain& omega, double shift,
                                 double& rmin, double& rmax) {
    const int N = omega.dim();
    const Eigen::VectorXd origin = Eigen::VectorXd::Zero(N);
    if (!omega.contains(origin))
        throw precondition_error("the origin must be an interior point of the domain");
    const Eigen::MatrixXd dirs = sphere_directions(N, std::max(64, 32 * N));
    rmin = std::numeric_limits<double>::infinity();
    rmax = 0.0;
    for (int m = 0; m < dirs.rows(); ++m) {
        const Eigen::VectorXd d = dirs.row(m).transpose();
        const double r = boundary_radius(omega, origin, d);
        if (std::abs(u.value(origin + r * d) + shift - 1.0) > 1e-6)
            throw precondition_error("the function must equal one on the domain boundary");
        rmin = std::min(rmin, r);
        rmax = std::max(rmax, r);
    }
}

void check_critical_origin(const ConvexFamily& u, const Domain& omega, double shift) {
    const int N = omega.dim();
    const Eigen::VectorXd origin = Eigen::VectorXd::Zero(N);
    if (std::abs(u.value(origin) + shift) > 1e-6)
        throw precondition_error("the function must vanish at the origin");
    const double h = 1e-6 * (1.0 + omega.diameter());
    for (int i = 0; i < N; ++i) {
        Eigen::VectorXd e = Eigen::VectorXd::Zero(N);
        e[i] = h;
        const double g = (u.value(e) - u.value(-e)) / (2.0 * h);
        if (std::abs(g) > 1e-5)
            throw precondition_error("the origin must be a critical point");
    }
}

std::string quad_label(const Domain& dom, int level) {
    std::ostringstream os;
    os << "quad=" << quad_size(dom, level) << "@" << level;
    return os.str();
}

} // namespace

HolderReport holder_seminorm(const ScalarField& u, const Domain& omega, double alpha,
                             const PairOptions& opt) {
    return holder_core(u, omega, alpha, opt);
}

HolderReport holder_seminorm(const ConvexFamily& u, const Domain& omega, double alpha,
                             const PairOptions& opt) {
    if (u.dim() != omega.dim())
        throw precondition_error("family and domain dimensions disagree");
    return holder_core([&u](const Eigen::VectorXd& x) { return u.value(x); }, omega, alpha,
                       opt);
}

std::string inequality_csv_row(const InequalityReport& r, const std::string& family) {
    return csv_join({r.check, family, r.grid, format_double(r.lhs), format_double(r.rhs),
                     format_double(r.ratio)});
}

InequalityReport check_c1n(const ConvexFamily& u, const Domain& omega,
                           const PairOptions& opt, int quad_level) {
    if (u.dim() != omega.dim())
        throw precondition_error("family and domain dimensions disagree");
    const int N = omega.dim();
    check_vanishing_boundary(u, omega);
    const HolderReport hol = holder_seminorm(u, omega, 1.0 / static_cast<double>(N), opt);
    const MassReport mass = ma_mass(u, omega, quad_level, opt.workers);
    InequalityReport rep;
    rep.check = "c1n";
    rep.lhs = std::pow(hol.sup, N);
    rep.rhs = std::pow(0.5 * omega.diameter(), N - 1) * mass.value;
    rep.ratio = rep.lhs / rep.rhs;
    rep.witness = {hol.x, hol.y};
    rep.grid = grid_label(opt) + " " + quad_label(omega, quad_level);
    return rep;
}

InequalityReport check_c1n_pl(const PLConvex& p, const Domain& omega,
                              const PairOptions& opt) {
    if (p.dim != omega.dim())
        throw precondition_error("nodal grid and domain dimensions disagree");
    const int N = p.dim;
    const HolderReport hol = holder_core(
        [&p](const Eigen::VectorXd& x) { return pl_value(p, x); }, omega,
        1.0 / static_cast<double>(N), opt);
    InequalityReport rep;
    rep.check = "c1n";
    rep.lhs = std::pow(hol.sup, N);
    rep.rhs = std::pow(0.5 * omega.diameter(), N - 1) * normal_image_area(p, omega);
    rep.ratio = rep.lhs / rep.rhs;
    rep.witness = {hol.x, hol.y};
    rep.grid = grid_label(opt) + " nodal";
    return rep;
}

Eigen::VectorXd find_min(const ConvexFamily& u, const Domain& omega) {
    if (u.dim() != omega.dim())
        throw precondition_error("family and domain dimensions disagree");
    // derivative-free pattern descent: jets can be singular at the minimizer
    // itself (radial powers below the second power), values never are
    Eigen::VectorXd x = domain_center(omega);
    double fx = u.value(x);
    const double diam = omega.diameter();
    double h = 0.25 * diam;
    for (int round = 0; round < 400 && h > 1e-12 * diam; ++round) {
        bool improved = false;
        for (int i = 0; i < omega.dim(); ++i) {
            for (double sgn : {1.0, -1.0}) {
                Eigen::VectorXd cand = x;
                cand[i] += sgn * h;
                if (!omega.contains(cand)) continue;
                const double fc = u.value(cand);
                if (fc < fx) {
                    x = cand;
                    fx = fc;
                    improved = true;
                }
            }
        }
        if (!improved) h *= 0.5;
    }
    return x;
}

Domain level_set_polytope(const ConvexFamily& u, const Domain& omega, double t,
                          int directions, int workers) {
    const int N = omega.dim();
    const Eigen::VectorXd x0 = find_min(u, omega);
    if (!(u.value(x0) < t - 1e-12 * (1.0 + std::abs(t))))
        throw numeric_error("level set is empty at this height");
    const int M = directions > 0 ? directions : default_direction_count(N);
    const Eigen::MatrixXd dirs = sphere_directions(N, M);
    Eigen::VectorXd radii(M);
    const double diam = omega.diameter();
    parallel_for(static_cast<std::size_t>(M), workers, [&](std::size_t m) {
        const Eigen::VectorXd d = dirs.row(static_cast<int>(m)).transpose();
        const auto below = [&](double r) {
            const Eigen::VectorXd p = x0 + r * d;
            return omega.contains(p) && u.value(p) < t;
        };
        double lo = 0.0, hi = 1e-3 * diam;
        int guard = 0;
        while (below(hi) && guard++ < 200) {
            lo = hi;
            hi *= 2.0;
            if (hi > 8.0 * diam) break;
        }
        for (int it = 0; it < 200 && hi - lo > 1e-13 * diam; ++it) {
            const double mid = 0.5 * (lo + hi);
            (below(mid) ? lo : hi) = mid;
        }
        radii[static_cast<long>(m)] = 0.5 * (lo + hi);
    });
    return Domain::polytope(x0, dirs, radii);
}

double boundary_distance(const Domain& dom, const Eigen::VectorXd& x) {
    switch (dom.kind()) {
    case Domain::Kind::Ball:
        return dom.radius() - (x - dom.center()).norm();
    case Domain::Kind::Box:
    case Domain::Kind::OrthantBox: {
        double d = std::numeric_limits<double>::infinity();
        for (int i = 0; i < dom.dim(); ++i)
            d = std::min({d, x[i] - dom.lo()[i], dom.hi()[i] - x[i]});
        return d;
    }
    case Domain::Kind::Polytope: {
        // distance to the densely sampled supporting planes
        const Eigen::VectorXd rel = x - dom.center();
        double d = std::numeric_limits<double>::infinity();
        for (int m = 0; m < dom.dirs().rows(); ++m)
            d = std::min(d, dom.radii()[m] - rel.dot(dom.dirs().row(m).transpose()));
        return d;
    }
    }
    return 0.0;
}

InequalityReport check_gradient_sublevel(const ConvexFamily& u, const Domain& omega,
                                         double s, double t, int directions, int level,
                                         int workers) {
    if (!(s < t && t <= 0.0))
        throw precondition_error("needs levels s < t <= 0 below the boundary value");
    check_vanishing_boundary(u, omega);
    const int N = omega.dim();
    const Domain inner = level_set_polytope(u, omega, s, directions, workers);
    const Domain outer = level_set_polytope(u, omega, t, directions, workers);

    double lhs = 0.0;
    Eigen::VectorXd wit = inner.center();
    const auto visit = [&](const Eigen::VectorXd& x) {
        const double g = u.gradient(x).norm();
        if (g > lhs) {
            lhs = g;
            wit = x;
        }
    };
    for (int m = 0; m < inner.dirs().rows(); ++m)
        visit(inner.center() + inner.radii()[m] * inner.dirs().row(m).transpose());
    quad_sweep(inner, 1, [&](const Eigen::VectorXd& x, double) { visit(x); });

    const MassReport mass = ma_mass(u, outer, level, workers);
    InequalityReport rep;
    rep.check = "gradient-sublevel";
    rep.lhs = lhs;
    rep.rhs = std::pow(outer.diameter() / (t - s), N - 1) * mass.value;
    rep.ratio = rep.lhs / rep.rhs;
    rep.witness = {wit};
    rep.grid = quad_label(outer, level);
    return rep;
}

InequalityReport check_gradient_interior(const ConvexFamily& u, const Domain& omega,
                                         const Eigen::VectorXd& x, int level, int workers) {
    check_vanishing_boundary(u, omega);
    const int N = omega.dim();
    if (!omega.contains(x, 1e-9 * omega.diameter()))
        throw precondition_error("evaluation point must be interior");
    const double dist = boundary_distance(omega, x);
    const MassReport mass = ma_mass(u, omega, level, workers);
    InequalityReport rep;
    rep.check = "gradient-interior";
    rep.lhs = u.gradient(x).norm();
    rep.rhs = std::pow(0.5 * omega.diameter() / dist, N - 1) * mass.value;
    rep.ratio = rep.lhs / rep.rhs;
    rep.witness = {x};
    rep.grid = quad_label(omega, level);
    return rep;
}

InequalityReport check_cone_lemma(const ConvexFamily& u, const Domain& omega, double t,
                                  double s, int directions, int level, int workers) {
    if (!(s < t && t <= 0.0))
        throw precondition_error("needs levels s < t <= 0 below the boundary value");
    check_vanishing_boundary(u, omega);
    const int N = omega.dim();
    const Domain inner = level_set_polytope(u, omega, s, directions, workers);
    const Domain outer = level_set_polytope(u, omega, t, directions, workers);
    const double D = outer.diameter();

    double lhs = 0.0;
    Eigen::VectorXd wit = inner.center();
    const auto visit = [&](const Eigen::VectorXd& x) {
        const double h = t - u.value(x);
        const double d = boundary_distance(outer, x);
        if (!(h > 0.0) || !(d > 0.0)) return;
        const double val = (h / d) * std::pow(h / D, N - 1);
        if (val > lhs) {
            lhs = val;
            wit = x;
        }
    };
    for (int m = 0; m < inner.dirs().rows(); ++m)
        visit(inner.center() + inner.radii()[m] * inner.dirs().row(m).transpose());
    quad_sweep(inner, 1, [&](const Eigen::VectorXd& x, double) { visit(x); });

    const MassReport mass = ma_mass(u, outer, level, workers);
    InequalityReport rep;
    rep.check = "cone";
    rep.lhs = lhs;
    rep.rhs = mass.value;
    rep.ratio = rep.lhs / rep.rhs;
    rep.witness = {wit};
    rep.grid = quad_label(outer, level);
    return rep;
}

InequalityReport check_lemma42(const ConvexFamily& u, const Domain& omega, double shift,
                               int level, int workers) {
    if (u.dim() != omega.dim())
        throw precondition_error("family and domain dimensions disagree");
    const int N = omega.dim();
    check_critical_origin(u, omega, shift);
    double rmin = 0.0, rmax = 0.0;
    boundary_radii_about_origin(u, omega, shift, rmin, rmax);
    const MassReport mass = ma_mass(u, omega, level, workers);
    InequalityReport rep;
    rep.check = "radius-upper";
    rep.lhs = std::pow(rmax, -N);
    rep.rhs = mass.value;
    rep.ratio = rep.lhs / rep.rhs;
    const double bound = mass.value / unit_ball_volume(N);
    rep.pass = rep.lhs <= bound * (1.0 + 1e-9);
    rep.margin = bound / rep.lhs;
    rep.witness = {};
    rep.grid = quad_label(omega, level);
    return rep;
}

InequalityReport check_lemma43(const ConvexFamily& u, const Domain& omega, double sigma,
                               double shift, int level, int workers) {
    if (u.dim() != omega.dim())
        throw precondition_error("family and domain dimensions disagree");
    if (!(sigma > 0.0 && sigma < 1.0))
        throw precondition_error("shrink factor must lie in (0, 1)");
    const int N = omega.dim();
    check_critical_origin(u, omega, shift);
    double rmin = 0.0, rmax = 0.0;
    boundary_radii_about_origin(u, omega, shift, rmin, rmax);
    const Domain shrunk = omega.dilate(sigma, Eigen::VectorXd::Zero(N));
    const MassReport mass = ma_mass(u, shrunk, level, workers);
    InequalityReport rep;
    rep.check = "radius-lower";
    rep.lhs = std::pow(rmin, -N);
    rep.rhs = std::pow(1.0 - sigma, N) * mass.value;
    rep.ratio = rep.lhs / rep.rhs;
    const double bound = rep.rhs / (std::pow(2.0, N) * unit_ball_volume(N));
    rep.pass = rep.lhs >= bound * (1.0 - 1e-9);
    rep.margin = rep.lhs / bound;
    rep.witness = {};
    rep.grid = quad_label(shrunk, level);
    return rep;
}

} // namespace malab
