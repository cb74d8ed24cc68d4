#include "malab/measure.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>

#include <json.hpp>

#include "malab/report.hpp"

namespace malab {

double det_hessian_at(const ConvexFamily& u, const Eigen::VectorXd& x) {
    if (auto d = u.det_hessian_closed_form(x)) return *d;
    return u.eval_jet(x, 2).hessian().determinant();
}

namespace {

double mass_on(const ConvexFamily& u, const Domain& dom, int level, int workers) {
    const std::size_t n = quad_size(dom, level);
    std::vector<double> terms(n);
    parallel_for(n, workers, [&](std::size_t i) {
        Eigen::VectorXd x;
        double w = 0.0;
        quad_node(dom, level, i, x, w);
        terms[i] = det_hessian_at(u, x) * w;
    });
    return stable_sum(terms);
}

double volume_on(const Domain& dom, int level, int workers) {
    const std::size_t n = quad_size(dom, level);
    std::vector<double> terms(n);
    parallel_for(n, workers, [&](std::size_t i) {
        Eigen::VectorXd x;
        double w = 0.0;
        quad_node(dom, level, i, x, w);
        terms[i] = w;
    });
    return stable_sum(terms);
}

int default_direction_count(int dim) {
    if (dim == 2) return 256;
    if (dim == 3) return 2048;
    return 64 * dim * dim;
}

} // namespace

MassReport ma_mass(const ConvexFamily& u, const Domain& dom, int max_level, int workers) {
    if (dom.dim() != u.dim())
        throw precondition_error("mass domain dimension does not match the family");
    if (max_level < 1) throw precondition_error("ma_mass needs at least two refinement levels");
    MassReport rep;
    for (int level = 0; level <= max_level; ++level) {
        rep.levels.push_back(mass_on(u, dom, level, workers));
        const std::size_t k = rep.levels.size();
        if (k >= 3) {
            const double d2 = rep.levels[k - 1] - rep.levels[k - 2];
            const double d1 = rep.levels[k - 2] - rep.levels[k - 3];
            // geometric growth of the refinement increments: the tail keeps
            // producing more mass the closer the rule looks at it
            if (d1 > 0.0 && d2 >= 1.3 * d1 && d2 > 1e-6 * std::abs(rep.levels[k - 1]))
                throw numeric_error(
                    "mass keeps growing under refinement: determinant looks non-integrable");
        }
    }
    rep.level = max_level;
    rep.value = rep.levels.back();
    rep.error_estimate = std::abs(rep.levels[rep.levels.size() - 1] -
                                  rep.levels[rep.levels.size() - 2]);
    return rep;
}

Eigen::VectorXd SubLevelSet::vertex(int m) const {
    return x0 + radii[m] * directions.row(m).transpose();
}

Domain SubLevelSet::polytope() const { return Domain::polytope(x0, directions, radii); }

std::string SubLevelSet::to_json() const {
    nlohmann::ordered_json j;
    j["x0"] = std::vector<double>(x0.data(), x0.data() + x0.size());
    j["t"] = t;
    auto dirs = nlohmann::ordered_json::array();
    for (Eigen::Index m = 0; m < directions.rows(); ++m) {
        auto row = nlohmann::ordered_json::array();
        for (Eigen::Index a = 0; a < directions.cols(); ++a) row.push_back(directions(m, a));
        dirs.push_back(std::move(row));
    }
    j["directions"] = std::move(dirs);
    j["radii"] = std::vector<double>(radii.data(), radii.data() + radii.size());
    j["diameter"] = diameter;
    j["volume"] = volume;
    return j.dump(2);
}

SubLevelSet sublevel(const ConvexFamily& u, const Eigen::VectorXd& x0, double t,
                     int directions, int workers) {
    if (!(t > 0.0)) throw precondition_error("sublevel height must be positive");
    if (x0.size() != u.dim())
        throw precondition_error("sublevel base point has the wrong dimension");
    const int dim = u.dim();
    const int M = directions > 0 ? directions : default_direction_count(dim);
    // the base may sit on a benign singular point (a radial-power vertex, say)
    // where value and gradient still extend continuously; only points where
    // they do not are rejected
    const double u0 = u.value(x0);
    const Eigen::VectorXd g0 = u.gradient(x0);
    if (!std::isfinite(u0) || !g0.allFinite())
        throw domain_error("sublevel base point is outside the family domain");
    const Eigen::MatrixXd dirs = sphere_directions(dim, M);
    const double scale0 = 1.0 + x0.norm();

    const auto excess = [&](const Eigen::VectorXd& d, double r) {
        const Eigen::VectorXd x = x0 + r * d;
        return u.value(x) - u0 - r * g0.dot(d) - t;
    };

    Eigen::VectorXd radii(M);
    parallel_for(static_cast<std::size_t>(M), workers, [&](std::size_t m) {
        const Eigen::VectorXd d = dirs.row(static_cast<Eigen::Index>(m)).transpose();
        double lo = 0.0;
        double hi = 1e-3 * scale0;
        for (;;) {
            if (hi > 1e8 * scale0)
                throw numeric_error("sub-level set is unbounded at this height");
            if (!u.in_domain(x0 + hi * d) || excess(d, hi) >= 0.0) break;
            lo = hi;
            hi *= 2.0;
        }
        for (int it = 0; it < 200 && hi - lo > 1e-10 * hi; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (u.in_domain(x0 + mid * d) && excess(d, mid) < 0.0)
                lo = mid;
            else
                hi = mid;
        }
        // a genuine level crossing ends with the excess nearly zero; still far
        // below zero means the bisection ran into the family domain edge
        if (lo > 0.0 && excess(d, lo) < -1e-6 * t)
            throw precondition_error("sub-level set reaches the family domain boundary");
        radii[static_cast<Eigen::Index>(m)] = 0.5 * (lo + hi);
    });

    SubLevelSet s;
    s.x0 = x0;
    s.t = t;
    s.directions = dirs;
    s.radii = radii;
    const Domain poly = s.polytope();
    s.diameter = poly.diameter();
    s.volume = poly.volume();
    return s;
}

double doubling_ratio(const ConvexFamily& u, const SubLevelSet& S, double sigma, int level,
                      int workers) {
    if (!(sigma > 0.0 && sigma < 1.0))
        throw precondition_error("doubling ratio needs sigma in (0, 1)");
    const Domain big = S.polytope();
    const Domain small = big.dilate(sigma, S.x0);
    const double mb = mass_on(u, big, level, workers);
    const double ms = mass_on(u, small, level, workers);
    if (!(ms > 0.0)) throw numeric_error("no mass in the shrunken sub-level set");
    return mb / ms;
}

double average_density(const ConvexFamily& u, const SubLevelSet& S, int level, int workers) {
    const Domain poly = S.polytope();
    const double vol = volume_on(poly, level, workers);
    if (!(vol > 0.0)) throw numeric_error("degenerate sub-level set");
    return mass_on(u, poly, level, workers) / vol;
}

double halving_ratio(const ConvexFamily& u, const Eigen::VectorXd& x0,
                     const Eigen::VectorXd& z) {
    if (!u.in_domain(x0 + z) || !u.in_domain(x0 + 0.5 * z))
        throw domain_error("halving ratio probe leaves the family domain");
    const double u0 = u.value(x0);
    const Eigen::VectorXd g0 = u.gradient(x0);
    if (!std::isfinite(u0) || !g0.allFinite())
        throw domain_error("halving ratio base point is outside the family domain");
    const double vz = u.value(x0 + z) - u0 - g0.dot(z);
    const double vh = u.value(x0 + 0.5 * z) - u0 - 0.5 * g0.dot(z);
    if (!(vz > 0.0)) throw numeric_error("flat direction: tangent excess vanishes at z");
    return vh / vz;
}

std::string family_tag_name(ConvexFamily::Tag tag) {
    switch (tag) {
    case ConvexFamily::Tag::Quadratic: return "quadratic";
    case ConvexFamily::Tag::WarrenSeparable: return "warren";
    case ConvexFamily::Tag::TWSeparable: return "tw";
    case ConvexFamily::Tag::ExpPower: return "exp-power";
    case ConvexFamily::Tag::HalfExp: return "half-exp";
    case ConvexFamily::Tag::ProductHalfSpace: return "product-halfspace";
    case ConvexFamily::Tag::ProductFull: return "product-full";
    case ConvexFamily::Tag::PowerRadial: return "power-radial";
    case ConvexFamily::Tag::SlabSeparable: return "slab";
    }
    return "unknown";
}

std::string domain_kind_name(Domain::Kind kind) {
    switch (kind) {
    case Domain::Kind::Ball: return "ball";
    case Domain::Kind::Box: return "box";
    case Domain::Kind::OrthantBox: return "orthant-box";
    case Domain::Kind::Polytope: return "polytope";
    }
    return "unknown";
}

std::string mass_csv_row(const ConvexFamily& u, const Domain& dom, const MassReport& rep) {
    return csv_join({family_tag_name(u.tag()), domain_kind_name(dom.kind()),
                     std::to_string(quad_size(dom, rep.level)), format_double(rep.value),
                     format_double(rep.error_estimate)});
}

} // namespace malab
