#include "malab/slab.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <json.hpp>

#include "malab/report.hpp"

namespace malab {

namespace {

constexpr double kPi = 3.14159265358979323846;

double pinch_seam(double gamma, double sigma0) {
    return -gamma * (gamma + 1.0) / (sigma0 * sigma0);
}

// Smoothstep ramp of the pinch target from its seam value to -1/2 over
// [sigma0, 1.25 sigma0], constant afterwards. C2 at both ends, so the wall
// profile integrated against it is C4 across the seam.
struct PinchRamp {
    double q;       // gamma (gamma + 1)
    double sigma0;

    void eval(double x, double& p, double& dp, double& ddp) const {
        const double g = -q / (x * x);
        const double dg = 2.0 * q / (x * x * x);
        const double ddg = -6.0 * q / (x * x * x * x);
        const double width = 0.25 * sigma0;
        const double s = (x - sigma0) / width;
        if (s <= 0.0) {
            p = g;
            dp = dg;
            ddp = ddg;
            return;
        }
        if (s >= 1.0) {
            p = -0.5;
            dp = 0.0;
            ddp = 0.0;
            return;
        }
        const double B = s * s * s * (10.0 - 15.0 * s + 6.0 * s * s);
        const double dB = 30.0 * s * s * (1.0 - s) * (1.0 - s);
        const double ddB = 60.0 * s * (1.0 - s) * (1.0 - 2.0 * s);
        const double sp = 1.0 / width;
        const double diff = -0.5 - g;
        p = g + B * diff;
        dp = (1.0 - B) * dg + sp * dB * diff;
        ddp = (1.0 - B) * ddg - 2.0 * sp * dB * dg + sp * sp * ddB * diff;
    }
};

// pinch of a curve and its first two derivatives, from derivatives through
// order four: p = z''/z - 2 (z'/z)^2
void curve_pinch(const std::array<double, 5>& z, double& p, double& dp, double& ddp) {
    const double psi = z[1] / z[0];
    const double A = z[2] / z[0];
    const double dpsi = A - psi * psi;
    const double dA = z[3] / z[0] - A * psi;
    const double ddpsi = dA - 2.0 * psi * dpsi;
    const double ddA = z[4] / z[0] - (z[3] / z[0]) * psi - dA * psi - A * dpsi;
    p = A - 2.0 * psi * psi;
    dp = dA - 4.0 * psi * dpsi;
    ddp = ddA - 4.0 * dpsi * dpsi - 4.0 * psi * ddpsi;
}

struct State {
    double v, w;
};

template <typename Accel>
State rk4_step(const Accel& accel, double x, State s, double h) {
    const double k1v = s.w, k1w = accel(x, s.v, s.w);
    const double k2v = s.w + 0.5 * h * k1w;
    const double k2w = accel(x + 0.5 * h, s.v + 0.5 * h * k1v, s.w + 0.5 * h * k1w);
    const double k3v = s.w + 0.5 * h * k2w;
    const double k3w = accel(x + 0.5 * h, s.v + 0.5 * h * k2v, s.w + 0.5 * h * k2w);
    const double k4v = s.w + h * k3w;
    const double k4w = accel(x + h, s.v + h * k3v, s.w + h * k3w);
    return {s.v + h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v),
            s.w + h / 6.0 * (k1w + 2.0 * k2w + 2.0 * k3w + k4w)};
}

constexpr double kOdeStep = 1.0 / 2048.0;
constexpr double kSearchWindow = 4.0 * kPi;

} // namespace

std::pair<double, double> lambda_roots(double gamma) {
    if (!(gamma > 0.0)) throw precondition_error("wall exponent must be positive");
    const double disc = 1.0 - 4.0 * gamma * (gamma + 1.0);
    if (!(disc > 0.0))
        throw precondition_error(
            "wall exponent too large: the indicial equation needs gamma < (sqrt(2)-1)/2");
    const double root = std::sqrt(disc);
    return {0.5 * (1.0 - root), 0.5 * (1.0 + root)};
}

double default_sigma0(double gamma) {
    lambda_roots(gamma); // validates the exponent
    return std::sqrt(1.5 * gamma * (gamma + 1.0));
}

CurvePtr build_zeta(double gamma, double sigma0) {
    lambda_roots(gamma);
    if (!(sigma0 > 0.0)) throw precondition_error("seam position must be positive");
    const double p0 = pinch_seam(gamma, sigma0);
    if (!(p0 >= -0.75 && p0 < -0.5))
        throw precondition_error("seam pinch value must lie in [-3/4, -1/2)");

    const double q = gamma * (gamma + 1.0);
    const PinchRamp ramp{q, sigma0};
    const auto accel = [ramp](double x, double v, double w) {
        double p, dp, ddp;
        ramp.eval(x, p, dp, ddp);
        return p * v + 2.0 * w * w / v;
    };

    const double xmax = sigma0 + kSearchWindow + 1.0;
    const auto steps = static_cast<std::size_t>(std::ceil((xmax - sigma0) / kOdeStep));
    std::vector<double> v(steps + 1), dv(steps + 1);
    State s{std::pow(sigma0, gamma), gamma * std::pow(sigma0, gamma - 1.0)};
    v[0] = s.v;
    dv[0] = s.w;
    for (std::size_t k = 0; k < steps; ++k) {
        s = rk4_step(accel, sigma0 + kOdeStep * static_cast<double>(k), s, kOdeStep);
        v[k + 1] = s.v;
        dv[k + 1] = s.w;
    }

    auto closure = [ramp](double x, double val, double slope) -> std::array<double, 3> {
        double p, dp, ddp;
        ramp.eval(x, p, dp, ddp);
        const double psi = slope / val;
        const double psi2 = psi * psi;
        return {val * (p + 2.0 * psi2), val * (5.0 * psi * p + 6.0 * psi2 * psi + dp),
                val * (ddp + 6.0 * psi * dp + 5.0 * p * p + 28.0 * p * psi2 +
                       24.0 * psi2 * psi2)};
    };
    CurvePtr zeta = curve_piecewise(sigma0, power_curve(1.0, gamma),
                                    ode_curve(sigma0, kOdeStep, std::move(v), std::move(dv),
                                              std::move(closure)));

    // the continued pinch has to stay inside the band that keeps the profile
    // positive and the convexity inequality available
    for (int k = 0; k <= 1000; ++k) {
        const double x = sigma0 + 5.0 * static_cast<double>(k) / 1000.0;
        const auto z = zeta->derivs(x);
        const double p = z[2] / z[0] - 2.0 * (z[1] / z[0]) * (z[1] / z[0]);
        if (!(p >= -1.0 - 1e-9 && p < -0.25))
            throw numeric_error("wall profile pinch left the band [-1, -1/4)");
    }
    return zeta;
}

EtaProfile build_eta(double gamma, double lambda, const CurvePtr& zeta, double sigma0) {
    const auto [l1, l2] = lambda_roots(gamma);
    if (!(lambda > l1 && lambda < l2))
        throw precondition_error("ceiling exponent must lie strictly between the indicial roots");
    if (!zeta || !(zeta->hi() >= sigma0 + kSearchWindow - 1e-9) || !zeta->contains(sigma0))
        throw precondition_error("wall profile does not cover the search window");

    const double q = gamma * (gamma + 1.0);
    const double g2 = (lambda * (lambda - 1.0) + q) * std::pow(sigma0, lambda - 2.0);
    // forcing must be negative, otherwise the profile never turns back to zero
    if (!(g2 < 0.0)) throw precondition_error("ceiling forcing term is not negative");

    const auto pinch_at = [&zeta](double x) {
        const auto z = zeta->derivs(x);
        return z[2] / z[0] - 2.0 * (z[1] / z[0]) * (z[1] / z[0]);
    };
    const auto accel = [&pinch_at, g2](double x, double v, double) {
        return pinch_at(x) * v + g2;
    };

    const auto steps = static_cast<std::size_t>(std::ceil(kSearchWindow / kOdeStep));
    std::vector<double> v(steps + 1), dv(steps + 1);
    State s{std::pow(sigma0, lambda), lambda * std::pow(sigma0, lambda - 1.0)};
    v[0] = s.v;
    dv[0] = s.w;
    std::size_t cross = 0;
    for (std::size_t k = 0; k < steps; ++k) {
        s = rk4_step(accel, sigma0 + kOdeStep * static_cast<double>(k), s, kOdeStep);
        v[k + 1] = s.v;
        dv[k + 1] = s.w;
        if (cross == 0 && !(s.v > 0.0)) cross = k + 1;
    }
    if (cross == 0)
        throw numeric_error("ceiling profile failed to cross zero inside the search window");

    CurvePtr zeta_copy = zeta;
    auto closure = [zeta_copy, g2](double x, double val, double slope) -> std::array<double, 3> {
        double p, dp, ddp;
        curve_pinch(zeta_copy->derivs(x), p, dp, ddp);
        const double acc = p * val + g2;
        return {acc, dp * val + p * slope, ddp * val + 2.0 * dp * slope + p * acc};
    };
    CurvePtr eta = curve_piecewise(sigma0, power_curve(1.0, lambda),
                                   ode_curve(sigma0, kOdeStep, std::move(v), std::move(dv),
                                             std::move(closure)));

    double a = sigma0 + kOdeStep * static_cast<double>(cross - 1);
    double b = sigma0 + kOdeStep * static_cast<double>(cross);
    for (int it = 0; it < 80; ++it) {
        const double mid = 0.5 * (a + b);
        (eta->value(mid) > 0.0 ? a : b) = mid;
    }
    const double omega = 0.5 * (a + b);
    if (!(eta->derivs(omega)[1] < 0.0))
        throw numeric_error("ceiling profile is not strictly decreasing at its zero");
    return {std::move(eta), omega};
}

SlabCounterexample assemble_slab(int N, double gamma, double lambda) {
    if (N < 5) throw precondition_error("slab counterexample needs dimension N >= 5");
    if (!(gamma > 1.0 / static_cast<double>(N)))
        throw precondition_error("wall exponent must exceed 1/N so the mass stays finite");
    const auto [l1, l2] = lambda_roots(gamma);
    if (!(lambda > l1 && lambda < l2))
        throw precondition_error("ceiling exponent must lie strictly between the indicial roots");
    if (!(lambda > gamma))
        throw precondition_error("ceiling exponent must exceed the wall exponent");

    const double sigma0 = default_sigma0(gamma);
    CurvePtr zeta = build_zeta(gamma, sigma0);
    EtaProfile prof = build_eta(gamma, lambda, zeta, sigma0);
    ConvexFamily fam = ConvexFamily::slab(N - 1, zeta, prof.eta, prof.omega);

    // convexity inequality pinch * eta - eta'' >= 0, i.e. the determinant is
    // nonnegative out to the curved rim
    for (int k = 0; k < 2000; ++k) {
        const double x = prof.omega * (static_cast<double>(k) + 0.5) / 2000.0;
        const auto z = zeta->derivs(x);
        const auto e = prof.eta->derivs(x);
        const double p = z[2] / z[0] - 2.0 * (z[1] / z[0]) * (z[1] / z[0]);
        const double lhs = p * e[0] - e[2];
        const double scale = std::abs(p * e[0]) + std::abs(e[2]) + 1.0;
        if (!(lhs >= -1e-10 * scale))
            throw numeric_error("slab convexity inequality fails on the verification grid");
    }

    return SlabCounterexample{N, gamma, lambda, sigma0, prof.omega,
                              std::move(zeta), std::move(prof.eta), std::move(fam)};
}

double slab_mass(const SlabCounterexample& s, int level, int workers) {
    if (level < 0 || level > 12) throw precondition_error("slab mass level must be in [0, 12]");
    const int n = s.N - 1;
    const double surf = static_cast<double>(s.N - 1) * unit_ball_volume(n); // |S^{n-1}|
    // n * omega_n is the sphere area in dimension n of the cross-section

    // panel boundaries: dyadic toward the pinched edge, plus the two profile
    // seams so every panel sees a C2 integrand
    const int dyadic = 16 + 6 * level;
    std::vector<double> cuts;
    cuts.push_back(s.omega);
    for (int p = 1; p <= dyadic; ++p) cuts.push_back(s.omega * std::ldexp(1.0, -p));
    cuts.push_back(0.0);
    if (s.sigma0 < s.omega) cuts.push_back(s.sigma0);
    if (1.25 * s.sigma0 < s.omega) cuts.push_back(1.25 * s.sigma0);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    static const double gx[8] = {-0.96028985649753623168, -0.79666647741362673959,
                                 -0.52553240991632898582, -0.18343464249564980494,
                                 0.18343464249564980494,  0.52553240991632898582,
                                 0.79666647741362673959,  0.96028985649753623168};
    static const double gw[8] = {0.10122853629037625915, 0.22238103445337447054,
                                 0.31370664587788728734, 0.36268378337836198297,
                                 0.36268378337836198297, 0.31370664587788728734,
                                 0.22238103445337447054, 0.10122853629037625915};

    const auto panels = cuts.size() - 1;
    std::vector<double> slot(panels, 0.0);
    parallel_for(panels, workers, [&](std::size_t pi) {
        const double a = cuts[pi], b = cuts[pi + 1];
        const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
        double acc = 0.0;
        for (int g = 0; g < 8; ++g) {
            const double x = mid + half * gx[g];
            const auto z = s.zeta->derivs(x);
            const auto e = s.eta->derivs(x);
            if (!(e[0] > 0.0)) continue; // at the rim the section is empty
            const double rm2 = e[0] / z[0];
            const double rm = std::sqrt(rm2);
            const double C = z[2] - 2.0 * z[1] * z[1] / z[0];
            const double D = -e[2];
            const double radial = C * std::pow(rm, n + 2) / static_cast<double>(n + 2) +
                                  D * std::pow(rm, n) / static_cast<double>(n);
            acc += gw[g] * half * std::pow(2.0 * z[0], n) * radial;
        }
        slot[pi] = acc;
    });
    return surf * stable_sum(slot);
}

HolderReport slab_holder_probe(const SlabCounterexample& s, double alpha, int levels,
                               int pairs_per_level, std::uint64_t seed) {
    if (!(alpha > 0.0 && alpha <= 1.0))
        throw precondition_error("holder exponent must lie in (0, 1]");
    if (levels < 1 || pairs_per_level < 16)
        throw precondition_error("holder probe needs at least one level and 16 pairs");

    // closure values from the profiles; the corner x1 = 0 carries the limit 0
    const auto val = [&s](double x1, double rho) {
        if (x1 <= 0.0) return 0.0;
        return s.zeta->value(x1) * rho * rho - s.eta->value(x1);
    };
    const auto rim = [&s](double x1) {
        if (x1 <= 0.0) return 0.0;
        const double e = s.eta->value(x1);
        if (e <= 0.0) return 0.0;
        return std::sqrt(e / s.zeta->value(x1));
    };

    HolderReport rep;
    rep.x = Eigen::VectorXd::Zero(s.N);
    rep.y = Eigen::VectorXd::Zero(s.N);
    double bx1 = 0, br1 = 0, bx2 = 0, br2 = 0;
    double sup = 0.0;

    const auto consider = [&](double x1, double r1, double y1, double r2) {
        const double dx = x1 - y1, dr = r1 - r2;
        const double dist = std::sqrt(dx * dx + dr * dr);
        if (!(dist > 0.0)) return;
        const double quot = std::abs(val(x1, r1) - val(y1, r2)) / std::pow(dist, alpha);
        if (quot > sup) {
            sup = quot;
            bx1 = x1;
            br1 = r1;
            bx2 = y1;
            br2 = r2;
        }
    };

    std::uint64_t index = 0;
    for (int lev = 0; lev < levels; ++lev) {
        // deterministic backbone: nested dyadic grids, one uniform across the
        // slab and one geometric into the pinched edge
        const int uniform = 64 << lev;
        for (int k = 1; k < uniform; ++k) {
            const double x1 = s.omega * static_cast<double>(k) / static_cast<double>(uniform);
            consider(x1, 0.0, x1, rim(x1));        // axis against rim
            consider(x1, 0.0, 0.0, 0.0);           // axis against the corner
            consider(x1, rim(x1), 0.0, 0.0);       // rim against the corner
        }
        const int geom = 2 * (lev + 1) * 12;
        for (int j = 0; j <= geom; ++j) {
            const double x1 = s.sigma0 * std::ldexp(1.0, -j);
            consider(x1, 0.0, 0.0, 0.0);
            consider(x1, rim(x1), 0.0, 0.0);
            consider(x1, 0.0, x1, rim(x1));
            consider(2.0 * x1, rim(x1), x1, rim(x1));
        }
        // random exploration, biased to the wall scale of this level
        const double scale = s.sigma0 * std::ldexp(1.0, -lev);
        for (int k = 0; k < pairs_per_level; ++k) {
            Rng rng = Rng::for_index(seed, index++);
            double x1, y1;
            if (k % 2 == 0) {
                x1 = s.omega * rng.uniform();
                y1 = s.omega * rng.uniform();
            } else {
                x1 = scale * (0.25 + 1.75 * rng.uniform());
                y1 = x1 * rng.uniform();
            }
            const double r1 = rim(x1) * rng.uniform();
            const double r2 = rim(y1) * rng.uniform();
            consider(x1, r1, y1, r2);
        }
        rep.level_sups.push_back(sup);
    }

    rep.sup = sup;
    rep.x[0] = bx1;
    rep.x[1] = br1;
    rep.y[0] = bx2;
    rep.y[1] = br2;
    return rep;
}

std::string SlabCounterexample::to_json(int profile_samples) const {
    if (profile_samples < 2) throw precondition_error("profile needs at least two samples");
    nlohmann::ordered_json j;
    j["N"] = N;
    j["gamma"] = gamma;
    j["lambda"] = lambda;
    j["sigma0"] = sigma0;
    j["omega"] = omega;
    nlohmann::ordered_json xs = nlohmann::ordered_json::array();
    nlohmann::ordered_json zs = nlohmann::ordered_json::array();
    nlohmann::ordered_json es = nlohmann::ordered_json::array();
    for (int k = 1; k <= profile_samples; ++k) {
        const double x = omega * static_cast<double>(k) / (profile_samples + 1.0);
        xs.push_back(x);
        zs.push_back(zeta->value(x));
        es.push_back(eta->value(x));
    }
    j["x1"] = std::move(xs);
    j["zeta"] = std::move(zs);
    j["eta"] = std::move(es);
    return j.dump(2);
}

} // namespace malab
