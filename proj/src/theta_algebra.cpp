#include "malab/theta_algebra.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace malab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

void require_range(const ThetaRange& r, double theta, const char* family) {
    if (!r.contains(theta))
        throw precondition_error(std::string(family) + " needs theta in " + r.describe() +
                                 ", got " + fmt(theta));
}

// phi for the negative finite branch: phi'' is closed form, phi and phi' are
// repeated integrals anchored at t = 1 (the anchor only shifts the affine
// part, which beta5 and beta6 parameterize anyway).
class QuadraturePhi final : public ScalarCurve {
public:
    QuadraturePhi(int n, double theta, double c, double b4, double b5, double b6)
        : n_(n), inv_theta_(1.0 / theta), c_(c), b4_(b4), b5_(b5), b6_(b6) {}

    std::array<double, 5> derivs(double t) const override {
        if (!(t > 0.0)) throw domain_error("profile curve evaluated outside t > 0");
        const auto f = [this](double s) { return core(s); };
        const auto fmoment = [&](double s) { return (t - s) * core(s); };
        using gk = boost::math::quadrature::gauss_kronrod<double, 15>;
        const double i1 = gk::integrate(f, 1.0, t, 12, 1e-10);
        const double i2 = gk::integrate(fmoment, 1.0, t, 12, 1e-10);

        const double p = -inv_theta_;
        const double base = std::pow(t, n_) * std::pow(t - c_, p);
        const double l1 = n_ / t + p / (t - c_);
        const double l2 = -n_ / (t * t) - p / ((t - c_) * (t - c_));
        // derivatives of t^n (t-c)^p via its log-derivative
        const double d1 = base * l1;
        const double d2 = base * (l1 * l1 + l2);
        return {b4_ * i2 + b5_ * t + b6_, b4_ * i1 + b5_, b4_ * base, b4_ * d1, b4_ * d2};
    }
    double lo() const override { return 0.0; }
    double hi() const override { return kInf; }

private:
    double core(double s) const { return std::pow(s, n_) * std::pow(s - c_, -inv_theta_); }

    int n_;
    double inv_theta_, c_, b4_, b5_, b6_;
};

} // namespace

bool ThetaRange::contains(double th) const {
    if (lo_open ? !(th > lo) : !(th >= lo)) return false;
    if (hi_open ? !(th < hi) : !(th <= hi)) return false;
    return true;
}

std::string ThetaRange::describe() const {
    std::ostringstream os;
    os << (lo_open ? '(' : '[') << lo << ", " << hi << (hi_open ? ')' : ']');
    return os.str();
}

ThetaRange theta_range_for(const std::string& theorem, int N) {
    ThetaRange r;
    r.N = N;
    if (theorem == "8.1") {
        r.lo = 0.0;
        r.hi = 0.5;
    } else if (theorem == "8.2") {
        r.lo = 0.0;
        r.hi = 1.0 / (N + 1.0);
    } else if (theorem == "9.1") {
        r.lo = r.hi = (N - 1.0) / N;
        r.lo_open = r.hi_open = false;
    } else if (theorem == "9.1cor") {
        r.lo = r.hi = 0.5;
        r.lo_open = r.hi_open = false;
    } else if (theorem == "10.1" || theorem == "10.2") {
        r.lo = 0.5;
        r.hi = (N - 1.0) / N;
    } else {
        throw precondition_error("unknown theorem tag: " + theorem);
    }
    return r;
}

ConvexFamily make_thm81(int N, double theta, double C1, double C2, double C3, double C4) {
    if (N < 2) throw precondition_error("family needs N >= 2");
    require_range(theta_range_for("8.1", N), theta, "this family");
    if (!(C1 > 0.0) || !(C2 > 0.0))
        throw precondition_error("quadratic and power coefficients must be positive");
    if (C3 < 0.0 || C4 < 0.0) throw precondition_error("affine coefficients must be nonnegative");
    auto phi = curve_sum({power_curve(C2, 2.0 - 1.0 / theta), poly_curve({C4, C3})});
    return ConvexFamily::warren(N - 1, constant_curve(C1), std::move(phi));
}

ConvexFamily make_thm82(int N, double theta, double C1, double C2, double C3, double C4) {
    if (N < 2) throw precondition_error("family needs N >= 2");
    require_range(theta_range_for("8.2", N), theta, "this family");
    if (!(C1 > 0.0) || !(C2 > 0.0))
        throw precondition_error("quadratic and power coefficients must be positive");
    const int n = N - 1;
    auto phi = curve_sum({power_curve(C2, n + 2.0 - 1.0 / theta), poly_curve({C4, C3})});
    return ConvexFamily::warren(n, power_curve(C1, -1.0), std::move(phi));
}

CurvePtr riccati_phi(int n, double theta, double beta3, double beta4, double beta5,
                     double beta6) {
    if (n < 1 || !(theta > 0.0)) throw precondition_error("profile needs n >= 1 and theta > 0");
    if (!(beta4 > 0.0)) throw precondition_error("leading profile coefficient must be positive");
    if (beta3 == 0.0)
        return curve_sum({power_curve(beta4, n + 2.0), poly_curve({beta6, beta5})});
    if (std::isinf(beta3) && beta3 < 0.0)
        return curve_sum({power_curve(beta4, n + 2.0 - 1.0 / theta), poly_curve({beta6, beta5})});
    if (beta3 < 0.0)
        return std::make_shared<QuadraturePhi>(n, theta, 1.0 / beta3, beta4, beta5, beta6);
    throw precondition_error("branch parameter must be 0, a negative real, or -inf");
}

double thm91_theta(int N) {
    if (N < 2) throw precondition_error("family needs N >= 2");
    return (N - 1.0) / N;
}

ConvexFamily make_thm91(int N, double alpha) {
    if (N < 2) throw precondition_error("family needs N >= 2");
    const double quad = 2.0;
    const double high = (N - 1.0) * (N - 2.0);
    const bool is_quad = std::abs(alpha - quad) <= 1e-12;
    const bool is_high = N >= 3 && std::abs(alpha - high) <= 1e-12;
    if (!is_quad && !is_high)
        throw precondition_error("alpha must be 2, or (N-1)(N-2) when N >= 3");
    return ConvexFamily::exp_power(N - 1, alpha);
}

ConvexFamily make_cor91(int n, Eigen::MatrixXd A, Eigen::VectorXd B, double C) {
    if (n < 2) throw precondition_error("family needs n >= 2");
    return ConvexFamily::half_exp(n, std::move(A), std::move(B), C);
}

double theta_of_alpha(const Eigen::VectorXd& alpha, int N, ProductVariant variant) {
    if ((alpha.array() <= 0.0).any()) throw precondition_error("exponents must be positive");
    const double inv_sum = alpha.cwiseInverse().sum();
    if (variant == ProductVariant::HalfSpace) {
        if (static_cast<int>(alpha.size()) != N - 1)
            throw precondition_error("half-space variant needs N - 1 exponents");
        return (2.0 * inv_sum + N * (N - 1.0)) / (4.0 * inv_sum + N * static_cast<double>(N));
    }
    if (static_cast<int>(alpha.size()) != N)
        throw precondition_error("full variant needs N exponents");
    const double beta = alpha.sum() + 1.0;
    return (2.0 * beta * inv_sum + (N * static_cast<double>(N) - N) * beta - N) /
           (4.0 * beta * inv_sum + N * static_cast<double>(N) * beta -
            N * static_cast<double>(N));
}

std::pair<Eigen::VectorXd, SolveTrace> solve_alpha_halfspace(double theta, int N) {
    if (N < 3) throw precondition_error("product family needs N >= 3");
    require_range(theta_range_for("10.1", N), theta, "the half-space product family");
    const int n = N - 1;
    const double a = (4.0 * theta - 2.0) * n / (N * (N - 1.0 - theta * N));
    Eigen::VectorXd alpha = Eigen::VectorXd::Constant(n, a);
    SolveTrace trace;
    trace.method = "closed-form";
    trace.final_residual = std::abs(theta_of_alpha(alpha, N, ProductVariant::HalfSpace) - theta);
    return {std::move(alpha), std::move(trace)};
}

double symmetric_full_condition(double s, double theta, int N) {
    if (!(s > 0.0)) throw precondition_error("ray parameter must be positive");
    const double beta = N * s + 1.0;
    const double gamma = N / s + 1.0;
    const double F = (4.0 * theta - 2.0) * beta * gamma +
                     (N * static_cast<double>(N) - 4.0) * (theta - (N + 1.0) / (N + 2.0)) * beta;
    return F - N * (N * theta - 1.0);
}

std::pair<Eigen::VectorXd, SolveTrace> solve_alpha_full(double theta, int N) {
    if (N < 3) throw precondition_error("product family needs N >= 3");
    require_range(theta_range_for("10.2", N), theta, "the full product family");

    SolveTrace trace;
    trace.method = "bisection";
    double lo = 1.0, hi = 1.0;
    while (symmetric_full_condition(lo, theta, N) < 0.0) lo *= 0.5;
    while (symmetric_full_condition(hi, theta, N) > 0.0) hi *= 2.0;
    trace.brackets.push_back({lo, hi});
    double mid = 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
        mid = 0.5 * (lo + hi);
        const double g = symmetric_full_condition(mid, theta, N);
        if (g > 0.0)
            lo = mid;
        else
            hi = mid;
        ++trace.iterations;
        trace.brackets.push_back({lo, hi});
        if (hi - lo <= 1e-13) break;
    }
    Eigen::VectorXd alpha = Eigen::VectorXd::Constant(N, mid);
    trace.final_residual = std::abs(symmetric_full_condition(mid, theta, N));
    return {std::move(alpha), std::move(trace)};
}

std::pair<double, double> symmetric_F_min(double theta, int N) {
    if (N < 2) throw precondition_error("needs N >= 2");
    if (!(theta > (N - 1.0) / N))
        throw precondition_error("the minimum formula applies only for theta > (N-1)/N");
    const double excess = theta - (N - 1.0) / N;
    const double s_star = std::sqrt((4.0 * theta - 2.0) / excess) / N;
    const double f_min = 5.0 * N * N * theta - (3.0 * N * static_cast<double>(N) - N) +
                         2.0 * N * N * std::sqrt((4.0 * theta - 2.0) * excess);
    return {s_star, f_min};
}

std::pair<int, int> critical_dimension_bounds(double theta) {
    if (!(theta > 0.0 && theta < 1.0)) throw precondition_error("theta must lie in (0, 1)");
    const int upper = static_cast<int>(std::ceil(1.0 / (1.0 - theta) - 1e-9)) - 1;
    int lower = 1;
    if (theta >= 0.75) lower = 2;
    const double n_exact = (2.0 * theta - 1.0) / (1.0 - theta);
    const double rounded = std::round(n_exact);
    if (rounded >= 1.0 && std::abs(n_exact - rounded) <= 1e-9 * (1.0 + std::abs(n_exact)))
        lower = std::max(lower, static_cast<int>(rounded));
    return {lower, upper};
}

} // namespace malab
