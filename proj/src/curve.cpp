#include "malab/curve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

namespace malab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool is_nonneg_integer(double p) {
    return p >= 0.0 && p == std::floor(p) && p <= 64.0;
}

class ConstantCurve final : public ScalarCurve {
public:
    explicit ConstantCurve(double c) : c_(c) {}
    std::array<double, 5> derivs(double) const override { return {c_, 0.0, 0.0, 0.0, 0.0}; }
    double lo() const override { return -kInf; }
    double hi() const override { return kInf; }

private:
    double c_;
};

class PowerCurve final : public ScalarCurve {
public:
    PowerCurve(double c, double p) : c_(c), p_(p), whole_line_(is_nonneg_integer(p)) {}

    std::array<double, 5> derivs(double t) const override {
        if (!whole_line_ && t <= 0.0)
            throw domain_error("power curve with fractional or negative exponent needs t > 0");
        std::array<double, 5> out{};
        double fall = c_;
        for (int k = 0; k <= 4; ++k) {
            if (fall == 0.0) break; // integer exponent exhausted
            out[k] = fall * std::pow(t, p_ - k);
            fall *= p_ - k;
        }
        return out;
    }
    double lo() const override { return whole_line_ ? -kInf : 0.0; }
    double hi() const override { return kInf; }

private:
    double c_, p_;
    bool whole_line_;
};

class PolyCurve final : public ScalarCurve {
public:
    explicit PolyCurve(std::vector<double> coeffs) {
        d_[0] = std::move(coeffs);
        for (int k = 1; k <= 4; ++k) {
            const auto& prev = d_[k - 1];
            if (prev.size() > 1) {
                d_[k].resize(prev.size() - 1);
                for (std::size_t j = 1; j < prev.size(); ++j)
                    d_[k][j - 1] = prev[j] * static_cast<double>(j);
            }
        }
    }

    std::array<double, 5> derivs(double t) const override {
        std::array<double, 5> out{};
        for (int k = 0; k <= 4; ++k) {
            double acc = 0.0;
            for (std::size_t j = d_[k].size(); j-- > 0;) acc = acc * t + d_[k][j];
            out[k] = acc;
        }
        return out;
    }
    double lo() const override { return -kInf; }
    double hi() const override { return kInf; }

private:
    std::array<std::vector<double>, 5> d_;
};

class SumCurve final : public ScalarCurve {
public:
    explicit SumCurve(std::vector<CurvePtr> terms) : terms_(std::move(terms)) {
        if (terms_.empty()) throw precondition_error("curve_sum needs at least one term");
        lo_ = -kInf;
        hi_ = kInf;
        for (const auto& c : terms_) {
            lo_ = std::max(lo_, c->lo());
            hi_ = std::min(hi_, c->hi());
        }
        if (!(lo_ < hi_)) throw precondition_error("curve_sum terms have disjoint intervals");
    }

    std::array<double, 5> derivs(double t) const override {
        std::array<double, 5> out{};
        for (const auto& c : terms_) {
            const auto d = c->derivs(t);
            for (int k = 0; k <= 4; ++k) out[k] += d[k];
        }
        return out;
    }
    double lo() const override { return lo_; }
    double hi() const override { return hi_; }

private:
    std::vector<CurvePtr> terms_;
    double lo_, hi_;
};

class ScaleCurve final : public ScalarCurve {
public:
    ScaleCurve(double s, CurvePtr base) : s_(s), base_(std::move(base)) {}
    std::array<double, 5> derivs(double t) const override {
        auto d = base_->derivs(t);
        for (double& x : d) x *= s_;
        return d;
    }
    double lo() const override { return base_->lo(); }
    double hi() const override { return base_->hi(); }

private:
    double s_;
    CurvePtr base_;
};

class ExpCurve final : public ScalarCurve {
public:
    explicit ExpCurve(CurvePtr base) : base_(std::move(base)) {}

    std::array<double, 5> derivs(double t) const override {
        const auto v = base_->derivs(t);
        const double g = std::exp(v[0]);
        const double v1 = v[1], v2 = v[2], v3 = v[3], v4 = v[4];
        return {g,
                g * v1,
                g * (v2 + v1 * v1),
                g * (v3 + 3.0 * v1 * v2 + v1 * v1 * v1),
                g * (v4 + 4.0 * v1 * v3 + 3.0 * v2 * v2 + 6.0 * v1 * v1 * v2 + v1 * v1 * v1 * v1)};
    }
    double lo() const override { return base_->lo(); }
    double hi() const override { return base_->hi(); }

private:
    CurvePtr base_;
};

class PiecewiseCurve final : public ScalarCurve {
public:
    PiecewiseCurve(double cut, CurvePtr left, CurvePtr right)
        : cut_(cut), left_(std::move(left)), right_(std::move(right)) {
        if (!(left_->lo() < cut_) || !(right_->hi() > cut_))
            throw precondition_error("piecewise cut outside the pieces' intervals");
    }

    std::array<double, 5> derivs(double t) const override {
        return t <= cut_ ? left_->derivs(t) : right_->derivs(t);
    }
    double lo() const override { return left_->lo(); }
    double hi() const override { return right_->hi(); }

private:
    double cut_;
    CurvePtr left_, right_;
};

// C2 quintic Hermite basis on [0,1]; end data (value, slope, curvature)
struct Quintic {
    double a0, a1, a2, b0, b1, b2;
    explicit Quintic(double s) {
        const double s2 = s * s, s3 = s2 * s, s4 = s3 * s, s5 = s4 * s;
        a0 = 1.0 - 10.0 * s3 + 15.0 * s4 - 6.0 * s5;
        a1 = s - 6.0 * s3 + 8.0 * s4 - 3.0 * s5;
        a2 = 0.5 * (s2 - 3.0 * s3 + 3.0 * s4 - s5);
        b0 = 10.0 * s3 - 15.0 * s4 + 6.0 * s5;
        b1 = -4.0 * s3 + 7.0 * s4 - 3.0 * s5;
        b2 = 0.5 * (s3 - 2.0 * s4 + s5);
    }
};

class OdeCurve final : public ScalarCurve {
public:
    OdeCurve(double t0, double step, std::vector<double> v, std::vector<double> dv,
             OdeClosure closure)
        : t0_(t0), h_(step), v_(std::move(v)), dv_(std::move(dv)), closure_(std::move(closure)) {
        if (v_.size() < 2 || v_.size() != dv_.size())
            throw precondition_error("ode curve needs matching nodal arrays with >= 2 nodes");
        if (!(h_ > 0.0)) throw precondition_error("ode curve needs a positive step");
        a_.resize(v_.size());
        j_.resize(v_.size());
        for (std::size_t k = 0; k < v_.size(); ++k) {
            const auto high = closure_(t0_ + h_ * static_cast<double>(k), v_[k], dv_[k]);
            a_[k] = high[0];
            j_[k] = high[1];
        }
    }

    std::array<double, 5> derivs(double t) const override {
        const double tend = t0_ + h_ * static_cast<double>(v_.size() - 1);
        if (t < t0_ - 1e-12 * (1.0 + std::abs(t0_)) || t > tend + 1e-12 * (1.0 + std::abs(tend)))
            throw domain_error("ode curve evaluated outside its grid");
        const auto k = static_cast<std::size_t>(std::clamp(
            static_cast<long>(std::floor((t - t0_) / h_)), 0L, static_cast<long>(v_.size()) - 2L));
        const double s = (t - (t0_ + h_ * static_cast<double>(k))) / h_;
        const Quintic q(s);
        const double h2 = h_ * h_;
        const double val = v_[k] * q.a0 + h_ * dv_[k] * q.a1 + h2 * a_[k] * q.a2 +
                           v_[k + 1] * q.b0 + h_ * dv_[k + 1] * q.b1 + h2 * a_[k + 1] * q.b2;
        const double slope = dv_[k] * q.a0 + h_ * a_[k] * q.a1 + h2 * j_[k] * q.a2 +
                             dv_[k + 1] * q.b0 + h_ * a_[k + 1] * q.b1 + h2 * j_[k + 1] * q.b2;
        const auto high = closure_(t, val, slope);
        return {val, slope, high[0], high[1], high[2]};
    }
    double lo() const override { return t0_; }
    double hi() const override { return t0_ + h_ * static_cast<double>(v_.size() - 1); }

private:
    double t0_, h_;
    std::vector<double> v_, dv_, a_, j_;
    OdeClosure closure_;
};

} // namespace

CurvePtr constant_curve(double c) { return std::make_shared<ConstantCurve>(c); }
CurvePtr power_curve(double c, double p) { return std::make_shared<PowerCurve>(c, p); }
CurvePtr poly_curve(std::vector<double> coeffs) {
    return std::make_shared<PolyCurve>(std::move(coeffs));
}
CurvePtr curve_sum(std::vector<CurvePtr> terms) {
    return std::make_shared<SumCurve>(std::move(terms));
}
CurvePtr curve_scale(double s, CurvePtr base) {
    return std::make_shared<ScaleCurve>(s, std::move(base));
}
CurvePtr curve_exp(CurvePtr base) { return std::make_shared<ExpCurve>(std::move(base)); }
CurvePtr curve_piecewise(double cut, CurvePtr left, CurvePtr right) {
    return std::make_shared<PiecewiseCurve>(cut, std::move(left), std::move(right));
}
CurvePtr ode_curve(double t0, double step, std::vector<double> v, std::vector<double> dv,
                   OdeClosure closure) {
    return std::make_shared<OdeCurve>(t0, step, std::move(v), std::move(dv), std::move(closure));
}

} // namespace malab
