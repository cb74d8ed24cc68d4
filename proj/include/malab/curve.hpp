#pragma once

#include <array>
#include <functional>
#include <memory>
#include <vector>

#include "malab/errors.hpp"

namespace malab {

// One-variable function carrying derivatives through order 4 on an open
// interval. Backing representations are closed-form expression nodes or dense
// output of an ODE integration.
class ScalarCurve {
public:
    virtual ~ScalarCurve() = default;

    // value, first, ..., fourth derivative at t
    virtual std::array<double, 5> derivs(double t) const = 0;
    virtual double lo() const = 0;
    virtual double hi() const = 0;

    double value(double t) const { return derivs(t)[0]; }
    bool contains(double t) const { return t > lo() && t < hi(); }
};

using CurvePtr = std::shared_ptr<const ScalarCurve>;

CurvePtr constant_curve(double c);

// c * t^p; whole line when p is a nonnegative integer, otherwise t > 0
CurvePtr power_curve(double c, double p);

// coeffs[k] * t^k
CurvePtr poly_curve(std::vector<double> coeffs);

CurvePtr curve_sum(std::vector<CurvePtr> terms);
CurvePtr curve_scale(double s, CurvePtr base);
CurvePtr curve_exp(CurvePtr base);

// left on (-inf, cut], right on (cut, +inf), clipped to the pieces' intervals
CurvePtr curve_piecewise(double cut, CurvePtr left, CurvePtr right);

// Derivatives of orders 2..4 recovered from the governing equation as a
// function of (t, v, v').
using OdeClosure = std::function<std::array<double, 3>(double, double, double)>;

// Dense ODE output: nodal (v, v') on the uniform grid t0 + k*step. In-cell
// values use quintic Hermite pieces whose end accelerations/jerks come from
// the closure, and orders >= 2 are evaluated through the closure directly, so
// the curve satisfies its equation to interpolation accuracy.
CurvePtr ode_curve(double t0, double step, std::vector<double> v, std::vector<double> dv,
                   OdeClosure closure);

} // namespace malab
