#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "malab/errors.hpp"

namespace malab {

// Truncated multivariate Taylor expansions ("jets") up to total degree 4.
// Coefficients are stored densely over all monomials x^m with |m| <= deg,
// in graded lexicographic order; coefficient c_m equals (d^m u)/m!.
// Degree-4 jets in dimension <= 12 hold at most 1820 coefficients.

constexpr int kMaxJetDim = 12;
constexpr int kMaxJetDeg = 4;

using MultiIndex = std::array<std::uint8_t, kMaxJetDim>; // components beyond dim are zero

class MonomialTable {
public:
    static const MonomialTable& get(int dim, int deg);

    int dim() const { return dim_; }
    int deg() const { return deg_; }
    int size() const { return static_cast<int>(mono_.size()); }

    const MultiIndex& index(int pos) const { return mono_[pos]; }
    int degree(int pos) const { return total_[pos]; }
    double factorial(int pos) const { return fact_[pos]; }
    int position(const MultiIndex& m) const; // -1 when |m| > deg

    // Ordered coefficient pairs (a, b) with index(a) + index(b) == index(r).
    const std::vector<std::pair<int, int>>& splits(int r) const { return splits_[r]; }

private:
    MonomialTable(int dim, int deg);
    int dim_, deg_;
    std::vector<MultiIndex> mono_;
    std::vector<int> total_;
    std::vector<double> fact_;
    std::vector<std::vector<std::pair<int, int>>> splits_;
    std::vector<std::pair<std::uint64_t, std::int32_t>> lookup_; // packed index -> position
};

class Jet {
public:
    Jet() = default;

    static Jet constant(int dim, double v, int deg = kMaxJetDeg);
    // Seed for the i-th coordinate function evaluated at value v.
    static Jet variable(int dim, int i, double v, int deg = kMaxJetDeg);

    int dim() const { return tab_ ? tab_->dim() : 0; }
    int deg() const { return tab_ ? tab_->deg() : 0; }
    int size() const { return static_cast<int>(c_.size()); }

    double value() const { return c_[0]; }
    double coeff(int pos) const { return c_[pos]; }
    double& coeff(int pos) { return c_[pos]; }

    // Partial derivative extraction (multi-index factorial applied).
    double deriv(const MultiIndex& m) const;
    double grad(int i) const;
    double hess(int i, int j) const;
    double third(int i, int j, int k) const;
    double fourth(int i, int j, int k, int l) const;
    Eigen::VectorXd gradient() const;
    Eigen::MatrixXd hessian() const;

    const MonomialTable& table() const { return *tab_; }

    Jet& operator+=(const Jet& o);
    Jet& operator-=(const Jet& o);
    Jet& operator*=(double s);
    Jet& operator+=(double s) { c_[0] += s; return *this; }
    Jet& operator-=(double s) { c_[0] -= s; return *this; }
    Jet operator-() const;

    friend Jet operator+(Jet a, const Jet& b) { a += b; return a; }
    friend Jet operator-(Jet a, const Jet& b) { a -= b; return a; }
    friend Jet operator+(Jet a, double s) { a += s; return a; }
    friend Jet operator+(double s, Jet a) { a += s; return a; }
    friend Jet operator-(Jet a, double s) { a -= s; return a; }
    friend Jet operator-(double s, const Jet& a) { Jet r = -a; r += s; return r; }
    friend Jet operator*(Jet a, double s) { a *= s; return a; }
    friend Jet operator*(double s, Jet a) { a *= s; return a; }
    friend Jet operator*(const Jet& a, const Jet& b);
    friend Jet operator/(const Jet& a, const Jet& b);
    friend Jet operator/(Jet a, double s) { a *= 1.0 / s; return a; }
    friend Jet operator/(double s, const Jet& b);

private:
    Jet(const MonomialTable* t) : tab_(t), c_(t->size(), 0.0) {}
    void check_compatible(const Jet& o) const;
    const MonomialTable* tab_ = nullptr;
    std::vector<double> c_;
    friend Jet compose(const Jet&, const std::array<double, 5>&);
};

// Composition with a univariate function given by value and derivatives
// f(g0), f'(g0), ..., f''''(g0); exact through the truncation order.
Jet compose(const Jet& g, const std::array<double, 5>& derivs);

Jet exp(const Jet& g);
Jet log(const Jet& g);  // requires g.value() > 0
Jet sqrt(const Jet& g); // requires g.value() > 0
Jet recip(const Jet& g);
Jet pow(const Jet& g, double p); // integer p by repeated multiplication, else g.value() > 0

// Worst absolute discrepancy between the jet's derivatives of the given total
// order and central finite differences of f (tensor-product stencils).
double fd_crosscheck(const std::function<double(const Eigen::VectorXd&)>& f,
                     const Jet& jet, const Eigen::VectorXd& x, int order, double h);

} // namespace malab
