#include "malab/jet.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>

namespace malab {

namespace {

std::uint64_t pack(const MultiIndex& m, int dim) {
    std::uint64_t k = 0;
    for (int i = 0; i < dim; ++i) k |= static_cast<std::uint64_t>(m[i]) << (3 * i);
    return k;
}

void enumerate(int dim, int deg, int i, int left, MultiIndex& cur,
               std::vector<MultiIndex>& out) {
    if (i == dim) {
        out.push_back(cur);
        return;
    }
    for (int k = 0; k <= left; ++k) {
        cur[i] = static_cast<std::uint8_t>(k);
        enumerate(dim, deg, i + 1, left - k, cur, out);
    }
    cur[i] = 0;
}

} // namespace

MonomialTable::MonomialTable(int dim, int deg) : dim_(dim), deg_(deg) {
    if (dim < 1 || dim > kMaxJetDim) throw precondition_error("jet dimension must be in [1,12]");
    if (deg < 1 || deg > kMaxJetDeg) throw precondition_error("jet degree must be in [1,4]");

    std::vector<MultiIndex> all;
    MultiIndex cur{};
    enumerate(dim, deg, 0, deg, cur, all);
    // graded order: sort by total degree, then lexicographic
    std::stable_sort(all.begin(), all.end(), [&](const MultiIndex& a, const MultiIndex& b) {
        int da = 0, db = 0;
        for (int i = 0; i < dim; ++i) { da += a[i]; db += b[i]; }
        if (da != db) return da < db;
        return a < b;
    });
    mono_ = std::move(all);

    for (int p = 0; p < size(); ++p) {
        int d = 0;
        double f = 1.0;
        for (int i = 0; i < dim; ++i) {
            d += mono_[p][i];
            for (int k = 2; k <= mono_[p][i]; ++k) f *= k;
        }
        total_.push_back(d);
        fact_.push_back(f);
        lookup_.emplace_back(pack(mono_[p], dim), p);
    }
    std::sort(lookup_.begin(), lookup_.end());

    splits_.resize(size());
    for (int r = 0; r < size(); ++r) {
        const MultiIndex& m = mono_[r];
        std::vector<MultiIndex> subs;
        MultiIndex c{};
        // enumerate a <= m componentwise
        std::function<void(int)> rec = [&](int i) {
            if (i == dim) { subs.push_back(c); return; }
            for (int k = 0; k <= m[i]; ++k) {
                c[i] = static_cast<std::uint8_t>(k);
                rec(i + 1);
            }
            c[i] = 0;
        };
        rec(0);
        for (const MultiIndex& a : subs) {
            MultiIndex b{};
            for (int i = 0; i < dim; ++i) b[i] = static_cast<std::uint8_t>(m[i] - a[i]);
            splits_[r].emplace_back(position(a), position(b));
        }
    }
}

int MonomialTable::position(const MultiIndex& m) const {
    int d = 0;
    for (int i = 0; i < dim_; ++i) d += m[i];
    if (d > deg_) return -1;
    const std::uint64_t k = pack(m, dim_);
    auto it = std::lower_bound(lookup_.begin(), lookup_.end(),
                               std::make_pair(k, std::int32_t(-1)));
    return (it != lookup_.end() && it->first == k) ? it->second : -1;
}

const MonomialTable& MonomialTable::get(int dim, int deg) {
    static std::mutex mu;
    static std::map<std::pair<int, int>, std::unique_ptr<MonomialTable>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto& slot = cache[{dim, deg}];
    if (!slot) slot.reset(new MonomialTable(dim, deg));
    return *slot;
}

Jet Jet::constant(int dim, double v, int deg) {
    Jet j(&MonomialTable::get(dim, deg));
    j.c_[0] = v;
    return j;
}

Jet Jet::variable(int dim, int i, double v, int deg) {
    if (i < 0 || i >= dim) throw precondition_error("variable index out of range");
    Jet j(&MonomialTable::get(dim, deg));
    j.c_[0] = v;
    MultiIndex m{};
    m[i] = 1;
    j.c_[j.tab_->position(m)] = 1.0;
    return j;
}

void Jet::check_compatible(const Jet& o) const {
    if (tab_ != o.tab_) throw domain_error("jet operands have mismatched dimension or degree");
}

double Jet::deriv(const MultiIndex& m) const {
    const int p = tab_->position(m);
    if (p < 0) throw domain_error("derivative order exceeds jet degree");
    return c_[p] * tab_->factorial(p);
}

double Jet::grad(int i) const {
    MultiIndex m{};
    m[i] = 1;
    return deriv(m);
}

double Jet::hess(int i, int j) const {
    MultiIndex m{};
    ++m[i]; ++m[j];
    return deriv(m);
}

double Jet::third(int i, int j, int k) const {
    MultiIndex m{};
    ++m[i]; ++m[j]; ++m[k];
    return deriv(m);
}

double Jet::fourth(int i, int j, int k, int l) const {
    MultiIndex m{};
    ++m[i]; ++m[j]; ++m[k]; ++m[l];
    return deriv(m);
}

Eigen::VectorXd Jet::gradient() const {
    Eigen::VectorXd g(dim());
    for (int i = 0; i < dim(); ++i) g[i] = grad(i);
    return g;
}

Eigen::MatrixXd Jet::hessian() const {
    Eigen::MatrixXd h(dim(), dim());
    for (int i = 0; i < dim(); ++i)
        for (int j = 0; j <= i; ++j) h(i, j) = h(j, i) = hess(i, j);
    return h;
}

Jet& Jet::operator+=(const Jet& o) {
    check_compatible(o);
    for (int i = 0; i < size(); ++i) c_[i] += o.c_[i];
    return *this;
}

Jet& Jet::operator-=(const Jet& o) {
    check_compatible(o);
    for (int i = 0; i < size(); ++i) c_[i] -= o.c_[i];
    return *this;
}

Jet& Jet::operator*=(double s) {
    for (double& v : c_) v *= s;
    return *this;
}

Jet Jet::operator-() const {
    Jet r = *this;
    for (double& v : r.c_) v = -v;
    return r;
}

Jet operator*(const Jet& a, const Jet& b) {
    a.check_compatible(b);
    Jet r(a.tab_);
    const MonomialTable& t = *a.tab_;
    for (int p = 0; p < r.size(); ++p) {
        double acc = 0.0;
        for (const auto& [s, q] : t.splits(p)) acc += a.c_[s] * b.c_[q];
        r.c_[p] = acc;
    }
    return r;
}

Jet operator/(const Jet& a, const Jet& b) {
    a.check_compatible(b);
    if (b.value() == 0.0) throw domain_error("division by a jet with zero value");
    Jet h(a.tab_);
    const MonomialTable& t = *a.tab_;
    const double inv = 1.0 / b.c_[0];
    for (int p = 0; p < h.size(); ++p) {
        double acc = a.c_[p];
        for (const auto& [s, q] : t.splits(p))
            if (s != 0) acc -= b.c_[s] * h.c_[q];
        h.c_[p] = acc * inv;
    }
    return h;
}

Jet operator/(double s, const Jet& b) {
    return Jet::constant(b.dim(), s, b.deg()) / b;
}

Jet compose(const Jet& g, const std::array<double, 5>& derivs) {
    // Horner evaluation in powers of (g - g0); exact at truncation order 4.
    Jet gh = g;
    gh.coeff(0) = 0.0;
    const int d = g.deg();
    std::array<double, 5> c{};
    double kf = 1.0;
    for (int k = 0; k <= 4; ++k) {
        if (k > 0) kf *= k;
        c[k] = derivs[k] / kf;
    }
    Jet acc = Jet::constant(g.dim(), c[d], d);
    for (int k = d - 1; k >= 0; --k) {
        acc = acc * gh;
        acc += c[k];
    }
    return acc;
}

Jet exp(const Jet& g) {
    const double e = std::exp(g.value());
    return compose(g, {e, e, e, e, e});
}

Jet log(const Jet& g) {
    const double v = g.value();
    if (!(v > 0.0)) throw domain_error("log of a jet with nonpositive value");
    const double i = 1.0 / v;
    return compose(g, {std::log(v), i, -i * i, 2.0 * i * i * i, -6.0 * i * i * i * i});
}

Jet sqrt(const Jet& g) {
    const double v = g.value();
    if (!(v > 0.0)) throw domain_error("sqrt of a jet with nonpositive value");
    return pow(g, 0.5);
}

Jet recip(const Jet& g) {
    return Jet::constant(g.dim(), 1.0, g.deg()) / g;
}

Jet pow(const Jet& g, double p) {
    const double ip = std::nearbyint(p);
    if (ip == p && std::abs(ip) <= 64.0) {
        long n = static_cast<long>(ip);
        if (n == 0) return Jet::constant(g.dim(), 1.0, g.deg());
        Jet base = n > 0 ? g : recip(g);
        Jet acc = base;
        for (long e = std::labs(n) - 1; e > 0; --e) acc = acc * base;
        return acc;
    }
    const double v = g.value();
    if (!(v > 0.0)) throw domain_error("pow of a jet with nonpositive value and non-integer exponent");
    std::array<double, 5> d;
    d[0] = std::pow(v, p);
    double f = 1.0;
    for (int k = 1; k <= 4; ++k) {
        f *= (p - (k - 1));
        d[k] = f * std::pow(v, p - k);
    }
    return compose(g, d);
}

double fd_crosscheck(const std::function<double(const Eigen::VectorXd&)>& f,
                     const Jet& jet, const Eigen::VectorXd& x, int order, double h) {
    // tensor products of central 1-d stencils per derivative order
    static const std::vector<std::vector<std::pair<int, double>>> stencil = {
        {},
        {{-1, -0.5}, {1, 0.5}},
        {{-1, 1.0}, {0, -2.0}, {1, 1.0}},
        {{-2, -0.5}, {-1, 1.0}, {1, -1.0}, {2, 0.5}},
        {{-2, 1.0}, {-1, -4.0}, {0, 6.0}, {1, -4.0}, {2, 1.0}},
    };
    if (order < 1 || order > jet.deg()) throw precondition_error("fd_crosscheck order out of range");
    double worst = 0.0;
    const MonomialTable& t = jet.table();
    const int dim = jet.dim();
    for (int p = 1; p < t.size(); ++p) {
        if (t.degree(p) != order) continue;
        const MultiIndex& m = t.index(p);
        std::vector<std::pair<Eigen::VectorXd, double>> terms = {{x, 1.0}};
        double scale = 1.0;
        for (int i = 0; i < dim; ++i) {
            const int o = m[i];
            if (o == 0) continue;
            scale /= std::pow(h, o);
            std::vector<std::pair<Eigen::VectorXd, double>> next;
            for (const auto& [pt, wt] : terms)
                for (const auto& [off, sw] : stencil[o]) {
                    Eigen::VectorXd q = pt;
                    q[i] += off * h;
                    next.emplace_back(q, wt * sw);
                }
            terms = std::move(next);
        }
        double fd = 0.0;
        for (const auto& [pt, wt] : terms) fd += wt * f(pt);
        fd *= scale;
        worst = std::max(worst, std::abs(fd - jet.coeff(p) * t.factorial(p)));
    }
    return worst;
}

} // namespace malab
