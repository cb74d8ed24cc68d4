#include "malab/normal_image.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>

#include "malab/report.hpp"

namespace malab {

std::size_t PLConvex::node_count() const {
    std::size_t n = 1;
    for (int a = 0; a < dim; ++a) n *= static_cast<std::size_t>(nodes);
    return n;
}

double PLConvex::spacing(int axis) const { return (hi[axis] - lo[axis]) / (nodes - 1); }

Eigen::VectorXd PLConvex::node_point(std::size_t flat) const {
    Eigen::VectorXd x(dim);
    for (int a = dim - 1; a >= 0; --a) {
        x[a] = lo[a] + spacing(a) * static_cast<double>(flat % static_cast<std::size_t>(nodes));
        flat /= static_cast<std::size_t>(nodes);
    }
    return x;
}

PLConvex pl_sample(const std::function<double(const Eigen::VectorXd&)>& f,
                   Eigen::VectorXd lo, Eigen::VectorXd hi, int nodes_per_axis) {
    if (lo.size() != hi.size() || lo.size() < 1)
        throw precondition_error("grid corners mismatch");
    if (((hi - lo).array() <= 0.0).any())
        throw precondition_error("grid needs lo < hi per axis");
    if (nodes_per_axis < 2)
        throw precondition_error("grid needs at least two nodes per axis");
    PLConvex p;
    p.lo = std::move(lo);
    p.hi = std::move(hi);
    p.dim = static_cast<int>(p.lo.size());
    p.nodes = nodes_per_axis;
    if (std::pow(static_cast<double>(nodes_per_axis), p.dim) > 2e7)
        throw precondition_error("nodal grid too large");
    p.values.resize(p.node_count());
    for (std::size_t i = 0; i < p.values.size(); ++i) p.values[i] = f(p.node_point(i));
    return p;
}

PLConvex pl_sample(const ConvexFamily& u, const Domain& box, int nodes_per_axis) {
    if (box.kind() != Domain::Kind::Box && box.kind() != Domain::Kind::OrthantBox)
        throw precondition_error("nodal sampling needs a box grid");
    return pl_sample([&u](const Eigen::VectorXd& x) { return u.value(x); }, box.lo(), box.hi(),
                     nodes_per_axis);
}

namespace {

// odometer over the multi-index grid, row major to match the flat layout
bool advance(std::vector<int>& idx, int K) {
    for (int a = static_cast<int>(idx.size()) - 1; a >= 0; --a) {
        if (++idx[a] < K) return true;
        idx[a] = 0;
    }
    return false;
}

std::vector<std::vector<int>> stencil_directions(int dim) {
    std::vector<std::vector<int>> dirs;
    std::vector<int> v(dim, -1);
    for (;;) {
        int lead = 0;
        for (int a = 0; a < dim; ++a)
            if (v[a] != 0) {
                lead = v[a];
                break;
            }
        if (lead == 1) dirs.push_back(v);
        int a = dim - 1;
        for (; a >= 0; --a) {
            if (++v[a] <= 1) break;
            v[a] = -1;
        }
        if (a < 0) break;
    }
    return dirs;
}

} // namespace

int convexity_violations(const PLConvex& p, double rel_tol) {
    const int K = p.nodes;
    double vmax = 0.0;
    for (double v : p.values) vmax = std::max(vmax, std::abs(v));
    const double tol = rel_tol * (1.0 + vmax);

    std::vector<std::ptrdiff_t> stride(p.dim, 1);
    for (int a = p.dim - 2; a >= 0; --a) stride[a] = stride[a + 1] * K;

    int count = 0;
    for (const auto& d : stencil_directions(p.dim)) {
        std::ptrdiff_t shift = 0;
        for (int a = 0; a < p.dim; ++a) shift += d[a] * stride[a];
        std::vector<int> idx(p.dim, 0);
        std::size_t flat = 0;
        do {
            bool interior = true;
            for (int a = 0; a < p.dim; ++a) {
                const int ia = idx[a] + d[a];
                if (ia < 0 || ia >= K || idx[a] - d[a] < 0 || idx[a] - d[a] >= K) {
                    interior = false;
                    break;
                }
            }
            if (interior) {
                const double second = p.values[flat + shift] + p.values[flat - shift] -
                                      2.0 * p.values[flat];
                if (second < -tol) ++count;
            }
            ++flat;
        } while (advance(idx, K));
    }
    return count;
}

namespace {

std::size_t argmax_node(const PLConvex& p, const std::vector<std::vector<double>>& xs,
                        const double* pv) {
    const int K = p.nodes;
    const double* u = p.values.data();
    double best = -std::numeric_limits<double>::infinity();
    std::size_t bi = 0;
    if (p.dim == 1) {
        for (int i = 0; i < K; ++i) {
            const double s = pv[0] * xs[0][i] - u[i];
            if (s > best) {
                best = s;
                bi = static_cast<std::size_t>(i);
            }
        }
        return bi;
    }
    if (p.dim == 2) {
        for (int i = 0; i < K; ++i) {
            const double a = pv[0] * xs[0][i];
            const double* row = u + static_cast<std::size_t>(i) * K;
            for (int j = 0; j < K; ++j) {
                const double s = a + pv[1] * xs[1][j] - row[j];
                if (s > best) {
                    best = s;
                    bi = static_cast<std::size_t>(i) * K + j;
                }
            }
        }
        return bi;
    }
    for (int i = 0; i < K; ++i) {
        const double a = pv[0] * xs[0][i];
        for (int j = 0; j < K; ++j) {
            const double b = a + pv[1] * xs[1][j];
            const double* row = u + (static_cast<std::size_t>(i) * K + j) * K;
            for (int k = 0; k < K; ++k) {
                const double s = b + pv[2] * xs[2][k] - row[k];
                if (s > best) {
                    best = s;
                    bi = (static_cast<std::size_t>(i) * K + j) * K + k;
                }
            }
        }
    }
    return bi;
}

} // namespace

double normal_image_area(const PLConvex& p, const Domain& omega, int pgrid_nodes, int workers) {
    if (p.dim < 1 || p.dim > 3)
        throw precondition_error("normal image oracle covers dimensions 1 to 3");
    if (omega.dim() != p.dim)
        throw precondition_error("normal image domain dimension mismatch");
    const int viol = convexity_violations(p);
    if (viol > 0)
        throw precondition_error("nodal data breaks convexity at " + std::to_string(viol) +
                                 " stencils");

    const int K = p.nodes;
    const int dim = p.dim;
    std::vector<std::ptrdiff_t> stride(dim, 1);
    for (int a = dim - 2; a >= 0; --a) stride[a] = stride[a + 1] * K;

    // observed forward-difference gradient range per axis, padded 10 percent
    Eigen::VectorXd glo(dim), ghi(dim);
    for (int a = 0; a < dim; ++a) {
        const double h = p.spacing(a);
        double mn = std::numeric_limits<double>::infinity();
        double mx = -mn;
        std::vector<int> idx(dim, 0);
        std::size_t flat = 0;
        do {
            if (idx[a] < K - 1) {
                const double dv = (p.values[flat + stride[a]] - p.values[flat]) / h;
                mn = std::min(mn, dv);
                mx = std::max(mx, dv);
            }
            ++flat;
        } while (advance(idx, K));
        const double w = mx - mn;
        glo[a] = mn - 0.05 * w - 1e-12;
        ghi[a] = mx + 0.05 * w + 1e-12;
    }

    const int P = pgrid_nodes > 0 ? pgrid_nodes : (dim <= 2 ? 129 : 21);
    if (P < 3) throw precondition_error("gradient grid too small");

    std::vector<std::vector<double>> xs(dim, std::vector<double>(K));
    for (int a = 0; a < dim; ++a)
        for (int i = 0; i < K; ++i) xs[a][i] = p.lo[a] + p.spacing(a) * i;

    double margin = 0.0;
    for (int a = 0; a < dim; ++a) margin = std::max(margin, 0.5 * p.spacing(a));

    double cellvol = 1.0;
    Eigen::VectorXd hp(dim);
    for (int a = 0; a < dim; ++a) {
        hp[a] = (ghi[a] - glo[a]) / (P - 1);
        cellvol *= hp[a];
    }

    std::size_t total = 1;
    for (int a = 0; a < dim; ++a) total *= static_cast<std::size_t>(P);
    std::vector<double> cells(total, 0.0);
    parallel_for(total, workers, [&](std::size_t f) {
        double pv[3] = {0.0, 0.0, 0.0};
        std::size_t r = f;
        for (int a = dim - 1; a >= 0; --a) {
            pv[a] = glo[a] + hp[a] * static_cast<double>(r % static_cast<std::size_t>(P));
            r /= static_cast<std::size_t>(P);
        }
        const std::size_t bi = argmax_node(p, xs, pv);
        if (omega.contains(p.node_point(bi), margin)) cells[f] = cellvol;
    });
    return stable_sum(cells);
}

} // namespace malab
