#include "malab/pde.hpp"

#include <cmath>

#include "malab/report.hpp"

namespace malab {

namespace {

MultiIndex unit(int i) {
    MultiIndex m{};
    m[static_cast<std::size_t>(i)] = 1;
    return m;
}

MultiIndex plus(MultiIndex a, const MultiIndex& b) {
    for (std::size_t k = 0; k < a.size(); ++k)
        a[k] = static_cast<std::uint8_t>(a[k] + b[k]);
    return a;
}

// degree-2 jet of the Hessian entry (i,j) of u, extracted from u's 4-jet
Jet hessian_entry_jet(const Jet& u4, int i, int j) {
    const int dim = u4.dim();
    const MultiIndex base = plus(unit(i), unit(j));
    Jet h = Jet::constant(dim, u4.deriv(base), 2);
    const auto& tab = h.table();
    for (int k = 0; k < dim; ++k)
        h.coeff(tab.position(unit(k))) = u4.deriv(plus(base, unit(k)));
    for (int k = 0; k < dim; ++k)
        for (int l = k; l < dim; ++l) {
            const MultiIndex m = plus(unit(k), unit(l));
            const double d = u4.deriv(plus(base, m));
            h.coeff(tab.position(m)) = (k == l) ? 0.5 * d : d;
        }
    return h;
}

// determinant of the Hessian-entry jet matrix by elimination without
// pivoting; valid because the leading values form a positive definite matrix
Jet det_jet(std::vector<Jet>& m, int dim) {
    Jet det = Jet::constant(m[0].dim(), 1.0, 2);
    for (int k = 0; k < dim; ++k) {
        const Jet& piv = m[k * dim + k];
        det = det * piv;
        for (int i = k + 1; i < dim; ++i) {
            const Jet f = m[i * dim + k] / piv;
            for (int j = k + 1; j < dim; ++j) m[i * dim + j] -= f * m[k * dim + j];
        }
    }
    return det;
}

} // namespace

double w_value(const ConvexFamily& u, double theta, const Eigen::VectorXd& x) {
    const Eigen::MatrixXd H = u.eval_jet(x, 2).hessian();
    const double det = H.determinant();
    if (!(det > 0.0)) throw numeric_error("degenerate Hessian: nonpositive determinant");
    return std::pow(det, -theta);
}

ResidualReport residual_from_jet(const Jet& u4, double theta, const Eigen::VectorXd& x) {
    const int dim = u4.dim();
    const Eigen::MatrixXd H = u4.hessian();
    if (classify_hessian(H).kind != Convexity::StrictlyConvex)
        throw numeric_error("Hessian is not strictly positive definite at the sample point");

    std::vector<Jet> hj;
    hj.reserve(static_cast<std::size_t>(dim) * dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) hj.push_back(hessian_entry_jet(u4, i, j));
    const Jet dj = det_jet(hj, dim);
    const double det = dj.value();
    if (!(det > 0.0)) throw numeric_error("degenerate Hessian: nonpositive determinant");

    // D^2 w split through the chain rule on w = det^{-theta}: a rank-one part
    // from the determinant gradient and a part from its Hessian. Keeping the
    // two contributions separate yields a positive scale even on solutions
    // where their sum cancels exactly (w affine), which is what makes the
    // normalized residual meaningful there.
    const Eigen::VectorXd gdet = dj.gradient();
    const Eigen::MatrixXd hdet = dj.hessian();
    const double f1 = -theta * std::pow(det, -theta - 1.0);
    const double f2 = theta * (theta + 1.0) * std::pow(det, -theta - 2.0);
    const Eigen::MatrixXd Hinv = H.ldlt().solve(Eigen::MatrixXd::Identity(dim, dim));

    std::vector<double> terms;
    terms.reserve(2 * static_cast<std::size_t>(dim) * dim);
    double scale = 0.0;
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) {
            const double t1 = Hinv(i, j) * f2 * gdet[i] * gdet[j];
            const double t2 = Hinv(i, j) * f1 * hdet(i, j);
            terms.push_back(t1);
            terms.push_back(t2);
            scale = std::max(scale, std::max(std::abs(t1), std::abs(t2)));
        }

    ResidualReport rep;
    rep.point = x;
    rep.theta = theta;
    rep.det = det;
    rep.w = std::pow(det, -theta);
    rep.raw = stable_sum(terms);
    rep.scale = scale;
    rep.normalized = scale > 0.0 ? rep.raw / scale : 0.0;
    return rep;
}

ResidualReport residual(const ConvexFamily& u, double theta, const Eigen::VectorXd& x) {
    return residual_from_jet(u.eval_jet(x, 4), theta, x);
}

Jet jet_linear_image(const Jet& u_at_image, const Eigen::MatrixXd& A) {
    const int dim = u_at_image.dim();
    if (A.rows() != dim || A.cols() != dim)
        throw precondition_error("linear image needs a square matrix of the jet's dimension");
    const int deg = u_at_image.deg();
    std::vector<Jet> delta;
    delta.reserve(dim);
    for (int a = 0; a < dim; ++a) {
        Jet d = Jet::constant(dim, 0.0, deg);
        for (int i = 0; i < dim; ++i) d.coeff(d.table().position(unit(i))) = A(a, i);
        delta.push_back(std::move(d));
    }
    const auto& tab = u_at_image.table();
    Jet out = Jet::constant(dim, u_at_image.coeff(0), deg);
    for (int p = 1; p < tab.size(); ++p) {
        const double c = u_at_image.coeff(p);
        if (c == 0.0) continue;
        const MultiIndex& m = tab.index(p);
        Jet term = Jet::constant(dim, c, deg);
        for (int a = 0; a < dim; ++a)
            for (int k = 0; k < m[static_cast<std::size_t>(a)]; ++k) term = term * delta[a];
        out += term;
    }
    return out;
}

std::vector<ResidualReport> residual_scan(const ConvexFamily& u, double theta, int npts,
                                          std::uint64_t seed, int workers) {
    if (npts < 1) throw precondition_error("residual scan needs at least one point");
    Eigen::VectorXd lo, hi;
    u.sample_box(lo, hi);
    std::vector<ResidualReport> rows(static_cast<std::size_t>(npts));
    parallel_for(static_cast<std::size_t>(npts), workers, [&](std::size_t idx) {
        Rng rng = Rng::for_index(seed, idx);
        Eigen::VectorXd x(u.dim());
        for (int tries = 0;; ++tries) {
            if (tries >= 500) throw numeric_error("could not sample an admissible point");
            for (int i = 0; i < u.dim(); ++i) x[i] = rng.uniform(lo[i], hi[i]);
            if (u.in_domain(x)) break;
        }
        rows[idx] = residual(u, theta, x);
    });
    return rows;
}

ScanSummary summarize_scan(const std::vector<ResidualReport>& rows) {
    ScanSummary s;
    s.points = static_cast<int>(rows.size());
    bool first = true;
    for (const auto& r : rows) {
        s.max_normalized = std::max(s.max_normalized, std::abs(r.normalized));
        s.max_raw = std::max(s.max_raw, std::abs(r.raw));
        s.min_det = first ? r.det : std::min(s.min_det, r.det);
        first = false;
    }
    return s;
}

std::string residual_csv(const std::vector<ResidualReport>& rows) {
    std::string out;
    if (rows.empty()) return out;
    const int dim = static_cast<int>(rows.front().point.size());
    std::vector<std::string> head;
    for (int i = 0; i < dim; ++i) head.push_back("x" + std::to_string(i));
    for (const char* c : {"theta", "det", "w", "raw", "scale", "normalized"}) head.push_back(c);
    out += csv_join(head) + "\n";
    for (const auto& r : rows) {
        std::vector<std::string> cells;
        for (int i = 0; i < dim; ++i) cells.push_back(format_double(r.point[i]));
        cells.push_back(format_double(r.theta));
        cells.push_back(format_double(r.det));
        cells.push_back(format_double(r.w));
        cells.push_back(format_double(r.raw));
        cells.push_back(format_double(r.scale));
        cells.push_back(format_double(r.normalized));
        out += csv_join(cells) + "\n";
    }
    return out;
}

WarrenReduction warren_reduction(const CurvePtr& eta, const CurvePtr& phi, double theta, int n,
                                 double t) {
    if (!eta || !phi) throw precondition_error("reduction needs both curves");
    const auto e = eta->derivs(t);
    const auto f = phi->derivs(t);
    const double h = e[0];
    if (!(h > 0.0)) throw precondition_error("reduction needs a positive radial profile");
    const double h1 = e[1], h2 = e[2], h3 = e[3], h4 = e[4];
    const double q = h1 * h1 / h; // eta'^2 / eta
    const double P = h2 - 2.0 * q;
    const double P1 = h3 - 4.0 * h1 * h2 / h + 2.0 * h1 * q / h;
    const double P2 = h4 - 4.0 * (h2 * h2 + h1 * h3) / h + 10.0 * h2 * q / h - 4.0 * q * q / h;
    const double th = theta;
    const double nn = static_cast<double>(n);

    WarrenReduction r;
    r.A = P * P * (4.0 * (th - nn + 1.0) * h2 +
                   ((2.0 * nn * nn - 8.0 * nn) * th + 6.0 * nn - 4.0) * q) +
          (4.0 * nn * th - 8.0 * th) * h1 * P * P1 + 2.0 * (th + 1.0) * h * P1 * P1 -
          2.0 * h * P * P2;
    r.B = f[2] * (4.0 * ((th - 2.0 * nn + 1.0) * h2 +
                         (nn * nn * th - 2.0 * nn * th - 2.0 * th + 3.0 * nn - 3.0) * q) *
                      P +
                  4.0 * (nn * th + 2.0) * h1 * P1 - 2.0 * h * P2) +
          f[3] * (4.0 * (nn * th - 2.0 * th - 2.0) * h1 * P + 4.0 * (th + 1.0) * h * P1) -
          2.0 * h * P * f[4];
    r.C = f[2] * f[2] * (-4.0 * nn * h2 + 2.0 * nn * (nn * th + 3.0) * q) +
          4.0 * nn * th * h1 * f[2] * f[3] + 2.0 * (th + 1.0) * h * f[3] * f[3] -
          2.0 * h * f[2] * f[4];
    return r;
}

double warren_predicted_raw(const ConvexFamily& u, double theta, const Eigen::VectorXd& x) {
    if (u.tag() != ConvexFamily::Tag::WarrenSeparable)
        throw precondition_error("predicted raw needs the matching separable family");
    const int n = u.n();
    const double t = x[n];
    const double r2 = x.head(n).squaredNorm();
    const auto e = u.eta()->derivs(t);
    const auto f = u.phi()->derivs(t);
    const double P = e[2] - 2.0 * e[1] * e[1] / e[0];
    const double psi = r2 * P + f[2];
    const auto red = warren_reduction(u.eta(), u.phi(), theta, n, t);
    return theta * std::pow(2.0 * e[0], -n * theta - 1.0) * std::pow(psi, -theta - 3.0) *
           (red.A * r2 * r2 + red.B * r2 + red.C);
}

TWCondition tw_exponential_condition(double alpha, double theta, int n) {
    if (!(alpha > 1.0)) throw precondition_error("exponential profile needs alpha > 1");
    const double beta = -n * theta * (alpha - 2.0);
    TWCondition c;
    c.B1 = beta * (beta - 1.0) + (n - 1.0) * (alpha - 1.0) * beta;
    c.B2 = -(n + 1.0) * theta * alpha * (alpha + 2.0 * beta - 1.0) +
           2.0 * (n + 1.0) * theta * alpha * beta +
           alpha * (alpha - 1.0) * (n + 1.0) * (n + 1.0) * theta * theta -
           (n - 1.0) * (n + 1.0) * alpha * (alpha - 1.0) * theta;
    return c;
}

double exp_power_predicted_raw(int n, double alpha, double theta, const Eigen::VectorXd& x) {
    const double r = x.head(n).norm();
    const double t = x[n];
    if (!(r > 0.0)) throw precondition_error("predicted raw needs |y| > 0");
    const double beta = -n * theta * (alpha - 2.0);
    const auto c = tw_exponential_condition(alpha, theta, n);
    const double poly = c.B1 * std::pow(r, beta - 2.0) + c.B2 * std::pow(r, alpha + beta - 2.0);
    return poly * std::pow(alpha, -n * theta - 1.0) * std::pow(alpha - 1.0, -theta - 1.0) *
           std::pow(r, 2.0 - alpha) *
           std::exp(-((n + 1.0) * theta + 1.0) * (std::pow(r, alpha) + t));
}

double product_halfspace_residual(const Eigen::VectorXd& alpha, double theta, int N) {
    const int n = static_cast<int>(alpha.size());
    if (N != n + 1) throw precondition_error("half-space product needs N = n + 1");
    if ((alpha.array() <= 0.0).any()) throw precondition_error("exponents must be positive");
    double s = 0.0, lin = 0.0;
    for (int j = 0; j < n; ++j) {
        const double m = (N * alpha[j] + 2.0) * theta;
        s += (m * (m - 1.0)) / alpha[j];
        lin += N * alpha[j] + 2.0;
    }
    return s - 2.0 * N * theta * theta * lin + N * N * theta * theta * (alpha.sum() + 1.0);
}

double product_full_residual(const Eigen::VectorXd& alpha, double theta, int N) {
    if (N != static_cast<int>(alpha.size()))
        throw precondition_error("full product needs an exponent per coordinate");
    if ((alpha.array() <= 0.0).any()) throw precondition_error("exponents must be positive");
    const double beta = alpha.sum() + 1.0;
    double s = 0.0;
    for (int j = 0; j < N; ++j) {
        const double m = (N * alpha[j] + 2.0) * theta;
        s += (beta - alpha[j]) * m * (m - 1.0) / alpha[j];
    }
    double cross = 0.0;
    for (int j = 0; j < N; ++j)
        for (int k = j + 1; k < N; ++k)
            cross += (N * alpha[j] + 2.0) * theta * (N * alpha[k] + 2.0) * theta;
    return s - 2.0 * cross;
}

double product_halfspace_predicted_raw(const Eigen::VectorXd& alpha, double theta,
                                       const Eigen::VectorXd& x) {
    const int n = static_cast<int>(alpha.size());
    const int N = n + 1;
    if (x.size() != N) throw precondition_error("point dimension mismatch");
    const double L = product_halfspace_residual(alpha, theta, N);
    double fac = std::exp(-(N * theta + 1.0) * x[n]);
    for (int i = 0; i < n; ++i)
        fac *= std::pow(alpha[i], -theta) * std::pow(x[i], (N * alpha[i] + 2.0) * theta + alpha[i]);
    return L * fac;
}

double product_full_predicted_raw(const Eigen::VectorXd& alpha, double theta,
                                  const Eigen::VectorXd& x) {
    const int N = static_cast<int>(alpha.size());
    if (x.size() != N) throw precondition_error("point dimension mismatch");
    const double L = product_full_residual(alpha, theta, N);
    const double beta = alpha.sum() + 1.0;
    double fac = std::pow(beta, -theta - 1.0);
    for (int i = 0; i < N; ++i)
        fac *= std::pow(alpha[i], -theta) * std::pow(x[i], (N * alpha[i] + 2.0) * theta + alpha[i]);
    return L * fac;
}

} // namespace malab
