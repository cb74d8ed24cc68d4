#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

#include "malab/measure.hpp"

namespace malab {

Ellipsoid mvee(const std::vector<Eigen::VectorXd>& pts, double eps, int max_iter) {
    const std::size_t P = pts.size();
    if (P < 2) throw precondition_error("mvee needs at least two points");
    const int d = static_cast<int>(pts[0].size());
    const int dl = d + 1;

    Eigen::MatrixXd Q(dl, static_cast<Eigen::Index>(P));
    for (std::size_t i = 0; i < P; ++i) {
        if (pts[i].size() != d) throw precondition_error("mvee points must share a dimension");
        Q.col(static_cast<Eigen::Index>(i)).head(d) = pts[i];
        Q(d, static_cast<Eigen::Index>(i)) = 1.0;
    }

    Eigen::VectorXd wt =
        Eigen::VectorXd::Constant(static_cast<Eigen::Index>(P), 1.0 / static_cast<double>(P));
    Eigen::MatrixXd X = Q * wt.asDiagonal() * Q.transpose();
    for (int it = 0; it < max_iter; ++it) {
        const Eigen::MatrixXd sol = Eigen::LDLT<Eigen::MatrixXd>(X).solve(Q);
        double g = 0.0;
        Eigen::Index jmax = 0;
        for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(P); ++i) {
            const double gi = Q.col(i).dot(sol.col(i));
            if (gi > g) {
                g = gi;
                jmax = i;
            }
        }
        if (g <= (1.0 + eps) * dl) break;
        const double step = (g - dl) / (dl * (g - 1.0));
        wt *= (1.0 - step);
        wt[jmax] += step;
        X = (1.0 - step) * X + step * (Q.col(jmax) * Q.col(jmax).transpose());
    }

    Ellipsoid e;
    e.c = Eigen::VectorXd::Zero(d);
    for (std::size_t i = 0; i < P; ++i) e.c += wt[static_cast<Eigen::Index>(i)] * pts[i];
    Eigen::MatrixXd S2 = Eigen::MatrixXd::Zero(d, d);
    for (std::size_t i = 0; i < P; ++i)
        S2 += wt[static_cast<Eigen::Index>(i)] * pts[i] * pts[i].transpose();
    S2 -= e.c * e.c.transpose();

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S2);
    const Eigen::VectorXd lam = es.eigenvalues();
    if (!lam.allFinite() || lam.minCoeff() <= 1e-13 * std::max(lam.maxCoeff(), 1e-300))
        throw numeric_error("flat point set: enclosing ellipsoid is degenerate");
    e.M = es.eigenvectors() *
          (1.0 / (static_cast<double>(d) * lam.array())).matrix().asDiagonal() *
          es.eigenvectors().transpose();
    return e;
}

JohnNormalization john_normalize(const SubLevelSet& S) {
    const Eigen::Index M = S.directions.rows();
    if (M < 3) throw precondition_error("john normalization needs a sampled boundary");
    std::vector<Eigen::VectorXd> pts(static_cast<std::size_t>(M));
    for (Eigen::Index m = 0; m < M; ++m) pts[static_cast<std::size_t>(m)] = S.vertex(static_cast<int>(m));

    const Ellipsoid e = mvee(pts);
    const int d = static_cast<int>(e.c.size());

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(e.M);
    const Eigen::VectorXd lam = es.eigenvalues();
    if (!(lam.minCoeff() > 0.0)) throw numeric_error("degenerate sub-level set");
    const Eigen::MatrixXd A0 =
        lam.array().sqrt().matrix().asDiagonal() * es.eigenvectors().transpose();
    const double det_root = std::pow(lam.array().sqrt().prod(), 1.0 / d);

    JohnNormalization out;
    out.A = A0 / det_root;
    out.center = e.c;
    double rmin = std::numeric_limits<double>::infinity();
    double rmax = 0.0;
    for (const auto& p : pts) {
        const double r = (out.A * (p - e.c)).norm();
        rmin = std::min(rmin, r);
        rmax = std::max(rmax, r);
    }
    if (!(rmin > 0.0)) throw numeric_error("degenerate sub-level set");
    out.lambda = 1.0 / std::sqrt(rmin * rmax);
    out.rho = std::sqrt(rmax / rmin);
    return out;
}

} // namespace malab
