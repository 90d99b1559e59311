#include "hsi/citests.hpp"

#include "hsi/gpr.hpp"

#include <boost/math/distributions/students_t.hpp>

#include <numeric>

namespace hsi {

namespace {

void check_series(const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                  const Eigen::MatrixXd& Z, const char* what) {
    const Eigen::Index n = x.size();
    if (y.size() != n || (Z.cols() > 0 && Z.rows() != n))
        throw std::invalid_argument(std::string(what) + ": series length mismatch");
    if (n <= Z.cols() + 3)
        throw std::invalid_argument(std::string(what) + ": insufficient samples");
    if (!(sample_variance(x) > 0.0) || !(sample_variance(y) > 0.0))
        throw std::invalid_argument(std::string(what) + ": constant series");
}

/// Double-centered pairwise-distance matrix of a 1-D sample.
Eigen::MatrixXd centered_distance_matrix(const Eigen::VectorXd& a) {
    const Eigen::Index n = a.size();
    Eigen::MatrixXd D =
        (a.replicate(1, n) - a.transpose().replicate(n, 1)).cwiseAbs();
    const Eigen::VectorXd row_mean = D.rowwise().mean();
    const double grand = row_mean.mean();
    D.colwise() -= row_mean;
    D.rowwise() -= row_mean.transpose();
    D.array() += grand;
    return D;
}

double dcor_from_centered(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B, double dvar_x,
                          double dvar_y) {
    if (!(dvar_x > 0.0) || !(dvar_y > 0.0)) return 0.0;
    const double n2 = static_cast<double>(A.rows()) * static_cast<double>(A.rows());
    const double dcov2 = A.cwiseProduct(B).sum() / n2;
    const double r2 = std::max(0.0, dcov2) / std::sqrt(dvar_x * dvar_y);
    return std::min(1.0, std::sqrt(std::max(0.0, r2)));
}

}  // namespace

CITestResult parcorr_test(const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                          const Eigen::MatrixXd& Z) {
    check_series(x, y, Z, "parcorr_test");
    const Eigen::Index n = x.size();

    Eigen::MatrixXd D(n, Z.cols() + 1);
    D.col(0).setOnes();
    if (Z.cols() > 0) D.rightCols(Z.cols()) = Z;
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(D);
    if (qr.rank() < D.cols())
        throw std::invalid_argument(
            "parcorr_test: degenerate regression design (collinear conditions)");
    const Eigen::VectorXd rx = x - D * qr.solve(x);
    const Eigen::VectorXd ry = y - D * qr.solve(y);

    const double sxx = rx.squaredNorm();
    const double syy = ry.squaredNorm();
    if (!(sxx > 0.0) || !(syy > 0.0))
        throw std::invalid_argument("parcorr_test: zero residual variance");
    double r = rx.dot(ry) / std::sqrt(sxx * syy);
    r = std::clamp(r, -1.0, 1.0);

    const int dof = static_cast<int>(n - Z.cols() - 2);
    double p;
    if (std::abs(r) >= 1.0) {
        p = 0.0;
    } else {
        const double t = r * std::sqrt(static_cast<double>(dof) / (1.0 - r * r));
        const boost::math::students_t dist(static_cast<double>(dof));
        p = 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t)));
    }
    return {r, p, static_cast<int>(n)};
}

double distance_correlation(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    const Eigen::Index n = a.size();
    if (b.size() != n) throw std::invalid_argument("distance_correlation: length mismatch");
    if (n < 4) throw std::invalid_argument("distance_correlation: need n >= 4");
    const Eigen::MatrixXd A = centered_distance_matrix(a);
    const Eigen::MatrixXd B = centered_distance_matrix(b);
    const double n2 = static_cast<double>(n) * static_cast<double>(n);
    return dcor_from_centered(A, B, A.squaredNorm() / n2, B.squaredNorm() / n2);
}

CITestResult gpdc_test(const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                       const Eigen::MatrixXd& Z, int permutations, std::uint64_t seed) {
    check_series(x, y, Z, "gpdc_test");
    if (permutations < 1) throw std::invalid_argument("gpdc_test: permutations must be >= 1");
    const Eigen::Index n = x.size();

    Eigen::VectorXd rx, ry;
    if (Z.cols() == 0) {
        rx = x.array() - x.mean();
        ry = y.array() - y.mean();
    } else {
        // Standardized inputs; fixed unit-scale kernel keeps the fit cheap
        // and deterministic (dcor is scale-invariant either way).
        Eigen::MatrixXd Zs(n, Z.cols());
        for (Eigen::Index c = 0; c < Z.cols(); ++c) Zs.col(c) = standardized(Z.col(c));
        KernelConfig cfg;
        cfg.lengthscales = Eigen::VectorXd::Ones(Z.cols());
        cfg.signal_variance = 1.0;
        cfg.noise_variance = 0.1;
        cfg.optimize = false;
        const Eigen::VectorXd xs = standardized(x);
        const Eigen::VectorXd ys = standardized(y);
        rx = xs - gpr_fit(Zs, xs, cfg).predict(Zs).first;
        ry = ys - gpr_fit(Zs, ys, cfg).predict(Zs).first;
    }

    const Eigen::MatrixXd A = centered_distance_matrix(rx);
    const Eigen::MatrixXd B = centered_distance_matrix(ry);
    const double n2 = static_cast<double>(n) * static_cast<double>(n);
    const double dvar_x = A.squaredNorm() / n2;
    const double dvar_y = B.squaredNorm() / n2;
    const double observed = dcor_from_centered(A, B, dvar_x, dvar_y);

    // Permutation null: permuting the sample order of ry permutes the
    // centered matrix symmetrically, so B need not be recentered.
    Rng rng(seed);
    std::vector<Eigen::Index> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    int count_ge = 0;
    for (int k = 0; k < permutations; ++k) {
        for (std::size_t i = perm.size() - 1; i > 0; --i)
            std::swap(perm[i], perm[rng.below(i + 1)]);
        double s = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            const Eigen::Index pi = perm[static_cast<std::size_t>(i)];
            for (Eigen::Index j = 0; j < n; ++j)
                s += A(i, j) * B(pi, perm[static_cast<std::size_t>(j)]);
        }
        const double dcov2 = s / n2;
        double stat = 0.0;
        if (dvar_x > 0.0 && dvar_y > 0.0)
            stat = std::min(1.0, std::sqrt(std::max(0.0, dcov2) / std::sqrt(dvar_x * dvar_y)));
        if (stat >= observed) ++count_ge;
    }
    const double p =
        (1.0 + static_cast<double>(count_ge)) / (static_cast<double>(permutations) + 1.0);
    return {observed, p, static_cast<int>(n)};
}

}  // namespace hsi
