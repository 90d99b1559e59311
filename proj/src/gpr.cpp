#include "hsi/gpr.hpp"

#include <array>
#include <limits>

namespace hsi {

namespace {

Eigen::VectorXd broadcast_lengthscales(const Eigen::VectorXd& ls, Eigen::Index d) {
    if (ls.size() == d) return ls;
    if (ls.size() == 1) return Eigen::VectorXd::Constant(d, ls[0]);
    throw std::invalid_argument("gpr: lengthscale dimension mismatch");
}

Eigen::MatrixXd kernel_matrix(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                              const Eigen::VectorXd& ls, double sigma_f2) {
    const Eigen::MatrixXd As = A.array().rowwise() / ls.transpose().array();
    const Eigen::MatrixXd Bs = B.array().rowwise() / ls.transpose().array();
    const Eigen::VectorXd a2 = As.rowwise().squaredNorm();
    const Eigen::VectorXd b2 = Bs.rowwise().squaredNorm();
    Eigen::MatrixXd d2 = -2.0 * As * Bs.transpose();
    d2.colwise() += a2;
    d2.rowwise() += b2.transpose();
    return (sigma_f2 * (-0.5 * d2.array().max(0.0)).exp()).matrix();
}

struct Factorization {
    Eigen::LLT<Eigen::MatrixXd> llt;
    double jitter_used = 0.0;
    bool ok = false;
};

Factorization factorize(const Eigen::MatrixXd& K, double noise_var, double jitter0) {
    Factorization f;
    double jitter = jitter0;
    for (;;) {
        Eigen::MatrixXd A = K;
        A.diagonal().array() += noise_var + jitter;
        f.llt.compute(A);
        if (f.llt.info() == Eigen::Success) {
            f.jitter_used = jitter;
            f.ok = true;
            return f;
        }
        if (jitter >= 1e-4) return f;  // escalation exhausted
        jitter = jitter <= 0.0 ? 1e-12 : jitter * 10.0;
        if (jitter > 1e-4) jitter = 1e-4;
    }
}

double lml_of(const Eigen::LLT<Eigen::MatrixXd>& llt, const Eigen::VectorXd& y,
              const Eigen::VectorXd& alpha) {
    const double n = static_cast<double>(y.size());
    const double logdet_half =
        llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
    return -0.5 * y.dot(alpha) - logdet_half - 0.5 * n * std::log(2.0 * kPi);
}

/// One LML evaluation at the given hyperparameters; -inf when the
/// factorization fails even after jitter escalation.
double evaluate_lml(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, double ell,
                    double sigma_f2, double sigma_n2, double jitter0) {
    const Eigen::VectorXd ls = Eigen::VectorXd::Constant(X.cols(), ell);
    const Eigen::MatrixXd K = kernel_matrix(X, X, ls, sigma_f2);
    const Factorization f = factorize(K, sigma_n2, jitter0);
    if (!f.ok) return -std::numeric_limits<double>::infinity();
    const Eigen::VectorXd alpha = f.llt.solve(y);
    return lml_of(f.llt, y, alpha);
}

KernelConfig select_hyperparameters(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                                    const KernelConfig& base) {
    constexpr std::array<double, 5> kLengthscales{0.1, 0.3, 1.0, 3.0, 10.0};
    constexpr std::array<double, 3> kSignalVars{0.5, 1.0, 2.0};
    constexpr std::array<double, 3> kNoiseVars{1e-4, 1e-2, 1e-1};

    double best_ell = 1.0, best_sf2 = 1.0, best_sn2 = 1e-2;
    double best = -std::numeric_limits<double>::infinity();
    for (double ell : kLengthscales)
        for (double sf2 : kSignalVars)
            for (double sn2 : kNoiseVars) {
                const double lml = evaluate_lml(X, y, ell, sf2, sn2, base.jitter);
                if (lml > best) {
                    best = lml;
                    best_ell = ell;
                    best_sf2 = sf2;
                    best_sn2 = sn2;
                }
            }

    // 20 coordinate-descent steps, cycling (ell, sf2, sn2), multiplicative
    // proposals in both directions.
    constexpr double kStep = 1.3;
    for (int step = 0; step < 20; ++step) {
        double* param = nullptr;
        switch (step % 3) {
            case 0: param = &best_ell; break;
            case 1: param = &best_sf2; break;
            default: param = &best_sn2; break;
        }
        const double current = *param;
        bool improved = false;
        for (double factor : {kStep, 1.0 / kStep}) {
            *param = current * factor;
            const double lml = evaluate_lml(X, y, best_ell, best_sf2, best_sn2, base.jitter);
            if (lml > best) {
                best = lml;
                improved = true;
                break;
            }
        }
        if (!improved) *param = current;
    }

    KernelConfig chosen = base;
    chosen.lengthscales = Eigen::VectorXd::Constant(X.cols(), best_ell);
    chosen.signal_variance = best_sf2;
    chosen.noise_variance = best_sn2;
    chosen.optimize = false;
    return chosen;
}

}  // namespace

GprModel GprModel::fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                       const KernelConfig& cfg) {
    cfg.validate();
    if (X.rows() < 1 || X.cols() < 1) throw std::invalid_argument("gpr_fit: empty inputs");
    if (y.size() != X.rows()) throw std::invalid_argument("gpr_fit: X/y size mismatch");
    if (!X.allFinite() || !y.allFinite())
        throw std::invalid_argument("gpr_fit: non-finite training data");

    KernelConfig used = cfg.optimize ? select_hyperparameters(X, y, cfg) : cfg;
    used.lengthscales = broadcast_lengthscales(used.lengthscales, X.cols());

    GprModel m;
    m.X_ = X;
    m.cfg_ = used;
    const Eigen::MatrixXd K =
        kernel_matrix(X, X, used.lengthscales, used.signal_variance);
    const Factorization f = factorize(K, used.noise_variance, used.jitter);
    if (!f.ok)
        throw std::runtime_error(
            "gpr_fit: kernel matrix not positive definite after jitter escalation");
    m.llt_ = f.llt;
    m.jitter_used_ = f.jitter_used;
    m.alpha_ = m.llt_.solve(y);
    m.lml_ = lml_of(m.llt_, y, m.alpha_);
    return m;
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> GprModel::predict(const Eigen::MatrixXd& Xq) const {
    if (Xq.cols() != X_.cols())
        throw std::invalid_argument("gpr_predict: query dimension mismatch");
    const Eigen::MatrixXd Kq =
        kernel_matrix(X_, Xq, cfg_.lengthscales, cfg_.signal_variance);  // m x q
    Eigen::VectorXd mean = Kq.transpose() * alpha_;
    const Eigen::MatrixXd V = llt_.matrixL().solve(Kq);  // m x q
    Eigen::VectorXd var =
        (cfg_.signal_variance - V.colwise().squaredNorm().transpose().array()).max(0.0).matrix();
    return {std::move(mean), std::move(var)};
}

}  // namespace hsi
