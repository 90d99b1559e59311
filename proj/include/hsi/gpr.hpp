#pragma once

#include "hsi/common.hpp"

#include <utility>

namespace hsi {

/// Squared-exponential kernel settings. With optimize set, fitting selects
/// (shared lengthscale, signal variance, noise variance) by log marginal
/// likelihood over a fixed grid plus a short deterministic coordinate
/// refinement; otherwise the given values are used as-is.
struct KernelConfig {
    Eigen::VectorXd lengthscales{Eigen::VectorXd::Ones(1)};  // size 1 (shared) or d
    double signal_variance = 1.0;   // sigma_f^2, > 0
    double noise_variance = 1e-2;   // sigma_n^2, >= 0
    double jitter = 1e-8;           // > 0 (may be tiny)
    bool optimize = false;

    void validate() const {
        if (lengthscales.size() < 1 || (lengthscales.array() <= 0.0).any())
            throw std::invalid_argument("KernelConfig: lengthscales must be > 0");
        if (signal_variance <= 0.0)
            throw std::invalid_argument("KernelConfig: signal_variance must be > 0");
        if (noise_variance < 0.0)
            throw std::invalid_argument("KernelConfig: noise_variance must be >= 0");
        if (jitter < 0.0) throw std::invalid_argument("KernelConfig: jitter must be >= 0");
    }
};

/// Exact GP regressor with a cached Cholesky factorization of
/// K + (sigma_n^2 + jitter) I. Immutable once fitted.
class GprModel {
public:
    static GprModel fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                        const KernelConfig& cfg);

    /// Posterior mean and latent variance at query rows. The observation
    /// noise is not added; see noise_variance().
    std::pair<Eigen::VectorXd, Eigen::VectorXd> predict(const Eigen::MatrixXd& Xq) const;

    double log_marginal_likelihood() const { return lml_; }
    const KernelConfig& kernel() const { return cfg_; }
    double noise_variance() const { return cfg_.noise_variance; }
    double jitter_used() const { return jitter_used_; }
    Eigen::Index input_dim() const { return X_.cols(); }
    Eigen::Index train_size() const { return X_.rows(); }

private:
    GprModel() = default;

    Eigen::MatrixXd X_;
    KernelConfig cfg_;
    Eigen::LLT<Eigen::MatrixXd> llt_;
    Eigen::VectorXd alpha_;  // (K + sigma_n^2 I + jitter I)^-1 y
    double lml_ = 0.0;
    double jitter_used_ = 0.0;
};

inline GprModel gpr_fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                        const KernelConfig& cfg) {
    return GprModel::fit(X, y, cfg);
}

inline std::pair<Eigen::VectorXd, Eigen::VectorXd> gpr_predict(const GprModel& model,
                                                               const Eigen::MatrixXd& Xq) {
    return model.predict(Xq);
}

}  // namespace hsi
