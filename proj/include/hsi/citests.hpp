#pragma once

#include "hsi/causal.hpp"

namespace hsi {

/// Partial-correlation independence test: Pearson correlation of the
/// least-squares residuals of x and y regressed on [1, Z], with a two-sided
/// Student-t p-value at n - |Z| - 2 degrees of freedom. Z may have zero
/// columns (plain correlation).
CITestResult parcorr_test(const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                          const Eigen::MatrixXd& Z);

/// Sample distance correlation (double-centered pairwise-distance statistic),
/// in [0, 1]; 1 for an exact affine relation, 0 at empirical independence.
double distance_correlation(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

/// GP-regression / distance-correlation independence test: residuals of x
/// and y on Z from GP fits (centered series when Z is empty) scored by
/// distance correlation; p-value from a seeded permutation null with +1
/// smoothing.
CITestResult gpdc_test(const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                       const Eigen::MatrixXd& Z, int permutations, std::uint64_t seed);

}  // namespace hsi
