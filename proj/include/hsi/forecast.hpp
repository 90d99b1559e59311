#pragma once

#include "hsi/causal.hpp"
#include "hsi/gpr.hpp"
#include "hsi/timeseries.hpp"

namespace hsi {

enum class PredictorMode { Causal, Full };

/// Which lagged features predict one target. In causal mode the feature set
/// is the target's discovered parents; in full mode it is every variable at
/// every lag 1..tau_max.
struct PredictorSpec {
    int target = 0;
    std::vector<LaggedVariable> features;
    PredictorMode mode = PredictorMode::Full;
};

struct DesignMatrix {
    Eigen::MatrixXd X;  // (T - tau_max) x |features|
    Eigen::VectorXd y;  // target at time t
    std::vector<LaggedVariable> features;  // canonical (var, lag) order
    bool used_fallback = false;  // orphan target fell back to its self-lag
};

/// Lagged design rows t = tau_max .. T-1. An empty causal feature set falls
/// back to the target's own lag-1 value (flagged in the result).
DesignMatrix build_design(const TimeSeriesDataset& dataset, const PredictorSpec& spec,
                          int tau_max);

/// Normalised mean absolute error: MAE(y, yhat) / mean(y). Errors when
/// mean(y) is zero (normalization undefined). Scale-invariant but
/// translation-sensitive by construction.
double nmae(const Eigen::VectorXd& actual, const Eigen::VectorXd& predicted);

struct BenchmarkConfig {
    int tau_max = 1;
    double split = 0.8;  // chronological train fraction
    KernelConfig kernel{Eigen::VectorXd::Ones(1), 1.0, 1e-2, 1e-8, true};
    // Exact GP cost is cubic; cap the rows used for the final fit and the
    // hyperparameter search (most recent rows win, deterministically).
    int max_train_rows = 512;
    int max_search_rows = 256;

    void validate() const {
        if (tau_max < 1) throw std::invalid_argument("BenchmarkConfig: tau_max must be >= 1");
        if (!(split > 0.0 && split < 1.0))
            throw std::invalid_argument("BenchmarkConfig: split must be in (0, 1)");
        if (max_train_rows < 2 || max_search_rows < 2)
            throw std::invalid_argument("BenchmarkConfig: row caps must be >= 2");
        kernel.validate();
    }
};

struct VariableBenchmark {
    std::string variable;
    double nmae_causal = 0.0;
    double nmae_full = 0.0;
    std::vector<LaggedVariable> parents;  // features used by the causal predictor
    bool used_fallback = false;
};

/// Per-variable one-step-ahead predictions on the test split, for export.
struct PredictionSeries {
    std::string variable;
    std::vector<double> t;       // seconds (row index * dt)
    std::vector<double> actual;
    std::vector<double> causal;
    std::vector<double> full;
};

struct PredictionReport {
    std::vector<VariableBenchmark> per_variable;
    double mean_nmae_causal = 0.0;
    double mean_nmae_full = 0.0;
    int train_rows = 0;
    int test_rows = 0;
    std::vector<PredictionSeries> predictions;
};

/// Fit causal and full GP predictors per variable on the chronological train
/// split, one-step-ahead predict the test split, and score with NMAE.
/// Deterministic: the hyperparameter search is a fixed grid plus fixed
/// refinement, with no stochastic optimizer anywhere.
PredictionReport benchmark(const TimeSeriesDataset& dataset, const CausalGraph& graph,
                           const BenchmarkConfig& cfg);

}  // namespace hsi
