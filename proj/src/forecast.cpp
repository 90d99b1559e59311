#include "hsi/forecast.hpp"

#include <algorithm>

namespace hsi {

namespace {

struct Standardizer {
    Eigen::VectorXd mean;
    Eigen::VectorXd scale;  // 1 for constant columns (they carry no signal)

    static Standardizer from(const Eigen::MatrixXd& X) {
        Standardizer s;
        s.mean = X.colwise().mean();
        s.scale.resize(X.cols());
        for (Eigen::Index c = 0; c < X.cols(); ++c) {
            const double var = sample_variance(X.col(c));
            s.scale[c] = var > 0.0 ? std::sqrt(var) : 1.0;
        }
        return s;
    }

    Eigen::MatrixXd apply(const Eigen::MatrixXd& X) const {
        return ((X.rowwise() - mean.transpose()).array().rowwise() /
                scale.transpose().array())
            .matrix();
    }
};

/// Deterministic row thinning to at most max_rows (uniform stride, keeps the
/// last row).
Eigen::MatrixXd thin_rows(const Eigen::MatrixXd& X, int max_rows) {
    const Eigen::Index m = X.rows();
    if (m <= max_rows) return X;
    Eigen::MatrixXd out(max_rows, X.cols());
    for (int i = 0; i < max_rows; ++i) {
        const Eigen::Index r = (static_cast<Eigen::Index>(i) * (m - 1)) / (max_rows - 1);
        out.row(i) = X.row(r);
    }
    return out;
}

Eigen::VectorXd thin_rows(const Eigen::VectorXd& v, int max_rows) {
    const Eigen::Index m = v.size();
    if (m <= max_rows) return v;
    Eigen::VectorXd out(max_rows);
    for (int i = 0; i < max_rows; ++i)
        out[i] = v[(static_cast<Eigen::Index>(i) * (m - 1)) / (max_rows - 1)];
    return out;
}

struct FittedPredictor {
    Eigen::VectorXd predictions;  // de-standardized, on the test rows
};

FittedPredictor fit_and_predict(const Eigen::MatrixXd& X_train, const Eigen::VectorXd& y_train,
                                const Eigen::MatrixXd& X_test, const BenchmarkConfig& cfg) {
    // Cap the training window (most recent rows), then standardize on it.
    const Eigen::Index m = X_train.rows();
    const Eigen::Index keep = std::min<Eigen::Index>(m, cfg.max_train_rows);
    const Eigen::MatrixXd Xt = X_train.bottomRows(keep);
    const Eigen::VectorXd yt = y_train.tail(keep);

    const Standardizer sx = Standardizer::from(Xt);
    const double y_mean = yt.mean();
    const double y_var = sample_variance(yt);
    const double y_scale = y_var > 0.0 ? std::sqrt(y_var) : 1.0;

    const Eigen::MatrixXd Xs = sx.apply(Xt);
    const Eigen::VectorXd ys = (yt.array() - y_mean) / y_scale;

    KernelConfig kernel = cfg.kernel;
    if (kernel.optimize) {
        // Hyperparameter search on a thinned subsample, final fit on the
        // capped window at the selected values.
        const GprModel search = gpr_fit(thin_rows(Xs, cfg.max_search_rows),
                                        thin_rows(ys, cfg.max_search_rows), kernel);
        kernel = search.kernel();
    }
    const GprModel model = gpr_fit(Xs, ys, kernel);

    const auto [mean_s, var_s] = model.predict(sx.apply(X_test));
    FittedPredictor out;
    out.predictions = (mean_s.array() * y_scale + y_mean).matrix();
    return out;
}

}  // namespace

DesignMatrix build_design(const TimeSeriesDataset& dataset, const PredictorSpec& spec,
                          int tau_max) {
    if (tau_max < 1) throw std::invalid_argument("build_design: tau_max must be >= 1");
    const Eigen::Index T = dataset.rows();
    if (T <= tau_max + 1)
        throw std::invalid_argument("build_design: dataset too short for tau_max");
    if (spec.target < 0 || spec.target >= dataset.cols())
        throw std::invalid_argument("build_design: target index out of range");

    DesignMatrix out;
    out.features = spec.features;
    if (out.features.empty()) {
        if (spec.mode != PredictorMode::Causal)
            throw std::invalid_argument("build_design: empty feature set");
        // Orphan target: predict from its own previous value.
        out.features = {{spec.target, 1}};
        out.used_fallback = true;
    }
    std::sort(out.features.begin(), out.features.end());
    out.features.erase(std::unique(out.features.begin(), out.features.end()),
                       out.features.end());
    for (const auto& f : out.features) {
        if (f.var < 0 || f.var >= dataset.cols())
            throw std::invalid_argument("build_design: feature variable out of range");
        if (f.lag < 1 || f.lag > tau_max)
            throw std::invalid_argument("build_design: feature lag outside 1..tau_max");
    }

    const Eigen::Index rows = T - tau_max;
    out.X.resize(rows, static_cast<Eigen::Index>(out.features.size()));
    out.y = dataset.values.col(spec.target).segment(tau_max, rows);
    for (std::size_t j = 0; j < out.features.size(); ++j)
        out.X.col(static_cast<Eigen::Index>(j)) =
            dataset.values.col(out.features[j].var).segment(tau_max - out.features[j].lag, rows);
    return out;
}

double nmae(const Eigen::VectorXd& actual, const Eigen::VectorXd& predicted) {
    if (actual.size() != predicted.size())
        throw std::invalid_argument("nmae: length mismatch");
    if (actual.size() < 1) throw std::invalid_argument("nmae: empty series");
    const double mean = actual.mean();
    if (mean == 0.0)
        throw std::invalid_argument("nmae: mean of actual series is zero (undefined)");
    const double mae =
        (actual - predicted).cwiseAbs().sum() / static_cast<double>(actual.size());
    return mae / mean;
}

PredictionReport benchmark(const TimeSeriesDataset& dataset, const CausalGraph& graph,
                           const BenchmarkConfig& cfg) {
    cfg.validate();
    const int N = static_cast<int>(dataset.cols());
    if (static_cast<int>(graph.variables.size()) != N)
        throw std::invalid_argument("benchmark: graph/dataset variable count mismatch");

    const Eigen::Index design_rows = dataset.rows() - cfg.tau_max;
    const auto train_n = static_cast<Eigen::Index>(
        std::floor(cfg.split * static_cast<double>(design_rows)));
    const Eigen::Index test_n = design_rows - train_n;
    if (test_n < 20)
        throw std::invalid_argument("benchmark: need at least 20 test rows after the split");

    std::vector<LaggedVariable> full_features;
    for (int var = 0; var < N; ++var)
        for (int lag = 1; lag <= cfg.tau_max; ++lag) full_features.push_back({var, lag});

    PredictionReport report;
    report.train_rows = static_cast<int>(train_n);
    report.test_rows = static_cast<int>(test_n);

    double sum_causal = 0.0;
    double sum_full = 0.0;
    for (int target = 0; target < N; ++target) {
        PredictorSpec causal_spec{target, graph.parents_of(target), PredictorMode::Causal};
        PredictorSpec full_spec{target, full_features, PredictorMode::Full};
        const DesignMatrix causal_design = build_design(dataset, causal_spec, cfg.tau_max);
        const DesignMatrix full_design = build_design(dataset, full_spec, cfg.tau_max);

        const auto run = [&](const DesignMatrix& d) {
            return fit_and_predict(d.X.topRows(train_n), d.y.head(train_n),
                                   d.X.bottomRows(test_n), cfg);
        };
        const FittedPredictor causal_fit = run(causal_design);
        const FittedPredictor full_fit = run(full_design);
        const Eigen::VectorXd actual = causal_design.y.tail(test_n);

        VariableBenchmark vb;
        vb.variable = dataset.variable_names[static_cast<std::size_t>(target)];
        vb.parents = causal_design.features;
        vb.used_fallback = causal_design.used_fallback;
        vb.nmae_causal = nmae(actual, causal_fit.predictions);
        vb.nmae_full = nmae(actual, full_fit.predictions);
        report.per_variable.push_back(vb);
        sum_causal += vb.nmae_causal;
        sum_full += vb.nmae_full;

        PredictionSeries ps;
        ps.variable = vb.variable;
        for (Eigen::Index i = 0; i < test_n; ++i) {
            const Eigen::Index row = cfg.tau_max + train_n + i;  // dataset row of this target
            ps.t.push_back(static_cast<double>(row) * dataset.dt);
            ps.actual.push_back(actual[i]);
            ps.causal.push_back(causal_fit.predictions[i]);
            ps.full.push_back(full_fit.predictions[i]);
        }
        report.predictions.push_back(std::move(ps));
    }
    report.mean_nmae_causal = sum_causal / static_cast<double>(N);
    report.mean_nmae_full = sum_full / static_cast<double>(N);
    return report;
}

}  // namespace hsi
