#include "hsi/pcmci.hpp"

#include "hsi/citests.hpp"

#include <algorithm>
#include <numeric>

namespace hsi {

namespace {

/// Aligned lagged slice: series var(t - lag) for t = window_start .. T-1.
Eigen::VectorXd lagged_column(const TimeSeriesDataset& ds, int var, int lag,
                              Eigen::Index window_start) {
    const Eigen::Index n_eff = ds.rows() - window_start;
    return ds.values.col(var).segment(window_start - lag, n_eff);
}

Eigen::MatrixXd condition_matrix(const TimeSeriesDataset& ds,
                                 const std::vector<LaggedVariable>& conds,
                                 Eigen::Index window_start) {
    const Eigen::Index n_eff = ds.rows() - window_start;
    Eigen::MatrixXd Z(n_eff, static_cast<Eigen::Index>(conds.size()));
    for (std::size_t i = 0; i < conds.size(); ++i)
        Z.col(static_cast<Eigen::Index>(i)) =
            lagged_column(ds, conds[i].var, conds[i].lag, window_start);
    return Z;
}

CITestResult run_citest(const TimeSeriesDataset& ds, const LaggedVariable& source, int target,
                        const std::vector<LaggedVariable>& conds, Eigen::Index window_start,
                        const DiscoveryConfig& cfg, std::uint64_t link_seed) {
    const Eigen::VectorXd x = standardized(lagged_column(ds, source.var, source.lag, window_start));
    const Eigen::VectorXd y = standardized(lagged_column(ds, target, 0, window_start));
    Eigen::MatrixXd Z = condition_matrix(ds, conds, window_start);
    for (Eigen::Index c = 0; c < Z.cols(); ++c) Z.col(c) = standardized(Z.col(c));
    if (cfg.test == IndependenceTest::ParCorr) return parcorr_test(x, y, Z);
    return gpdc_test(x, y, Z, cfg.permutations, link_seed);
}

void check_dataset(const TimeSeriesDataset& ds, const DiscoveryConfig& cfg) {
    cfg.validate();
    const Eigen::Index N = ds.cols();
    if (N < 1) throw std::invalid_argument("pcmci: empty dataset");
    if (ds.rows() <= 10 * N * cfg.tau_max)
        throw std::invalid_argument("pcmci: insufficient samples (need T > 10*N*tau_max)");
    for (Eigen::Index c = 0; c < N; ++c)
        if (ds.values.col(c).minCoeff() == ds.values.col(c).maxCoeff())
            throw std::invalid_argument("pcmci: constant column '" +
                                        ds.variable_names[static_cast<std::size_t>(c)] + "'");
}

struct ScoredCandidate {
    LaggedVariable lv;
    double strength = 0.0;  // |statistic| from the most recent test
};

void sort_by_strength(std::vector<ScoredCandidate>& cands) {
    std::stable_sort(cands.begin(), cands.end(), [](const auto& a, const auto& b) {
        return a.strength > b.strength;
    });
}

}  // namespace

std::vector<CandidateParents> pc1_parents(const TimeSeriesDataset& dataset,
                                          const DiscoveryConfig& cfg) {
    check_dataset(dataset, cfg);
    const int N = static_cast<int>(dataset.cols());
    const Eigen::Index window_start = cfg.tau_max;

    std::vector<CandidateParents> out(static_cast<std::size_t>(N));
    for (int target = 0; target < N; ++target) {
        std::vector<ScoredCandidate> cands;
        for (int var = 0; var < N; ++var)
            for (int lag = 1; lag <= cfg.tau_max; ++lag)
                cands.push_back({{var, lag}, 0.0});

        for (int p = 0;; ++p) {
            if (p > static_cast<int>(cands.size()) - 1) break;
            bool removed_any = false;
            std::vector<ScoredCandidate> survivors;
            survivors.reserve(cands.size());
            for (std::size_t i = 0; i < cands.size(); ++i) {
                // The p strongest other candidates, in current sorted order.
                std::vector<LaggedVariable> conds;
                for (std::size_t j = 0; j < cands.size() && static_cast<int>(conds.size()) < p;
                     ++j)
                    if (j != i) conds.push_back(cands[j].lv);
                const std::uint64_t link_seed =
                    mix_seed(cfg.seed, static_cast<std::uint64_t>(target),
                             static_cast<std::uint64_t>(cands[i].lv.var * 1000 + cands[i].lv.lag),
                             static_cast<std::uint64_t>(p));
                const CITestResult res =
                    run_citest(dataset, cands[i].lv, target, conds, window_start, cfg, link_seed);
                if (res.p_value > cfg.alpha_pc) {
                    removed_any = true;
                } else {
                    survivors.push_back({cands[i].lv, std::abs(res.statistic)});
                }
            }
            cands = std::move(survivors);
            sort_by_strength(cands);
            if (!removed_any) break;
        }

        auto& cp = out[static_cast<std::size_t>(target)];
        for (const auto& c : cands) {
            cp.parents.push_back(c.lv);
            cp.strengths.push_back(c.strength);
        }
    }
    return out;
}

CausalGraph mci_validate(const TimeSeriesDataset& dataset,
                         const std::vector<CandidateParents>& candidates,
                         const DiscoveryConfig& cfg) {
    check_dataset(dataset, cfg);
    const int N = static_cast<int>(dataset.cols());
    if (static_cast<int>(candidates.size()) != N)
        throw std::invalid_argument("mci_validate: candidate list size mismatch");
    // Shifted source parents reach back to 2*tau_max; one shared window keeps
    // every MCI test on the same effective sample.
    const Eigen::Index window_start = 2 * cfg.tau_max;

    CausalGraph graph;
    graph.variables = dataset.variable_names;
    for (int target = 0; target < N; ++target) {
        const auto& target_cands = candidates[static_cast<std::size_t>(target)];
        for (int var = 0; var < N; ++var) {
            for (int lag = 1; lag <= cfg.tau_max; ++lag) {
                const LaggedVariable source{var, lag};
                std::vector<LaggedVariable> conds;
                for (const auto& pv : target_cands.parents) {
                    if (pv == source) continue;
                    conds.push_back(pv);
                    if (static_cast<int>(conds.size()) >= cfg.max_conds) break;
                }
                const auto& source_cands = candidates[static_cast<std::size_t>(var)];
                int taken = 0;
                for (const auto& pv : source_cands.parents) {
                    if (taken >= cfg.max_conds) break;
                    const LaggedVariable shifted{pv.var, pv.lag + lag};
                    if (std::find(conds.begin(), conds.end(), shifted) == conds.end()) {
                        conds.push_back(shifted);
                        ++taken;
                    }
                }
                const std::uint64_t link_seed =
                    mix_seed(cfg.seed, 0x4d4349ULL /* phase tag */,
                             static_cast<std::uint64_t>(target),
                             static_cast<std::uint64_t>(var * 1000 + lag));
                const CITestResult res =
                    run_citest(dataset, source, target, conds, window_start, cfg, link_seed);
                if (res.p_value <= cfg.alpha)
                    graph.edges.push_back({source, target, res.statistic, res.p_value});
            }
        }
    }
    return graph;
}

CausalGraph run_pcmci(const TimeSeriesDataset& dataset, const DiscoveryConfig& cfg) {
    return mci_validate(dataset, pc1_parents(dataset, cfg), cfg);
}

}  // namespace hsi
