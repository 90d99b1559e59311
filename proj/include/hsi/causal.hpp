#pragma once

#include "hsi/common.hpp"

#include <compare>
#include <optional>
#include <string>
#include <vector>

namespace hsi {

/// Outcome of one conditional independence test.
struct CITestResult {
    double statistic = 0.0;
    double p_value = 1.0;
    int sample_size = 0;
};

/// A variable at a positive time lag (tau >= 1; contemporaneous links are out
/// of scope by design).
struct LaggedVariable {
    int var = 0;
    int lag = 1;

    friend auto operator<=>(const LaggedVariable&, const LaggedVariable&) = default;
};

/// A validated lagged link source -> target with its test statistic.
struct CausalEdge {
    LaggedVariable source;
    int target = 0;
    double statistic = 0.0;
    double p_value = 0.0;
};

/// Set of lagged directed edges over named variables. Acyclic by construction
/// (all lags >= 1).
struct CausalGraph {
    std::vector<std::string> variables;
    std::vector<CausalEdge> edges;

    bool has_edge(int source_var, int lag, int target) const {
        for (const auto& e : edges)
            if (e.source.var == source_var && e.source.lag == lag && e.target == target)
                return true;
        return false;
    }

    /// Parents of a target, sorted by (var, lag).
    std::vector<LaggedVariable> parents_of(int target) const {
        std::vector<LaggedVariable> out;
        for (const auto& e : edges)
            if (e.target == target) out.push_back(e.source);
        std::sort(out.begin(), out.end());
        return out;
    }

    /// Statistic of the self-lag edge, when present (node-border strength in
    /// the rendered graph).
    std::optional<double> auto_strength(int var) const {
        for (const auto& e : edges)
            if (e.target == var && e.source.var == var) return e.statistic;
        return std::nullopt;
    }
};

enum class IndependenceTest { ParCorr, Gpdc };

struct DiscoveryConfig {
    int tau_max = 1;
    double alpha_pc = 0.2;  // liberal preselection significance
    double alpha = 0.05;    // final (MCI) significance
    IndependenceTest test = IndependenceTest::ParCorr;
    int permutations = 500;  // GPDC permutation null size
    int max_conds = 3;       // MCI condition-set truncation per side
    std::uint64_t seed = 0;

    void validate() const {
        if (tau_max < 1) throw std::invalid_argument("DiscoveryConfig: tau_max must be >= 1");
        if (!(alpha > 0.0 && alpha <= alpha_pc && alpha_pc < 1.0))
            throw std::invalid_argument("DiscoveryConfig: need 0 < alpha <= alpha_pc < 1");
        if (test == IndependenceTest::Gpdc && permutations < 100)
            throw std::invalid_argument("DiscoveryConfig: GPDC needs >= 100 permutations");
        if (max_conds < 1) throw std::invalid_argument("DiscoveryConfig: max_conds must be >= 1");
    }
};

}  // namespace hsi
