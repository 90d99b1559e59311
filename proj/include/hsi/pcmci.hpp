#pragma once

#include "hsi/causal.hpp"
#include "hsi/timeseries.hpp"

namespace hsi {

/// Candidate parents of one target, sorted by descending test-statistic
/// magnitude (strongest first).
struct CandidateParents {
    std::vector<LaggedVariable> parents;
    std::vector<double> strengths;  // |statistic| aligned with parents
};

/// PC-style parent preselection at significance alpha_pc: starting from all
/// lagged variables, iteratively remove candidates that test independent of
/// the target given the p strongest other candidates, for growing p.
std::vector<CandidateParents> pc1_parents(const TimeSeriesDataset& dataset,
                                          const DiscoveryConfig& cfg);

/// MCI validation: every ordered lagged pair is tested conditioned on the
/// target's preselected parents (minus the tested link) and the source's
/// parents shifted back by the link lag, both truncated to the strongest
/// max_conds entries. Edges with p <= alpha survive.
CausalGraph mci_validate(const TimeSeriesDataset& dataset,
                         const std::vector<CandidateParents>& candidates,
                         const DiscoveryConfig& cfg);

/// Full discovery: pc1_parents followed by mci_validate. Deterministic for a
/// fixed config (permutation streams are derived per link from the seed).
CausalGraph run_pcmci(const TimeSeriesDataset& dataset, const DiscoveryConfig& cfg);

}  // namespace hsi
