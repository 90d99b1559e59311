#pragma once

#include "hsi/timeseries.hpp"

#include <vector>

namespace hsi {

struct GoalSet {
    std::vector<Vec2> goals;
    double arrival_radius = 0.5;  // meters

    void validate() const {
        if (goals.empty()) throw std::invalid_argument("GoalSet: at least one goal required");
        if (arrival_radius <= 0.0)
            throw std::invalid_argument("GoalSet: arrival_radius must be > 0");
    }
};

/// Active goal index per time step. Advances cyclically on arrival.
struct GoalAssignment {
    std::vector<int> active;

    std::size_t size() const { return active.size(); }
};

/// The interaction variables extracted from one track: goal bearing relative
/// to heading, Euclidean goal distance, and speed.
struct ScenarioSeries {
    std::vector<double> theta_g;  // radians in (-pi, pi]
    std::vector<double> d_g;      // meters, >= 0
    std::vector<double> v;        // m/s, >= 0

    std::size_t size() const { return d_g.size(); }
};

struct SubsampleConfig {
    int bins = 8;                    // quantization bins per window
    int base_window = 10;            // steps
    int max_window = 50;             // steps
    double entropy_threshold = 1.0;  // bits

    void validate() const {
        if (bins < 2) throw std::invalid_argument("SubsampleConfig: bins must be >= 2");
        if (base_window < 2 || base_window > max_window)
            throw std::invalid_argument("SubsampleConfig: need 2 <= base_window <= max_window");
        if (entropy_threshold < 0.0)
            throw std::invalid_argument("SubsampleConfig: entropy_threshold must be >= 0");
    }
};

struct SubsampleResult {
    TimeSeriesDataset dataset;
    std::vector<int> kept;  // strictly increasing row indices into the input
};

/// Assign the active goal per step. Starts at index 0 and advances (cyclic)
/// at the first step with d_g < arrival_radius; after a switch the new goal
/// cannot trigger arrival for hysteresis_steps (prevents flip-flop between
/// close goals).
GoalAssignment assign_goals(const Track& track, const GoalSet& goals,
                            int hysteresis_steps = 10);

/// Compute (theta_g, d_g, v) against the assigned goal per step. theta_g is
/// the signed bearing of the goal relative to the agent heading.
ScenarioSeries goal_features(const Track& track, const GoalAssignment& assignment,
                             const GoalSet& goals);

/// Entropy-based adaptive row subsampling. Windows are scored by the mean
/// per-variable Shannon entropy of min-max quantized values; windows below
/// the threshold contribute one representative row and the window doubles
/// (up to max_window), windows at or above it contribute all rows at base
/// granularity and the window resets. Row subsetting is joint across columns
/// so the lag structure stays aligned.
SubsampleResult entropy_subsample(const TimeSeriesDataset& dataset, const SubsampleConfig& cfg);

}  // namespace hsi
