#pragma once

#include "hsi/causal.hpp"
#include "hsi/features.hpp"
#include "hsi/timeseries.hpp"

namespace hsi {

/// Goal-seeking walker: speed follows min(v_max, gain * d_g) toward the
/// active goal, heading turns at a bounded rate, goals advance cyclically on
/// arrival. All stochastic terms are seeded Gaussian noise.
struct HumanGoalSimConfig {
    GoalSet goals;
    double dt = 0.1;          // seconds
    int steps = 2000;
    double gain = 0.5;        // 1/s, speed law slope
    double v_max = 1.5;       // m/s
    double omega_max = 1.0;   // rad/s, turn-rate bound
    double noise_v = 0.05;    // m/s
    double noise_heading = 0.02;  // rad
    Vec2 start{0.0, 0.0};
    double start_heading = 0.0;
    std::uint64_t seed = 1;

    void validate() const;

    /// Six goals on a ring, walked in order: keeps the goal bearing mostly
    /// one-signed and the goal distance well excited.
    static HumanGoalSimConfig defaults();
};

/// Adds non-reactive moving obstacles and the risk feedback on speed:
/// v(t) = max(0, min(v_max, gain*d_g(t-1)) - beta*(risk(t-1) - 1)) + noise.
struct MovingObstacleSimConfig {
    HumanGoalSimConfig base;
    std::vector<GoalSet> obstacle_goals;  // one goal schedule per obstacle
    std::vector<Vec2> obstacle_starts;
    double obstacle_speed = 1.2;  // m/s cruise speed
    double beta = 0.2;            // risk-avoidance gain, >= 0
    double agent_radius = 0.3;    // meters (shared by agent and obstacles)

    void validate() const;

    static MovingObstacleSimConfig defaults();
};

struct SimulationResult {
    TrackSet tracks;             // selected agent first, then obstacles
    TimeSeriesDataset features;  // columns: theta_g,d_g,v or d_g,v,risk
    CausalGraph ground_truth;    // the lag-1 edges of the update equations
};

SimulationResult simulate_human_goal(const HumanGoalSimConfig& cfg);
SimulationResult simulate_moving_obstacles(const MovingObstacleSimConfig& cfg);

}  // namespace hsi
