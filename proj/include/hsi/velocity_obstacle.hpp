#pragma once

#include "hsi/common.hpp"

#include <optional>
#include <vector>

namespace hsi {

struct AgentDisc {
    Vec2 position{0.0, 0.0};  // meters
    Vec2 velocity{0.0, 0.0};  // m/s
    double radius = 0.3;      // meters, > 0
};

/// Collision cone from an agent to the combined-radius disc around an
/// obstacle, translated by the obstacle velocity into the agent's velocity
/// space.
struct VOGeometry {
    Vec2 apex{0.0, 0.0};        // velocity-space origin O (= obstacle velocity)
    Vec2 axis{1.0, 0.0};        // unit bearing agent -> obstacle
    double half_angle = 0.0;    // radians in (0, pi/2)
    Vec2 left_boundary{1.0, 0.0};   // unit ray direction, axis rotated +half_angle
    Vec2 right_boundary{1.0, 0.0};  // unit ray direction, axis rotated -half_angle
};

/// Membership decision for one velocity point, with the cone-relative
/// distances that feed the risk exponent. Contributions are zero when the
/// point lies outside (boundary counts as outside).
struct VOEvaluation {
    Vec2 point{0.0, 0.0};  // the evaluated velocity P
    bool inside = false;
    double d_op = 0.0;  // ||P - O||, m/s
    double d_bp = 0.0;  // distance from P to the nearest boundary ray, m/s
};

struct RiskSample {
    double risk = 1.0;  // exp(d_op + d_bp + v_a), > 0
    double v_a = 0.0;   // agent speed, m/s
    double d_op = 0.0;
    double d_bp = 0.0;
};

/// The scalar risk law: exp of the summed cone contributions and speed.
inline double risk_value(double d_op, double d_bp, double v_a) {
    return std::exp(d_op + d_bp + v_a);
}

/// Build the velocity obstacle for one agent-obstacle pair. Throws when the
/// discs already overlap (collision in progress is not a cone).
VOGeometry build_vo(const AgentDisc& agent, const AgentDisc& obstacle);

/// Classify a velocity point against the cone and measure d_OP / d_BP.
VOEvaluation evaluate_vo(const VOGeometry& vo, const Vec2& velocity);

/// Constant-velocity rollout: true iff the discs come closer than their
/// combined radius at any of the sampled instants within the horizon.
bool collision_oracle(const AgentDisc& agent, const AgentDisc& obstacle, double horizon,
                      int steps);

/// Index of the obstacle with minimum center distance (ties -> lowest index);
/// empty list -> nullopt.
std::optional<std::size_t> closest_obstacle(const AgentDisc& agent,
                                            const std::vector<AgentDisc>& others);

/// Collision risk against the closest obstacle. With no obstacle, or the
/// agent velocity outside the cone, the contributions are zero and the risk
/// reduces to exp(agent speed). Overlapping discs are handled by clamping the
/// center distance just outside the combined radius (maximal interaction, not
/// an error).
RiskSample risk(const AgentDisc& agent, const std::vector<AgentDisc>& others);

}  // namespace hsi
