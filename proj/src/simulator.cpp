#include "hsi/simulator.hpp"

#include "hsi/velocity_obstacle.hpp"

namespace hsi {

namespace {

/// Internal walker state shared by both scenarios. The position advances with
/// the previous step's speed and heading, so that d_g(t) is exactly the
/// law-of-cosines function of (d_g, v, theta_g) at t-1 -- the lag-1 structure
/// the ground-truth graphs encode.
struct Walker {
    Vec2 pos;
    double heading;
    double speed;
    int goal = 0;

    Vec2 active_goal(const GoalSet& goals) const {
        return goals.goals[static_cast<std::size_t>(goal)];
    }

    double goal_distance(const GoalSet& goals) const {
        return (active_goal(goals) - pos).norm();
    }

    double goal_bearing(const GoalSet& goals) const {
        const Vec2 d = active_goal(goals) - pos;
        return std::atan2(d.y(), d.x());
    }

    void maybe_switch_goal(const GoalSet& goals, double prev_distance) {
        if (prev_distance < goals.arrival_radius)
            goal = (goal + 1) % static_cast<int>(goals.goals.size());
    }

    void advance_position(double dt) { pos += speed * dt * unit_from_angle(heading); }

    void turn_toward_goal(const GoalSet& goals, double omega_max, double dt, double noise) {
        const double misalignment = wrap_angle(goal_bearing(goals) - heading);
        const double turn = std::clamp(misalignment, -omega_max * dt, omega_max * dt);
        heading = wrap_angle(heading + turn + noise);
    }
};

CausalGraph make_ground_truth(const std::vector<std::string>& vars,
                              const std::vector<std::pair<int, int>>& links) {
    CausalGraph g;
    g.variables = vars;
    for (const auto& [src, tgt] : links) g.edges.push_back({{src, 1}, tgt, 1.0, 0.0});
    return g;
}

/// Simulator features bypass the zero-variance gate of to_dataset: degenerate
/// configs (zero noise, straight line) are legitimate here, and discovery
/// re-checks constancy at its own boundary.
TimeSeriesDataset make_features(
    const std::vector<std::pair<std::string, const std::vector<double>*>>& columns,
    double dt) {
    TimeSeriesDataset ds;
    ds.dt = dt;
    const auto T = static_cast<Eigen::Index>(columns.front().second->size());
    ds.values.resize(T, static_cast<Eigen::Index>(columns.size()));
    for (std::size_t c = 0; c < columns.size(); ++c) {
        ds.variable_names.push_back(columns[c].first);
        for (Eigen::Index r = 0; r < T; ++r)
            ds.values(r, static_cast<Eigen::Index>(c)) =
                (*columns[c].second)[static_cast<std::size_t>(r)];
    }
    return ds;
}

Track make_track(const std::string& id, const std::vector<Vec2>& positions, double dt) {
    Track t;
    t.agent_id = id;
    t.samples.resize(positions.size());
    for (std::size_t i = 0; i < positions.size(); ++i)
        t.samples[i] = {static_cast<double>(i) * dt, positions[i].x(), positions[i].y()};
    return t;
}

std::vector<Vec2> ring_goals(int count, double radius, double phase) {
    std::vector<Vec2> out;
    for (int i = 0; i < count; ++i) {
        const double a = phase + 2.0 * kPi * static_cast<double>(i) / count;
        out.emplace_back(radius * std::cos(a), radius * std::sin(a));
    }
    return out;
}

}  // namespace

void HumanGoalSimConfig::validate() const {
    goals.validate();
    if (dt <= 0.0) throw std::invalid_argument("simulator: dt must be positive");
    if (steps <= 0) throw std::invalid_argument("simulator: steps must be positive");
    if (gain <= 0.0) throw std::invalid_argument("simulator: gain must be positive");
    if (v_max <= 0.0) throw std::invalid_argument("simulator: v_max must be positive");
    if (omega_max <= 0.0) throw std::invalid_argument("simulator: omega_max must be positive");
    if (noise_v < 0.0 || noise_heading < 0.0)
        throw std::invalid_argument("simulator: noise std must be >= 0");
    if (steps < 2) throw std::invalid_argument("simulator: need at least 2 steps");
}

HumanGoalSimConfig HumanGoalSimConfig::defaults() {
    HumanGoalSimConfig cfg;
    cfg.goals.goals = ring_goals(6, 4.0, 0.0);
    cfg.goals.arrival_radius = 0.4;
    cfg.start = Vec2(4.0, 0.0);
    cfg.start_heading = kPi / 2.0;
    return cfg;
}

void MovingObstacleSimConfig::validate() const {
    base.validate();
    if (obstacle_goals.empty())
        throw std::invalid_argument("simulator: at least one obstacle required");
    if (obstacle_starts.size() != obstacle_goals.size())
        throw std::invalid_argument("simulator: obstacle starts/goals size mismatch");
    for (const auto& g : obstacle_goals) g.validate();
    if (obstacle_speed <= 0.0)
        throw std::invalid_argument("simulator: obstacle_speed must be positive");
    if (beta < 0.0) throw std::invalid_argument("simulator: beta must be >= 0");
    if (agent_radius <= 0.0) throw std::invalid_argument("simulator: agent_radius must be > 0");
}

MovingObstacleSimConfig MovingObstacleSimConfig::defaults() {
    MovingObstacleSimConfig cfg;
    cfg.base = HumanGoalSimConfig::defaults();
    // Two shuttles crossing the ring interior on incommensurate legs, so
    // encounters are spread over the agent's whole goal cycle.
    GoalSet o1;
    o1.goals = {Vec2(-3.0, -2.6), Vec2(3.0, 2.6)};
    o1.arrival_radius = 0.4;
    GoalSet o2;
    o2.goals = {Vec2(2.8, -3.1), Vec2(-2.8, 3.1)};
    o2.arrival_radius = 0.4;
    cfg.obstacle_goals = {o1, o2};
    cfg.obstacle_starts = {Vec2(-3.0, -2.6), Vec2(2.8, -3.1)};
    return cfg;
}

SimulationResult simulate_human_goal(const HumanGoalSimConfig& cfg) {
    cfg.validate();
    Rng rng(cfg.seed);
    const int n = cfg.steps;

    std::vector<double> theta_g(n), d_g(n), v(n);
    std::vector<Vec2> positions(n);

    Walker w{cfg.start, cfg.start_heading, 0.0, 0};
    // Initial speed from the law at the initial distance, so the profile is
    // stationary from the first sample.
    d_g[0] = w.goal_distance(cfg.goals);
    w.speed = std::max(0.0, std::min(cfg.v_max, cfg.gain * d_g[0]) +
                                rng.normal(0.0, cfg.noise_v));
    theta_g[0] = wrap_angle(w.goal_bearing(cfg.goals) - w.heading);
    v[0] = w.speed;
    positions[0] = w.pos;

    for (int t = 1; t < n; ++t) {
        w.maybe_switch_goal(cfg.goals, d_g[t - 1]);
        w.advance_position(cfg.dt);
        w.turn_toward_goal(cfg.goals, cfg.omega_max, cfg.dt,
                           rng.normal(0.0, cfg.noise_heading));
        w.speed = std::max(0.0, std::min(cfg.v_max, cfg.gain * d_g[t - 1]) +
                                    rng.normal(0.0, cfg.noise_v));
        d_g[t] = w.goal_distance(cfg.goals);
        theta_g[t] = wrap_angle(w.goal_bearing(cfg.goals) - w.heading);
        v[t] = w.speed;
        positions[t] = w.pos;
    }

    SimulationResult out;
    out.tracks.tracks.push_back(make_track("agent", positions, cfg.dt));
    out.features =
        make_features({{"theta_g", &theta_g}, {"d_g", &d_g}, {"v", &v}}, cfg.dt);
    // Variables: 0=theta_g, 1=d_g, 2=v.
    out.ground_truth = make_ground_truth(
        {"theta_g", "d_g", "v"},
        {{1, 0}, {0, 1}, {2, 1}, {1, 2}, {0, 0}, {1, 1}});
    return out;
}

SimulationResult simulate_moving_obstacles(const MovingObstacleSimConfig& cfg) {
    cfg.validate();
    const auto& base = cfg.base;
    Rng rng(base.seed);
    const int n = base.steps;
    const std::size_t n_obs = cfg.obstacle_goals.size();

    std::vector<double> d_g(n), v(n), risk_series(n);
    std::vector<Vec2> positions(n);
    std::vector<std::vector<Vec2>> obs_positions(n_obs, std::vector<Vec2>(n));

    Walker agent{base.start, base.start_heading, 0.0, 0};
    std::vector<Walker> obstacles;
    for (std::size_t i = 0; i < n_obs; ++i)
        obstacles.push_back({cfg.obstacle_starts[i], 0.0, cfg.obstacle_speed, 0});

    auto obstacle_discs = [&](const std::vector<Walker>& obs) {
        std::vector<AgentDisc> discs;
        for (const auto& o : obs)
            discs.push_back({o.pos, o.speed * unit_from_angle(o.heading), cfg.agent_radius});
        return discs;
    };
    auto eval_risk = [&](const Vec2& pos, double speed, double heading,
                         const std::vector<Walker>& obs) {
        const AgentDisc a{pos, speed * unit_from_angle(heading), cfg.agent_radius};
        return risk(a, obstacle_discs(obs)).risk;
    };

    // Obstacles head straight at their active goal (instant turning, no
    // avoidance); only the selected agent reacts to risk.
    auto step_obstacle = [&](Walker& o, const GoalSet& gs) {
        const double prev_d = o.goal_distance(gs);
        o.advance_position(base.dt);
        o.maybe_switch_goal(gs, prev_d);
        o.heading = o.goal_bearing(gs);
    };
    for (std::size_t i = 0; i < n_obs; ++i)
        obstacles[i].heading = obstacles[i].goal_bearing(cfg.obstacle_goals[i]);

    d_g[0] = agent.goal_distance(base.goals);
    agent.speed = std::max(0.0, std::min(base.v_max, base.gain * d_g[0]) +
                                    rng.normal(0.0, base.noise_v));
    v[0] = agent.speed;
    positions[0] = agent.pos;
    for (std::size_t i = 0; i < n_obs; ++i) obs_positions[i][0] = obstacles[i].pos;
    risk_series[0] = eval_risk(agent.pos, agent.speed, agent.heading, obstacles);

    for (int t = 1; t < n; ++t) {
        agent.maybe_switch_goal(base.goals, d_g[t - 1]);
        const double prev_speed = agent.speed;
        const double prev_heading = agent.heading;
        agent.advance_position(base.dt);
        for (std::size_t i = 0; i < n_obs; ++i)
            step_obstacle(obstacles[i], cfg.obstacle_goals[i]);

        // Risk measured on the state carried into t: position just advanced,
        // velocity still the one that produced the move.
        risk_series[t] = eval_risk(agent.pos, prev_speed, prev_heading, obstacles);

        agent.turn_toward_goal(base.goals, base.omega_max, base.dt,
                               rng.normal(0.0, base.noise_heading));
        agent.speed = std::max(
            0.0, std::min(base.v_max, base.gain * d_g[t - 1]) -
                     cfg.beta * (risk_series[t - 1] - 1.0) + rng.normal(0.0, base.noise_v));
        d_g[t] = agent.goal_distance(base.goals);
        v[t] = agent.speed;
        positions[t] = agent.pos;
        for (std::size_t i = 0; i < n_obs; ++i) obs_positions[i][t] = obstacles[i].pos;
    }

    SimulationResult out;
    out.tracks.tracks.push_back(make_track("agent", positions, base.dt));
    for (std::size_t i = 0; i < n_obs; ++i)
        out.tracks.tracks.push_back(
            make_track("obstacle" + std::to_string(i), obs_positions[i], base.dt));
    out.features =
        make_features({{"d_g", &d_g}, {"v", &v}, {"risk", &risk_series}}, base.dt);
    // Variables: 0=d_g, 1=v, 2=risk.
    out.ground_truth = make_ground_truth(
        {"d_g", "v", "risk"},
        {{1, 0}, {0, 1}, {2, 1}, {1, 2}, {0, 0}});
    return out;
}

}  // namespace hsi
