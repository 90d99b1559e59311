#include "hsi/features.hpp"

#include <algorithm>

namespace hsi {

namespace {

double window_entropy_bits(const Eigen::Ref<const Eigen::VectorXd>& seg, int bins) {
    const double lo = seg.minCoeff();
    const double hi = seg.maxCoeff();
    if (!(hi > lo)) return 0.0;
    std::vector<int> counts(static_cast<std::size_t>(bins), 0);
    const double scale = static_cast<double>(bins) / (hi - lo);
    for (Eigen::Index i = 0; i < seg.size(); ++i) {
        int b = static_cast<int>((seg[i] - lo) * scale);
        b = std::clamp(b, 0, bins - 1);
        ++counts[static_cast<std::size_t>(b)];
    }
    const double n = static_cast<double>(seg.size());
    double h = 0.0;
    for (int c : counts) {
        if (c == 0) continue;
        const double p = static_cast<double>(c) / n;
        h -= p * std::log2(p);
    }
    return h;
}

double mean_window_entropy(const TimeSeriesDataset& ds, Eigen::Index start, Eigen::Index len,
                           int bins) {
    double sum = 0.0;
    for (Eigen::Index c = 0; c < ds.cols(); ++c)
        sum += window_entropy_bits(ds.values.col(c).segment(start, len), bins);
    return sum / static_cast<double>(ds.cols());
}

}  // namespace

GoalAssignment assign_goals(const Track& track, const GoalSet& goals, int hysteresis_steps) {
    goals.validate();
    if (!track.has_derived())
        throw std::invalid_argument("assign_goals: track must be differentiated first");
    if (hysteresis_steps < 0)
        throw std::invalid_argument("assign_goals: hysteresis_steps must be >= 0");

    const int n_goals = static_cast<int>(goals.goals.size());
    GoalAssignment out;
    out.active.resize(track.size());
    int active = 0;
    int cooldown = 0;  // steps remaining during which arrival cannot trigger
    for (std::size_t i = 0; i < track.size(); ++i) {
        out.active[i] = active;
        const Vec2 p(track.samples[i].x, track.samples[i].y);
        const double d = (goals.goals[static_cast<std::size_t>(active)] - p).norm();
        if (cooldown > 0) {
            --cooldown;
        } else if (d < goals.arrival_radius) {
            active = (active + 1) % n_goals;
            cooldown = hysteresis_steps;
        }
    }
    return out;
}

ScenarioSeries goal_features(const Track& track, const GoalAssignment& assignment,
                             const GoalSet& goals) {
    goals.validate();
    if (assignment.size() != track.size())
        throw std::invalid_argument("goal_features: assignment length mismatch");
    if (!track.has_derived())
        throw std::invalid_argument("goal_features: track must be differentiated first");

    ScenarioSeries out;
    out.theta_g.resize(track.size());
    out.d_g.resize(track.size());
    out.v.resize(track.size());
    for (std::size_t i = 0; i < track.size(); ++i) {
        const int g = assignment.active[i];
        if (g < 0 || g >= static_cast<int>(goals.goals.size()))
            throw std::invalid_argument("goal_features: assignment index out of range");
        const Vec2 p(track.samples[i].x, track.samples[i].y);
        const Vec2 to_goal = goals.goals[static_cast<std::size_t>(g)] - p;
        out.d_g[i] = to_goal.norm();
        out.theta_g[i] = wrap_angle(std::atan2(to_goal.y(), to_goal.x()) - track.heading[i]);
        out.v[i] = track.speed[i];
    }
    return out;
}

SubsampleResult entropy_subsample(const TimeSeriesDataset& dataset, const SubsampleConfig& cfg) {
    cfg.validate();
    const Eigen::Index T = dataset.rows();
    if (T < cfg.base_window)
        throw std::invalid_argument("entropy_subsample: dataset shorter than base_window");

    std::vector<int> kept;
    Eigen::Index s = 0;
    int window = cfg.base_window;
    while (s < T) {
        const Eigen::Index w = std::min<Eigen::Index>(window, T - s);
        const double h = mean_window_entropy(dataset, s, w, cfg.bins);
        if (h >= cfg.entropy_threshold) {
            if (w > cfg.base_window) {
                // A grown window turned active: re-examine at base granularity
                // so only genuinely active spans are kept wholesale.
                window = cfg.base_window;
                continue;
            }
            for (Eigen::Index i = s; i < s + w; ++i) kept.push_back(static_cast<int>(i));
            s += w;
            window = cfg.base_window;
        } else {
            kept.push_back(static_cast<int>(s));
            s += w;
            window = std::min(window * 2, cfg.max_window);
        }
    }

    SubsampleResult out;
    out.kept = std::move(kept);
    out.dataset.variable_names = dataset.variable_names;
    out.dataset.dt = dataset.dt;
    out.dataset.values.resize(static_cast<Eigen::Index>(out.kept.size()), dataset.cols());
    for (std::size_t r = 0; r < out.kept.size(); ++r)
        out.dataset.values.row(static_cast<Eigen::Index>(r)) = dataset.values.row(out.kept[r]);
    return out;
}

}  // namespace hsi
