#pragma once

#include "hsi/common.hpp"

#include <nlohmann/json_fwd.hpp>

#include <string>
#include <utility>
#include <vector>

namespace hsi {

struct TrackSample {
    double t = 0.0;  // seconds
    double x = 0.0;  // meters
    double y = 0.0;  // meters
};

/// One agent's trajectory. Derived kinematics (vx, vy, speed, heading) are
/// empty until differentiate() fills them; when present they cover every
/// sample. Sample times are strictly increasing.
struct Track {
    std::string agent_id;
    std::vector<TrackSample> samples;
    std::vector<double> vx;
    std::vector<double> vy;
    std::vector<double> speed;    // m/s, >= 0
    std::vector<double> heading;  // radians in (-pi, pi]

    std::size_t size() const { return samples.size(); }
    bool has_derived() const { return !speed.empty(); }
    double duration() const {
        return samples.empty() ? 0.0 : samples.back().t - samples.front().t;
    }
};

struct TrackSet {
    std::vector<Track> tracks;

    const Track* find(const std::string& agent_id) const {
        for (const auto& t : tracks)
            if (t.agent_id == agent_id) return &t;
        return nullptr;
    }
};

/// Aligned named columns over a shared uniform time index.
struct TimeSeriesDataset {
    std::vector<std::string> variable_names;
    Eigen::MatrixXd values;  // T x N
    double dt = 0.0;         // seconds per step

    Eigen::Index rows() const { return values.rows(); }
    Eigen::Index cols() const { return values.cols(); }

    int index_of(const std::string& name) const {
        for (std::size_t i = 0; i < variable_names.size(); ++i)
            if (variable_names[i] == name) return static_cast<int>(i);
        return -1;
    }
};

/// Column selector: by index (>= 0) or, when a header row is present, by name.
struct ColumnRef {
    int index = -1;
    std::string name;

    bool by_name() const { return index < 0; }
};

/// Maps raw trajectory-log columns onto (time, agent, x, y) and converts
/// units. Covers comma/space separated logs such as 100 Hz mocap exports and
/// 30 Hz range-sensor exports with millimetre coordinates.
struct SchemaConfig {
    ColumnRef time_col{0, ""};
    ColumnRef agent_col{1, ""};
    ColumnRef x_col{2, ""};
    ColumnRef y_col{3, ""};
    double time_scale = 1.0;      // multiply raw time to get seconds
    double position_scale = 1.0;  // multiply raw x/y to get meters
    char delimiter = ',';
    bool has_header = false;

    void validate() const;
    static SchemaConfig from_json(const nlohmann::json& j);
};

/// Parse a delimited trajectory log into per-agent tracks (sorted by time,
/// units converted via the schema scale factors).
TrackSet load_tracks(const std::string& path, const SchemaConfig& schema);

/// Split a track wherever consecutive samples are more than max_gap_seconds
/// apart (tracking dropouts), instead of interpolating across the hole.
/// Split parts keep the agent id with a "#k" suffix.
std::vector<Track> split_on_gaps(const Track& track, double max_gap_seconds);

/// Linear interpolation onto the uniform grid t0, t0+dt, ... within the raw
/// time range. Derived fields are dropped (re-differentiate afterwards).
Track resample_track(const Track& track, double target_dt);

/// Central finite differences (one-sided at the ends) on a uniformly sampled
/// track. Below v_eps the heading is carried forward from the previous sample
/// (atan2 is undefined at standstill).
Track differentiate(const Track& track, double v_eps = 1e-3);

/// Assemble named equal-length series into a dataset. Rejects duplicate
/// names and zero-variance columns (naming the offender).
TimeSeriesDataset to_dataset(
    const std::vector<std::pair<std::string, std::vector<double>>>& columns, double dt);

}  // namespace hsi
