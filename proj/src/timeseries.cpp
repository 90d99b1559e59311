#include "hsi/timeseries.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

namespace hsi {

namespace {

std::vector<std::string> split_line(const std::string& line, char delim) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream ss(line);
    if (delim == ' ') {
        // Collapse runs of whitespace.
        while (ss >> field) out.push_back(field);
        return out;
    }
    while (std::getline(ss, field, delim)) {
        // Trim surrounding spaces.
        const auto b = field.find_first_not_of(" \t");
        const auto e = field.find_last_not_of(" \t");
        out.push_back(b == std::string::npos ? std::string() : field.substr(b, e - b + 1));
    }
    return out;
}

bool parse_double(const std::string& s, double& out) {
    const char* begin = s.data();
    const char* end = begin + s.size();
    auto [ptr, ec] = std::from_chars(begin, end, out);
    return ec == std::errc() && ptr == end;
}

int resolve_column(const ColumnRef& ref, const std::vector<std::string>& header,
                   const char* what) {
    if (!ref.by_name()) return ref.index;
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == ref.name) return static_cast<int>(i);
    throw std::runtime_error(std::string("load_tracks: column '") + ref.name + "' for " +
                             what + " not found in header");
}

double lerp_sample(const TrackSample& a, const TrackSample& b, double t, bool is_x) {
    if (t <= a.t) return is_x ? a.x : a.y;
    if (t >= b.t) return is_x ? b.x : b.y;
    const double u = (t - a.t) / (b.t - a.t);
    return is_x ? a.x + u * (b.x - a.x) : a.y + u * (b.y - a.y);
}

}  // namespace

void SchemaConfig::validate() const {
    if (time_scale <= 0.0 || position_scale <= 0.0)
        throw std::invalid_argument("SchemaConfig: scale factors must be > 0");
    auto key = [](const ColumnRef& r) {
        return r.by_name() ? "n:" + r.name : "i:" + std::to_string(r.index);
    };
    std::vector<std::string> keys{key(time_col), key(agent_col), key(x_col), key(y_col)};
    std::sort(keys.begin(), keys.end());
    if (std::adjacent_find(keys.begin(), keys.end()) != keys.end())
        throw std::invalid_argument("SchemaConfig: mapped columns must be distinct");
}

SchemaConfig SchemaConfig::from_json(const nlohmann::json& j) {
    SchemaConfig s;
    auto read_col = [&](const char* field, ColumnRef& ref) {
        if (!j.contains(field)) return;
        const auto& v = j.at(field);
        if (v.is_number_integer()) {
            ref.index = v.get<int>();
            ref.name.clear();
        } else if (v.is_string()) {
            ref.index = -1;
            ref.name = v.get<std::string>();
        } else {
            throw std::invalid_argument(std::string("SchemaConfig: '") + field +
                                        "' must be a column index or name");
        }
    };
    read_col("time", s.time_col);
    read_col("agent", s.agent_col);
    read_col("x", s.x_col);
    read_col("y", s.y_col);
    s.time_scale = j.value("time_scale", 1.0);
    s.position_scale = j.value("position_scale", 1.0);
    if (j.contains("delimiter")) {
        const auto d = j.at("delimiter").get<std::string>();
        if (d.size() != 1)
            throw std::invalid_argument("SchemaConfig: delimiter must be one character");
        s.delimiter = d[0];
    }
    s.has_header = j.value("has_header", false);
    s.validate();
    return s;
}

TrackSet load_tracks(const std::string& path, const SchemaConfig& schema) {
    schema.validate();
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_tracks: cannot open '" + path + "'");

    std::string line;
    long line_no = 0;
    std::vector<std::string> header;
    if (schema.has_header) {
        if (!std::getline(in, line))
            throw std::runtime_error("load_tracks: empty file '" + path + "'");
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        header = split_line(line, schema.delimiter);
    }
    const int ti = resolve_column(schema.time_col, header, "time");
    const int ai = resolve_column(schema.agent_col, header, "agent");
    const int xi = resolve_column(schema.x_col, header, "x");
    const int yi = resolve_column(schema.y_col, header, "y");
    const int need = std::max({ti, ai, xi, yi}) + 1;

    std::map<std::string, std::vector<TrackSample>> by_agent;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto fields = split_line(line, schema.delimiter);
        if (static_cast<int>(fields.size()) < need)
            throw std::runtime_error("load_tracks: malformed row at line " +
                                     std::to_string(line_no) + " (expected >= " +
                                     std::to_string(need) + " fields)");
        TrackSample s;
        double raw_t, raw_x, raw_y;
        if (!parse_double(fields[ti], raw_t) || !parse_double(fields[xi], raw_x) ||
            !parse_double(fields[yi], raw_y))
            throw std::runtime_error("load_tracks: malformed row at line " +
                                     std::to_string(line_no));
        s.t = raw_t * schema.time_scale;
        s.x = raw_x * schema.position_scale;
        s.y = raw_y * schema.position_scale;
        if (!std::isfinite(s.t) || !std::isfinite(s.x) || !std::isfinite(s.y))
            throw std::runtime_error("load_tracks: non-finite value at line " +
                                     std::to_string(line_no));
        by_agent[fields[ai]].push_back(s);
    }
    if (by_agent.empty()) throw std::runtime_error("load_tracks: no data rows in '" + path + "'");

    TrackSet out;
    for (auto& [agent, samples] : by_agent) {
        std::stable_sort(samples.begin(), samples.end(),
                         [](const TrackSample& a, const TrackSample& b) { return a.t < b.t; });
        for (std::size_t i = 1; i < samples.size(); ++i)
            if (samples[i].t == samples[i - 1].t)
                throw std::runtime_error("load_tracks: duplicate timestamp " +
                                         std::to_string(samples[i].t) + " for agent '" +
                                         agent + "'");
        Track t;
        t.agent_id = agent;
        t.samples = std::move(samples);
        out.tracks.push_back(std::move(t));
    }
    return out;
}

std::vector<Track> split_on_gaps(const Track& track, double max_gap_seconds) {
    if (max_gap_seconds <= 0.0)
        throw std::invalid_argument("split_on_gaps: max_gap_seconds must be > 0");
    std::vector<Track> parts;
    std::size_t start = 0;
    auto flush = [&](std::size_t end) {
        if (end <= start) return;
        Track part;
        part.agent_id = parts.empty() && end == track.size()
                            ? track.agent_id
                            : track.agent_id + "#" + std::to_string(parts.size());
        part.samples.assign(track.samples.begin() + start, track.samples.begin() + end);
        parts.push_back(std::move(part));
    };
    for (std::size_t i = 1; i < track.size(); ++i) {
        if (track.samples[i].t - track.samples[i - 1].t > max_gap_seconds) {
            flush(i);
            start = i;
        }
    }
    flush(track.size());
    return parts;
}

Track resample_track(const Track& track, double target_dt) {
    if (target_dt <= 0.0) throw std::invalid_argument("resample_track: target_dt must be > 0");
    if (track.size() < 2)
        throw std::invalid_argument("resample_track: track needs at least 2 samples");
    if (track.duration() < target_dt)
        throw std::invalid_argument("resample_track: track shorter than target_dt");
    for (std::size_t i = 1; i < track.size(); ++i)
        if (track.samples[i].t <= track.samples[i - 1].t)
            throw std::invalid_argument("resample_track: sample times not strictly increasing");

    const double t0 = track.samples.front().t;
    const double t_end = track.samples.back().t;
    // Number of grid points inside [t0, t_end]; tolerate fp slop at the end.
    auto count = static_cast<std::size_t>(
        std::floor((t_end - t0) / target_dt * (1.0 + 1e-12) + 1e-9));
    while (t0 + static_cast<double>(count) * target_dt > t_end + 1e-9 * target_dt) --count;
    const std::size_t m = count + 1;

    Track out;
    out.agent_id = track.agent_id;
    out.samples.resize(m);
    std::size_t k = 0;  // bracketing raw interval [k, k+1]
    for (std::size_t i = 0; i < m; ++i) {
        const double t = t0 + static_cast<double>(i) * target_dt;
        const double tc = std::min(t, t_end);
        while (k + 2 < track.size() && track.samples[k + 1].t < tc) ++k;
        out.samples[i].t = t;
        out.samples[i].x = lerp_sample(track.samples[k], track.samples[k + 1], tc, true);
        out.samples[i].y = lerp_sample(track.samples[k], track.samples[k + 1], tc, false);
    }
    return out;
}

Track differentiate(const Track& track, double v_eps) {
    const std::size_t n = track.size();
    if (n < 2) throw std::invalid_argument("differentiate: track needs at least 2 samples");
    const double dt = (track.samples.back().t - track.samples.front().t) /
                      static_cast<double>(n - 1);
    if (dt <= 0.0) throw std::invalid_argument("differentiate: non-increasing sample times");
    for (std::size_t i = 1; i < n; ++i) {
        const double step = track.samples[i].t - track.samples[i - 1].t;
        if (std::abs(step - dt) > 1e-6 * std::max(dt, 1.0))
            throw std::invalid_argument("differentiate: non-uniform sample grid");
    }

    Track out = track;
    out.vx.resize(n);
    out.vy.resize(n);
    out.speed.resize(n);
    out.heading.resize(n);
    const auto& s = track.samples;
    for (std::size_t i = 0; i < n; ++i) {
        double dx, dy;
        if (i == 0) {
            dx = (s[1].x - s[0].x) / dt;
            dy = (s[1].y - s[0].y) / dt;
        } else if (i + 1 == n) {
            dx = (s[n - 1].x - s[n - 2].x) / dt;
            dy = (s[n - 1].y - s[n - 2].y) / dt;
        } else {
            dx = (s[i + 1].x - s[i - 1].x) / (2.0 * dt);
            dy = (s[i + 1].y - s[i - 1].y) / (2.0 * dt);
        }
        out.vx[i] = dx;
        out.vy[i] = dy;
        out.speed[i] = std::hypot(dx, dy);
    }
    // Heading with carry-forward below the standstill threshold. A leading
    // stationary run is backfilled from the first moving sample.
    double carried = 0.0;
    bool have_carry = false;
    for (std::size_t i = 0; i < n; ++i) {
        if (out.speed[i] >= v_eps) {
            carried = std::atan2(out.vy[i], out.vx[i]);
            have_carry = true;
            break;
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (out.speed[i] >= v_eps) carried = std::atan2(out.vy[i], out.vx[i]);
        out.heading[i] = have_carry ? carried : 0.0;
    }
    return out;
}

TimeSeriesDataset to_dataset(
    const std::vector<std::pair<std::string, std::vector<double>>>& columns, double dt) {
    if (columns.empty()) throw std::invalid_argument("to_dataset: no columns");
    const std::size_t T = columns.front().second.size();
    if (T < 2) throw std::invalid_argument("to_dataset: need at least 2 time steps");
    for (const auto& [name, col] : columns) {
        if (col.size() != T)
            throw std::invalid_argument("to_dataset: length mismatch in column '" + name + "'");
    }
    for (std::size_t i = 0; i < columns.size(); ++i)
        for (std::size_t j = i + 1; j < columns.size(); ++j)
            if (columns[i].first == columns[j].first)
                throw std::invalid_argument("to_dataset: duplicate column name '" +
                                            columns[i].first + "'");

    TimeSeriesDataset ds;
    ds.dt = dt;
    ds.values.resize(static_cast<Eigen::Index>(T), static_cast<Eigen::Index>(columns.size()));
    for (std::size_t c = 0; c < columns.size(); ++c) {
        const auto& [name, col] = columns[c];
        for (std::size_t r = 0; r < T; ++r) {
            if (!std::isfinite(col[r]))
                throw std::invalid_argument("to_dataset: non-finite value in column '" + name +
                                            "'");
            ds.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = col[r];
        }
        if (ds.values.col(static_cast<Eigen::Index>(c)).minCoeff() ==
            ds.values.col(static_cast<Eigen::Index>(c)).maxCoeff())
            throw std::invalid_argument("to_dataset: zero-variance column '" + name + "'");
        ds.variable_names.push_back(name);
    }
    return ds;
}

}  // namespace hsi
