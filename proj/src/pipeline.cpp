#include "hsi/pipeline.hpp"

#include "hsi/graph_io.hpp"
#include "hsi/velocity_obstacle.hpp"

#include <nlohmann/json.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

namespace hsi {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_text(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    out << content;
}

std::string iso_timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

Vec2 vec2_from_json(const json& j, const char* what) {
    if (!j.is_array() || j.size() != 2)
        throw std::invalid_argument(std::string(what) + " must be an [x, y] pair");
    return Vec2(j[0].get<double>(), j[1].get<double>());
}

GoalSet goals_from_json(const json& j, double arrival_radius) {
    GoalSet g;
    g.arrival_radius = arrival_radius;
    for (const auto& item : j) g.goals.push_back(vec2_from_json(item, "goal"));
    return g;
}

json goals_to_json(const GoalSet& g) {
    json arr = json::array();
    for (const auto& p : g.goals) arr.push_back({p.x(), p.y()});
    return arr;
}

void write_tracks_csv(const fs::path& path, const TrackSet& tracks) {
    std::string out = "t,agent_id,x,y\n";
    for (const auto& track : tracks.tracks)
        for (const auto& s : track.samples)
            out += fmt17(s.t) + "," + track.agent_id + "," + fmt17(s.x) + "," + fmt17(s.y) +
                   "\n";
    write_text(path, out);
}

void write_features_csv(const fs::path& path, const TimeSeriesDataset& ds) {
    std::string out = "t";
    for (const auto& name : ds.variable_names) out += "," + name;
    out += "\n";
    for (Eigen::Index r = 0; r < ds.rows(); ++r) {
        out += fmt17(static_cast<double>(r) * ds.dt);
        for (Eigen::Index c = 0; c < ds.cols(); ++c) out += "," + fmt17(ds.values(r, c));
        out += "\n";
    }
    write_text(path, out);
}

TimeSeriesDataset read_features_csv(const fs::path& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("features file '" + path.string() +
                                 "' not found; run simulate or ingest first");
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty features file");
    if (!line.empty() && line.back() == '\r') line.pop_back();

    std::vector<std::string> names;
    {
        std::stringstream ss(line);
        std::string field;
        while (std::getline(ss, field, ',')) names.push_back(field);
    }
    if (names.size() < 2 || names[0] != "t")
        throw std::runtime_error("features file must start with a 't' column");
    names.erase(names.begin());

    std::vector<double> times;
    std::vector<std::vector<double>> cols(names.size());
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string field;
        std::vector<double> row;
        while (std::getline(ss, field, ',')) row.push_back(std::stod(field));
        if (row.size() != names.size() + 1)
            throw std::runtime_error("features file: ragged row");
        times.push_back(row[0]);
        for (std::size_t c = 0; c < names.size(); ++c) cols[c].push_back(row[c + 1]);
    }
    if (times.size() < 2) throw std::runtime_error("features file: too few rows");

    std::vector<std::pair<std::string, std::vector<double>>> columns;
    for (std::size_t c = 0; c < names.size(); ++c) columns.emplace_back(names[c], cols[c]);
    // dt from the first spacing; subsampled files keep the original grid dt
    // only nominally (kept rows are a subsequence).
    return to_dataset(columns, times[1] - times[0]);
}

void write_kept_csv(const fs::path& path, const std::vector<int>& kept) {
    std::string out = "kept_index\n";
    for (int k : kept) out += std::to_string(k) + "\n";
    write_text(path, out);
}

const char* scenario_name(Scenario s) {
    return s == Scenario::HumanGoal ? "human_goal" : "moving_obstacles";
}

const char* test_name(IndependenceTest t) {
    return t == IndependenceTest::ParCorr ? "parcorr" : "gpdc";
}

// ---------------------------------------------------------------------------
// Ingest: user dataset -> scenario feature series
// ---------------------------------------------------------------------------

struct DerivedTrack {
    Track track;  // resampled + differentiated
};

/// Pick the segment to analyse: the requested agent's longest gap-free
/// segment, or the longest overall.
Track select_segment(const TrackSet& tracks, const DatasetInput& input, double dt) {
    const double max_gap = 5.0 * dt;
    Track best;
    double best_duration = -1.0;
    for (const auto& track : tracks.tracks) {
        if (!input.agent_id.empty() && track.agent_id != input.agent_id) continue;
        for (const auto& part : split_on_gaps(track, max_gap)) {
            if (part.size() >= 2 && part.duration() > best_duration) {
                best_duration = part.duration();
                best = part;
            }
        }
    }
    if (best_duration < 0.0)
        throw std::runtime_error(input.agent_id.empty()
                                     ? std::string("ingest: no usable track in dataset")
                                     : "ingest: agent '" + input.agent_id + "' not found");
    return best;
}

/// Risk series for the selected agent against all other tracks, sampled on
/// the selected track's grid. Other agents contribute while their segments
/// cover the instant (nearest resampled sample).
std::vector<double> adapter_risk_series(const Track& selected, const TrackSet& all,
                                        const DatasetInput& input, double dt) {
    struct Segment {
        Track derived;
        double t0, t1;
    };
    std::vector<Segment> segments;
    const double max_gap = 5.0 * dt;
    for (const auto& track : all.tracks) {
        if (track.agent_id == selected.agent_id) continue;
        for (const auto& part : split_on_gaps(track, max_gap)) {
            if (part.size() < 2 || part.duration() < dt) continue;
            Segment seg;
            seg.derived = differentiate(resample_track(part, dt));
            seg.t0 = seg.derived.samples.front().t;
            seg.t1 = seg.derived.samples.back().t;
            segments.push_back(std::move(seg));
        }
    }

    std::vector<double> out(selected.size());
    for (std::size_t i = 0; i < selected.size(); ++i) {
        const double t = selected.samples[i].t;
        std::vector<AgentDisc> obstacles;
        for (const auto& seg : segments) {
            if (t < seg.t0 - dt / 2 || t > seg.t1 + dt / 2) continue;
            const auto idx = static_cast<std::size_t>(std::clamp(
                std::llround((t - seg.t0) / dt), 0LL,
                static_cast<long long>(seg.derived.size()) - 1));
            obstacles.push_back({Vec2(seg.derived.samples[idx].x, seg.derived.samples[idx].y),
                                 Vec2(seg.derived.vx[idx], seg.derived.vy[idx]),
                                 input.obstacle_radius});
        }
        const AgentDisc agent{Vec2(selected.samples[i].x, selected.samples[i].y),
                              Vec2(selected.vx[i], selected.vy[i]), input.obstacle_radius};
        out[i] = risk(agent, obstacles).risk;
    }
    return out;
}

TimeSeriesDataset ingest_features(const PipelineConfig& cfg) {
    const auto& input = *cfg.dataset;
    const TrackSet raw = load_tracks(input.path, input.schema);
    const Track selected =
        differentiate(resample_track(select_segment(raw, input, cfg.resample_dt),
                                     cfg.resample_dt));
    const GoalAssignment assignment = assign_goals(selected, input.goals);
    const ScenarioSeries series = goal_features(selected, assignment, input.goals);

    if (cfg.scenario == Scenario::HumanGoal)
        return to_dataset(
            {{"theta_g", series.theta_g}, {"d_g", series.d_g}, {"v", series.v}},
            cfg.resample_dt);

    const std::vector<double> risk_series =
        adapter_risk_series(selected, raw, input, cfg.resample_dt);
    return to_dataset({{"d_g", series.d_g}, {"v", series.v}, {"risk", risk_series}},
                      cfg.resample_dt);
}

// ---------------------------------------------------------------------------
// Stage runners (shared by the subcommands and cmd_pipeline)
// ---------------------------------------------------------------------------

struct StageRecord {
    std::string name;
    std::vector<std::string> inputs;
    std::vector<std::string> outputs;
};

/// Produce features.csv (and simulator artifacts / subsample audit trail).
std::vector<StageRecord> run_input_stages(const PipelineConfig& cfg) {
    const fs::path dir(cfg.out_dir);
    fs::create_directories(dir);
    std::vector<StageRecord> stages;

    TimeSeriesDataset features;
    if (cfg.use_simulator) {
        const SimulationResult sim = cfg.scenario == Scenario::HumanGoal
                                         ? simulate_human_goal(cfg.sim_human)
                                         : simulate_moving_obstacles(cfg.sim_obstacles);
        write_tracks_csv(dir / "tracks.csv", sim.tracks);
        write_text(dir / "ground_truth.json", graph_to_json(sim.ground_truth).dump(2) + "\n");
        stages.push_back({"simulate", {}, {"tracks.csv", "ground_truth.json"}});
        features = sim.features;
    } else {
        features = ingest_features(cfg);
        stages.push_back({"ingest", {cfg.dataset->path}, {}});
    }

    write_features_csv(dir / "features.csv", features);
    stages.push_back({"features",
                      {cfg.use_simulator ? "simulate" : "ingest"},
                      {"features.csv"}});

    if (cfg.subsample) {
        const SubsampleResult sub = entropy_subsample(features, *cfg.subsample);
        write_features_csv(dir / "features_kept.csv", sub.dataset);
        write_kept_csv(dir / "kept_indices.csv", sub.kept);
        stages.push_back(
            {"subsample", {"features.csv"}, {"features_kept.csv", "kept_indices.csv"}});
    }
    return stages;
}

std::string features_file(const PipelineConfig& cfg) {
    return cfg.subsample ? "features_kept.csv" : "features.csv";
}

StageRecord run_discover_stage(const PipelineConfig& cfg) {
    const fs::path dir(cfg.out_dir);
    fs::create_directories(dir);
    const TimeSeriesDataset ds = read_features_csv(dir / features_file(cfg));
    const CausalGraph graph = run_pcmci(ds, cfg.discovery);

    json j = graph_to_json(graph);
    j["config"] = {{"alpha", cfg.discovery.alpha},
                   {"alpha_pc", cfg.discovery.alpha_pc},
                   {"tau_max", cfg.discovery.tau_max},
                   {"test", test_name(cfg.discovery.test)},
                   {"seed", cfg.discovery.seed}};
    write_text(dir / "graph.json", j.dump(2) + "\n");
    write_text(dir / "graph.dot", graph_to_dot(graph));
    std::cout << "discover: test=" << test_name(cfg.discovery.test)
              << " alpha=" << cfg.discovery.alpha << " tau_max=" << cfg.discovery.tau_max
              << " seed=" << cfg.discovery.seed << " edges=" << graph.edges.size() << "\n";
    return {"discover", {features_file(cfg)}, {"graph.json", "graph.dot"}};
}

StageRecord run_predict_stage(const PipelineConfig& cfg) {
    const fs::path dir(cfg.out_dir);
    const fs::path graph_path = dir / "graph.json";
    if (!fs::exists(graph_path))
        throw std::runtime_error("graph.json not found in '" + cfg.out_dir +
                                 "'; run discover first");
    std::ifstream gin(graph_path);
    json gj;
    gin >> gj;
    const CausalGraph graph = graph_from_json(gj);
    const TimeSeriesDataset ds = read_features_csv(dir / features_file(cfg));

    const PredictionReport report = benchmark(ds, graph, cfg.bench);

    std::string csv = "variable,mode,nmae\n";
    for (const auto& vb : report.per_variable) {
        csv += vb.variable + ",causal," + fmt17(vb.nmae_causal) + "\n";
        csv += vb.variable + ",full," + fmt17(vb.nmae_full) + "\n";
    }
    csv += "mean,causal," + fmt17(report.mean_nmae_causal) + "\n";
    csv += "mean,full," + fmt17(report.mean_nmae_full) + "\n";
    write_text(dir / "report.csv", csv);

    json jr;
    jr["mean_nmae"] = {{"causal", report.mean_nmae_causal}, {"full", report.mean_nmae_full}};
    jr["train_rows"] = report.train_rows;
    jr["test_rows"] = report.test_rows;
    jr["variables"] = json::array();
    for (const auto& vb : report.per_variable) {
        json parents = json::array();
        for (const auto& p : vb.parents)
            parents.push_back({{"var", graph.variables.at(static_cast<std::size_t>(p.var))},
                               {"lag", p.lag}});
        jr["variables"].push_back({{"name", vb.variable},
                                   {"nmae_causal", vb.nmae_causal},
                                   {"nmae_full", vb.nmae_full},
                                   {"parents", parents},
                                   {"used_fallback", vb.used_fallback}});
    }
    write_text(dir / "report.json", jr.dump(2) + "\n");

    std::string pred = "t,variable,actual,causal,full\n";
    for (const auto& ps : report.predictions)
        for (std::size_t i = 0; i < ps.t.size(); ++i)
            pred += fmt17(ps.t[i]) + "," + ps.variable + "," + fmt17(ps.actual[i]) + "," +
                    fmt17(ps.causal[i]) + "," + fmt17(ps.full[i]) + "\n";
    write_text(dir / "predictions.csv", pred);

    std::cout << "predict: mean_nmae causal=" << report.mean_nmae_causal
              << " full=" << report.mean_nmae_full << "\n";
    return {"predict",
            {features_file(cfg), "graph.json"},
            {"report.csv", "report.json", "predictions.csv"}};
}

int guarded(const char* what, const std::function<int()>& fn) {
    try {
        return fn();
    } catch (const std::exception& e) {
        std::cerr << what << ": error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace

// ---------------------------------------------------------------------------
// Config parsing
// ---------------------------------------------------------------------------

PipelineConfig PipelineConfig::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config '" + path + "'");
    json j;
    in >> j;
    return from_json(j);
}

PipelineConfig PipelineConfig::from_json(const json& j) {
    PipelineConfig cfg;

    const std::string scenario = j.value("scenario", "human_goal");
    if (scenario == "human_goal")
        cfg.scenario = Scenario::HumanGoal;
    else if (scenario == "moving_obstacles")
        cfg.scenario = Scenario::MovingObstacles;
    else
        throw std::invalid_argument("config: unknown scenario '" + scenario + "'");

    if (!j.contains("input")) throw std::invalid_argument("config: missing 'input'");
    const json& input = j.at("input");
    const bool has_sim = input.contains("simulator");
    const bool has_data = input.contains("dataset");
    if (has_sim == has_data)
        throw std::invalid_argument(
            "config: input must contain exactly one of 'simulator' or 'dataset'");

    cfg.resample_dt = j.value("resample", json::object()).value("dt", 0.1);
    if (cfg.resample_dt <= 0.0)
        throw std::invalid_argument("config: resample dt must be positive");

    const auto seed = j.value("seed", std::uint64_t{1});

    if (has_sim) {
        cfg.use_simulator = true;
        const json& sj = input.at("simulator");
        HumanGoalSimConfig base = HumanGoalSimConfig::defaults();
        if (sj.contains("goals"))
            base.goals = goals_from_json(sj.at("goals"),
                                         sj.value("arrival_radius", base.goals.arrival_radius));
        else
            base.goals.arrival_radius = sj.value("arrival_radius", base.goals.arrival_radius);
        base.dt = sj.value("dt", base.dt);
        base.steps = sj.value("steps", base.steps);
        if (base.steps <= 0) throw std::invalid_argument("config: steps must be positive");
        base.gain = sj.value("gain", base.gain);
        base.v_max = sj.value("v_max", base.v_max);
        base.omega_max = sj.value("omega_max", base.omega_max);
        base.noise_v = sj.value("noise_v", base.noise_v);
        base.noise_heading = sj.value("noise_heading", base.noise_heading);
        if (sj.contains("start")) base.start = vec2_from_json(sj.at("start"), "start");
        base.start_heading = sj.value("start_heading", base.start_heading);
        base.seed = sj.value("seed", seed);

        cfg.sim_human = base;
        cfg.sim_obstacles = MovingObstacleSimConfig::defaults();
        cfg.sim_obstacles.base = base;
        if (sj.contains("obstacles")) {
            const json& oj = sj.at("obstacles");
            cfg.sim_obstacles.obstacle_speed =
                oj.value("speed", cfg.sim_obstacles.obstacle_speed);
            cfg.sim_obstacles.beta = oj.value("beta", cfg.sim_obstacles.beta);
            cfg.sim_obstacles.agent_radius =
                oj.value("radius", cfg.sim_obstacles.agent_radius);
            if (oj.contains("routes")) {
                cfg.sim_obstacles.obstacle_goals.clear();
                cfg.sim_obstacles.obstacle_starts.clear();
                for (const auto& rj : oj.at("routes")) {
                    cfg.sim_obstacles.obstacle_goals.push_back(goals_from_json(
                        rj.at("goals"), rj.value("arrival_radius", 0.4)));
                    cfg.sim_obstacles.obstacle_starts.push_back(
                        vec2_from_json(rj.at("start"), "obstacle start"));
                }
            }
        }
    } else {
        cfg.use_simulator = false;
        const json& dj = input.at("dataset");
        DatasetInput d;
        d.path = dj.at("path").get<std::string>();
        d.schema = dj.contains("schema") ? SchemaConfig::from_json(dj.at("schema"))
                                         : SchemaConfig{};
        if (!dj.contains("goals"))
            throw std::invalid_argument("config: dataset input requires 'goals'");
        d.goals = goals_from_json(dj.at("goals"), dj.value("arrival_radius", 0.5));
        d.agent_id = dj.value("agent_id", std::string());
        d.obstacle_radius = dj.value("obstacle_radius", 0.3);
        cfg.dataset = std::move(d);
    }

    if (j.contains("subsample")) {
        const json& sj = j.at("subsample");
        if (sj.value("enabled", false)) {
            SubsampleConfig sc;
            sc.bins = sj.value("bins", sc.bins);
            sc.base_window = sj.value("base_window", sc.base_window);
            sc.max_window = sj.value("max_window", sc.max_window);
            sc.entropy_threshold = sj.value("entropy_threshold", sc.entropy_threshold);
            sc.validate();
            cfg.subsample = sc;
        }
    }

    const json dj = j.value("discovery", json::object());
    cfg.discovery.tau_max = dj.value("tau_max", 1);
    cfg.discovery.alpha_pc = dj.value("alpha_pc", 0.2);
    cfg.discovery.alpha = dj.value("alpha", 0.05);
    const std::string test = dj.value("test", "parcorr");
    if (test == "parcorr")
        cfg.discovery.test = IndependenceTest::ParCorr;
    else if (test == "gpdc")
        cfg.discovery.test = IndependenceTest::Gpdc;
    else
        throw std::invalid_argument("config: unknown test '" + test + "'");
    cfg.discovery.permutations = dj.value("permutations", 500);
    cfg.discovery.max_conds = dj.value("max_conds", 3);
    cfg.discovery.seed = dj.value("seed", seed);
    cfg.discovery.validate();

    const json kj = j.value("kernel", json::object());
    cfg.bench.kernel.lengthscales =
        Eigen::VectorXd::Constant(1, kj.value("lengthscale", 1.0));
    cfg.bench.kernel.signal_variance = kj.value("signal_variance", 1.0);
    cfg.bench.kernel.noise_variance = kj.value("noise_variance", 1e-2);
    cfg.bench.kernel.jitter = kj.value("jitter", 1e-8);
    cfg.bench.kernel.optimize = kj.value("optimize", true);
    cfg.bench.max_train_rows = kj.value("max_train_rows", 512);
    cfg.bench.max_search_rows = kj.value("max_search_rows", 256);
    cfg.bench.tau_max = cfg.discovery.tau_max;
    cfg.bench.split = j.value("split", 0.8);

    cfg.out_dir = j.value("out_dir", "out");
    cfg.validate();
    return cfg;
}

void PipelineConfig::validate() const {
    if (use_simulator) {
        if (scenario == Scenario::HumanGoal)
            sim_human.validate();
        else
            sim_obstacles.validate();
    } else if (!dataset) {
        throw std::invalid_argument("config: dataset input missing");
    } else {
        dataset->schema.validate();
        dataset->goals.validate();
    }
    discovery.validate();
    bench.validate();
    if (subsample) subsample->validate();
}

nlohmann::json PipelineConfig::semantic_json() const {
    json j;
    j["scenario"] = scenario_name(scenario);
    if (use_simulator) {
        const HumanGoalSimConfig& b =
            scenario == Scenario::HumanGoal ? sim_human : sim_obstacles.base;
        json sj{{"goals", goals_to_json(b.goals)},
                {"arrival_radius", b.goals.arrival_radius},
                {"dt", b.dt},
                {"steps", b.steps},
                {"gain", b.gain},
                {"v_max", b.v_max},
                {"omega_max", b.omega_max},
                {"noise_v", b.noise_v},
                {"noise_heading", b.noise_heading},
                {"start", {b.start.x(), b.start.y()}},
                {"start_heading", b.start_heading},
                {"seed", b.seed}};
        if (scenario == Scenario::MovingObstacles) {
            json routes = json::array();
            for (std::size_t i = 0; i < sim_obstacles.obstacle_goals.size(); ++i)
                routes.push_back(
                    {{"goals", goals_to_json(sim_obstacles.obstacle_goals[i])},
                     {"start",
                      {sim_obstacles.obstacle_starts[i].x(),
                       sim_obstacles.obstacle_starts[i].y()}}});
            sj["obstacles"] = {{"speed", sim_obstacles.obstacle_speed},
                               {"beta", sim_obstacles.beta},
                               {"radius", sim_obstacles.agent_radius},
                               {"routes", routes}};
        }
        j["input"] = {{"simulator", sj}};
    } else {
        j["input"] = {{"dataset",
                       {{"path", dataset->path},
                        {"goals", goals_to_json(dataset->goals)},
                        {"arrival_radius", dataset->goals.arrival_radius},
                        {"agent_id", dataset->agent_id},
                        {"obstacle_radius", dataset->obstacle_radius}}}};
    }
    j["resample_dt"] = resample_dt;
    if (subsample)
        j["subsample"] = {{"bins", subsample->bins},
                          {"base_window", subsample->base_window},
                          {"max_window", subsample->max_window},
                          {"entropy_threshold", subsample->entropy_threshold}};
    j["discovery"] = {{"tau_max", discovery.tau_max},
                      {"alpha_pc", discovery.alpha_pc},
                      {"alpha", discovery.alpha},
                      {"test", test_name(discovery.test)},
                      {"permutations", discovery.permutations},
                      {"max_conds", discovery.max_conds},
                      {"seed", discovery.seed}};
    j["kernel"] = {{"lengthscale", bench.kernel.lengthscales[0]},
                   {"signal_variance", bench.kernel.signal_variance},
                   {"noise_variance", bench.kernel.noise_variance},
                   {"jitter", bench.kernel.jitter},
                   {"optimize", bench.kernel.optimize},
                   {"max_train_rows", bench.max_train_rows},
                   {"max_search_rows", bench.max_search_rows}};
    j["split"] = bench.split;
    return j;
}

std::string PipelineConfig::config_hash() const {
    const std::string s = semantic_json().dump();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

void PipelineConfig::override_seed(std::uint64_t seed) {
    sim_human.seed = seed;
    sim_obstacles.base.seed = seed;
    discovery.seed = seed;
}

// ---------------------------------------------------------------------------
// Subcommands
// ---------------------------------------------------------------------------

int cmd_simulate(const PipelineConfig& cfg) {
    return guarded("simulate", [&] {
        if (!cfg.use_simulator)
            throw std::invalid_argument("simulate requires a simulator input section");
        run_input_stages(cfg);
        return 0;
    });
}

int cmd_ingest(const PipelineConfig& cfg) {
    return guarded("ingest", [&] {
        if (cfg.use_simulator)
            throw std::invalid_argument("ingest requires a dataset input section");
        run_input_stages(cfg);
        return 0;
    });
}

int cmd_discover(const PipelineConfig& cfg) {
    return guarded("discover", [&] {
        run_discover_stage(cfg);
        return 0;
    });
}

int cmd_predict(const PipelineConfig& cfg) {
    return guarded("predict", [&] {
        run_predict_stage(cfg);
        return 0;
    });
}

int cmd_pipeline(const PipelineConfig& cfg) {
    return guarded("pipeline", [&] {
        std::vector<StageRecord> stages = run_input_stages(cfg);
        stages.push_back(run_discover_stage(cfg));
        stages.push_back(run_predict_stage(cfg));

        json manifest;
        manifest["created"] = iso_timestamp();
        manifest["config_hash"] = cfg.config_hash();
        manifest["config"] = cfg.semantic_json();
        manifest["stages"] = json::array();
        for (const auto& s : stages)
            manifest["stages"].push_back(
                {{"name", s.name}, {"inputs", s.inputs}, {"outputs", s.outputs}});
        write_text(fs::path(cfg.out_dir) / "manifest.json", manifest.dump(2) + "\n");
        return 0;
    });
}

}  // namespace hsi
