#pragma once

#include "hsi/features.hpp"
#include "hsi/forecast.hpp"
#include "hsi/pcmci.hpp"
#include "hsi/simulator.hpp"

#include <nlohmann/json_fwd.hpp>

#include <optional>
#include <string>

namespace hsi {

/// User-supplied trajectory log plus everything needed to turn it into the
/// scenario variables.
struct DatasetInput {
    std::string path;
    SchemaConfig schema;
    GoalSet goals;
    std::string agent_id;          // empty: pick the longest track segment
    double obstacle_radius = 0.3;  // disc radius for the risk adapter
};

enum class Scenario { HumanGoal, MovingObstacles };

/// One JSON config drives every stage: input (simulator or dataset),
/// resampling, optional subsampling, discovery, and prediction.
struct PipelineConfig {
    Scenario scenario = Scenario::HumanGoal;
    bool use_simulator = true;
    HumanGoalSimConfig sim_human = HumanGoalSimConfig::defaults();
    MovingObstacleSimConfig sim_obstacles = MovingObstacleSimConfig::defaults();
    std::optional<DatasetInput> dataset;
    double resample_dt = 0.1;
    std::optional<SubsampleConfig> subsample;  // nullopt: subsampling off
    DiscoveryConfig discovery;
    BenchmarkConfig bench;
    std::string out_dir = "out";
    bool verbose = false;

    static PipelineConfig load(const std::string& path);
    static PipelineConfig from_json(const nlohmann::json& j);

    /// Content that determines the outputs (everything but out_dir and
    /// verbosity), in canonical key order.
    nlohmann::json semantic_json() const;

    /// FNV-1a hash of the canonical semantic config.
    std::string config_hash() const;

    void override_seed(std::uint64_t seed);
    void validate() const;
};

// Subcommands. Each returns a process exit status (0 on success) and writes
// its artifacts under cfg.out_dir.
int cmd_simulate(const PipelineConfig& cfg);
int cmd_ingest(const PipelineConfig& cfg);
int cmd_discover(const PipelineConfig& cfg);
int cmd_predict(const PipelineConfig& cfg);
int cmd_pipeline(const PipelineConfig& cfg);

}  // namespace hsi
