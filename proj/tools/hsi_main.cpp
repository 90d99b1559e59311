#include "hsi/pipeline.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
    CLI::App app{
        "hsi: lagged causal discovery and GP forecasting for 2-D trajectory data"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 0;
    bool seed_set = false;
    bool verbose = false;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "pipeline config JSON")->required();
        sub->add_option("--out", out_dir, "output directory override");
        sub->add_option("--seed", seed, "seed override (simulator and discovery)")
            ->each([&](const std::string&) { seed_set = true; });
        sub->add_flag("--verbose", verbose, "chatty progress output");
    };

    CLI::App* simulate = app.add_subcommand("simulate", "generate synthetic scenario data");
    CLI::App* ingest = app.add_subcommand("ingest", "extract features from a trajectory log");
    CLI::App* discover = app.add_subcommand("discover", "run lagged causal discovery");
    CLI::App* predict = app.add_subcommand("predict", "benchmark causal vs full GP forecasts");
    CLI::App* pipeline = app.add_subcommand("pipeline", "run every stage in order");
    for (CLI::App* sub : {simulate, ingest, discover, predict, pipeline}) add_common(sub);

    CLI11_PARSE(app, argc, argv);

    try {
        hsi::PipelineConfig cfg = hsi::PipelineConfig::load(config_path);
        if (!out_dir.empty()) cfg.out_dir = out_dir;
        if (seed_set) cfg.override_seed(seed);
        cfg.verbose = verbose;

        if (app.got_subcommand(simulate)) return hsi::cmd_simulate(cfg);
        if (app.got_subcommand(ingest)) return hsi::cmd_ingest(cfg);
        if (app.got_subcommand(discover)) return hsi::cmd_discover(cfg);
        if (app.got_subcommand(predict)) return hsi::cmd_predict(cfg);
        return hsi::cmd_pipeline(cfg);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
