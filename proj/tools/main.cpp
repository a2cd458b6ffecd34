// Command-line surface for the crypto asset-pricing engine: synthesize a
// dataset, build the tradable universe and weekly panel, then run the
// diagnostics (sorts, signal regressions, mutual information, PCA,
// Fama-MacBeth, event studies). Exit codes: 0 success, 1 runtime failure,
// 2 usage/config error.
#include <CLI11.hpp>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "cryptofactor/pipeline.hpp"

using namespace cryptofactor;

namespace {

struct CommonFlags {
    std::string config_path;
    std::string out_dir;
    std::string from, to;
    std::string data_dir;
    long seed = -1;
    long threads = -1;
    bool dry_run = false;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_option("--config", flags.config_path, "key=value configuration file");
    cmd->add_option("--seed", flags.seed, "root random seed (overrides config)");
    cmd->add_option("--out", flags.out_dir, "output directory (overrides config)");
    cmd->add_option("--from", flags.from, "study start date YYYY-MM-DD");
    cmd->add_option("--to", flags.to, "study end date YYYY-MM-DD");
    cmd->add_option("--data", flags.data_dir, "input data directory (overrides config)");
    cmd->add_option("--threads", flags.threads, "worker threads (overrides config)");
    cmd->add_flag("--dry-run", flags.dry_run, "validate configuration and exit");
}

RunConfig make_config(const CommonFlags& flags) {
    RunConfig cfg;
    if (!flags.config_path.empty()) cfg = RunConfig::from_file(flags.config_path);
    if (flags.seed >= 0) cfg.set("seed", std::to_string(flags.seed));
    if (!flags.out_dir.empty()) cfg.set("out_dir", flags.out_dir);
    if (!flags.from.empty()) cfg.set("from", flags.from);
    if (!flags.to.empty()) cfg.set("to", flags.to);
    if (!flags.data_dir.empty()) cfg.set("data_dir", flags.data_dir);
    if (flags.threads >= 0) cfg.set("threads", std::to_string(flags.threads));
    return cfg;
}

void check_inputs(const RunConfig& cfg, bool needs_data) {
    if (!needs_data) return;
    if (cfg.data_dir.empty()) throw ConfigError("data_dir is not set");
    DatasetPaths paths = DatasetPaths::in_dir(cfg.data_dir);
    for (const std::string& p : {paths.bars, paths.feeds, paths.meta, paths.reference})
        if (!std::filesystem::exists(p)) throw ConfigError("missing data path: " + p);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"cryptofactor: crypto asset-pricing batch engine"};
    app.require_subcommand(1);

    const std::vector<std::string> commands = {"synth", "universe", "panel", "sorts", "signal",
                                               "mi",    "pca",      "fmb",   "events", "pipeline"};
    std::map<std::string, CommonFlags> flags;
    for (const auto& name : commands) {
        CLI::App* cmd = app.add_subcommand(name);
        add_common(cmd, flags[name]);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        std::fprintf(stderr, "error: usage: %s\n", e.what());
        return 2;
    }

    const std::string cmd = app.get_subcommands().front()->get_name();
    try {
        RunConfig cfg = make_config(flags[cmd]);
        bool needs_data = cmd != "synth";
        check_inputs(cfg, needs_data);
        if (flags[cmd].dry_run) return 0;

        if (cmd == "synth") {
            run_synth(cfg);
            return 0;
        }
        Pipeline p(cfg);
        if (cmd == "universe") {
            p.build_universe();
            p.write_universe_csv();
        } else if (cmd == "panel") {
            p.build_panel_stage();
            p.write_panel_csv();
            p.write_characteristics_csv();
        } else if (cmd == "sorts") {
            p.write_sorts_csv();
        } else if (cmd == "signal") {
            p.write_signal_csv();
        } else if (cmd == "mi") {
            p.write_mi_csv();
        } else if (cmd == "pca") {
            p.write_pca_csv();
        } else if (cmd == "fmb") {
            p.write_fmb_csv();
        } else if (cmd == "events") {
            p.write_events_csv();
        } else if (cmd == "pipeline") {
            p.run_all();
        }
        return 0;
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "error: %s: %s\n", cmd.c_str(), e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s: %s\n", cmd.c_str(), e.what());
        return 1;
    }
}
