#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cryptofactor/characteristics.hpp"
#include "cryptofactor/events.hpp"
#include "cryptofactor/ingest.hpp"
#include "cryptofactor/panel.hpp"
#include "cryptofactor/synthetic.hpp"
#include "cryptofactor/universe.hpp"

namespace cryptofactor {

/// Configuration problem (bad key, missing path). The CLI maps this to
/// exit code 2; everything else is a runtime failure (exit 1).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Run configuration: plain key=value file, overridable by flags.
struct RunConfig {
    std::string data_dir;
    std::string out_dir = "out";
    std::uint64_t seed = 7;
    unsigned threads = 1;
    std::string from;  // "YYYY-MM-DD", empty = data start
    std::string to;    // empty = data end

    InclusionCriteria criteria;
    TimePoint week_anchor = 0;

    double fmb_min_history_days = 200.0;
    std::string fmb_frequency = "weekly";  // weekly | monthly
    bool fmb_rolling_beta = false;
    int fmb_beta_window_periods = 52;

    std::string event_asset;  // empty = largest average cap
    std::vector<int> event_windows = {2, 7, 14};
    int event_bootstrap_b = 10000;
    std::string events_file;  // empty = <data_dir>/events_input.csv

    double blend_weight = 0.6;  // weight on nasdaq in the blend series
    int rolling_window_weeks = 208;
    bool sorts_hac = false;

    SyntheticConfig synth;

    std::map<std::string, std::string> raw;  // as parsed, for hashing

    static RunConfig from_file(const std::string& path);
    static RunConfig from_keys(const std::map<std::string, std::string>& keys);
    void set(const std::string& key, const std::string& value);
    std::uint64_t config_hash() const;
};

/// Lazily-built pipeline state over one dataset. Stages fill the fields
/// they need; write_* emit the CSV tables with pinned column orders.
class Pipeline {
public:
    explicit Pipeline(RunConfig cfg);

    const RunConfig& config() const { return cfg_; }

    void load();                    // data_dir CSVs -> dataset
    void adopt(Dataset d);          // in-process dataset (tests, synth)
    void build_universe();
    void build_panel_stage();

    void write_universe_csv() const;
    void write_characteristics_csv() const;
    void write_panel_csv() const;
    void write_sorts_csv();
    void write_signal_csv();
    void write_mi_csv();
    void write_pca_csv();
    void write_fmb_csv();
    void write_events_csv();
    void write_perf_csv();
    void write_run_manifest() const;

    void run_all();  // the `pipeline` command

    const Dataset& dataset() const { return dataset_; }
    const Panel& panel() const { return panel_; }
    const std::vector<UniverseSnapshot>& universe() const { return universe_; }
    const MarketReturnSeries& market() const { return market_; }

private:
    RunConfig cfg_;
    Dataset dataset_;
    std::optional<MarketData> md_;
    std::optional<FeedTable> feeds_;
    std::optional<ReferenceTable> refs_;
    std::vector<UniverseSnapshot> universe_;
    std::optional<CharacteristicEngine> engine_;
    Panel panel_;
    MarketReturnSeries market_;

    void require_universe();
    void require_panel();
    std::string out_path(const std::string& name) const;
    std::map<std::string, std::vector<double>> benchmark_weekly_returns(
        const std::vector<TimePoint>& weeks) const;
};

/// Runs `synth`: generates the dataset for cfg.synth and writes bars.csv,
/// feeds.csv, meta.csv, reference.csv, events_input.csv and
/// synth_manifest into cfg.out_dir.
void run_synth(const RunConfig& cfg);

}  // namespace cryptofactor
