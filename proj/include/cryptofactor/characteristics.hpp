#pragma once

#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "cryptofactor/marketdata.hpp"
#include "cryptofactor/types.hpp"
#include "cryptofactor/universe.hpp"

namespace cryptofactor {

enum class CharCategory { Onchain, Exchange, Social, Momentum, Microstructure, Financial };
enum class CharSource { DerivedFromReturns, DerivedFromFeed, RawFeed };

const char* category_name(CharCategory c);
const char* source_name(CharSource s);

struct CharacteristicSpec {
    std::string name;
    CharCategory category;
    int window_days;  // 0 = point-in-time level
    CharSource source;
    std::string formula;
};

/// The full 63-name characteristic dictionary, in fixed output order
/// (onchain, exchange, social, momentum, microstructure, financial).
const std::vector<CharacteristicSpec>& characteristic_dictionary();

/// Index of a characteristic in the dictionary, or -1.
int characteristic_index(const std::string& name);

/// Outputs of a rolling market regression on hourly excess returns.
/// NaN marks values undefined on the window (degenerate regressor, empty
/// residual spread, observation floor not met).
struct RollingRegressionStats {
    double alpha = 0.0;
    double beta = 0.0;
    double beta_down = 0.0;
    double coskew = 0.0;
    double iskew = 0.0;
    double ivol = 0.0;
    int window_days = 0;
    int n_obs = 0;
};

/// Linear-interpolation quantile at rank 1 + (n-1)q over ascending order
/// statistics. Input must be sorted ascending and non-empty.
double quantile_linear(std::span<const double> sorted_ascending, double q);

struct VarShortfall {
    double var;        // q-quantile of the window returns
    double shortfall;  // mean of returns strictly below var; NaN if none
};

/// 5% VaR and expected shortfall of a return window (NaN entries are
/// dropped; requires `min_obs` finite returns).
VarShortfall var_shortfall(std::span<const double> returns, double q, int min_obs);

/// Alpha/beta/downside-beta/coskewness/iskewness/ivol over a window of
/// paired hourly excess returns. Pairs with a NaN on either side are
/// dropped; fewer than `min_obs` pairs yields all-NaN stats.
RollingRegressionStats regression_stats(std::span<const double> asset_returns,
                                        std::span<const double> market_returns, int window_days,
                                        int min_obs);

/// Minimum observations for a rolling window: max(24 hours, 10% of the
/// window's hours).
int rolling_min_obs(int window_days);

/// Computes all 63 characteristics for (asset, week_start) rows. Holds
/// hourly excess-return grids for every asset plus the value-weighted
/// market series; construction does the heavy lifting once, compute_row
/// is then cheap and const (safe to call from several threads).
class CharacteristicEngine {
public:
    CharacteristicEngine(const MarketData& md, const FeedTable& feeds,
                         const ReferenceTable& refs,
                         const std::vector<UniverseSnapshot>& universe,
                         const std::vector<AssetMeta>& meta, unsigned threads = 1);

    /// Values aligned with characteristic_dictionary(); NaN = absent.
    std::vector<double> compute_row(const std::string& asset_id, TimePoint week_start) const;

    std::span<const double> hourly_excess_returns(const std::string& asset_id) const;
    std::span<const double> cmkt_hourly() const { return cmkt_; }
    TimePoint grid_start() const { return grid_start_; }
    std::size_t grid_size() const { return n_slots_; }

private:
    struct AssetState {
        const AssetHourly* hourly = nullptr;
        std::vector<double> excess;      // per grid slot, NaN when undefined
        std::vector<double> prefix_max;  // running price extrema per bar index
        std::vector<double> prefix_min;
        const AssetMeta* meta = nullptr;
    };

    const MarketData* md_;
    const FeedTable* feeds_;
    const ReferenceTable* refs_;
    const std::vector<UniverseSnapshot>* universe_;
    TimePoint grid_start_ = 0;
    std::size_t n_slots_ = 0;
    std::vector<double> rf_hourly_;  // per slot
    std::vector<double> cmkt_;       // per slot, NaN when no members priced
    std::vector<AssetState> states_;                       // parallel to md_->assets()
    std::unordered_map<std::string, std::size_t> index_;   // asset -> state index

    std::span<const double> market_window(TimePoint t, int days) const;
    double trailing_return(const AssetState& s, TimePoint t, int days) const;
    double industry_momentum(const AssetState& s, TimePoint t, int days) const;
    double delta_distribution(const std::string& asset, TimePoint t, const char* numerator_feed,
                              const std::vector<std::string>& level_feeds) const;
};

}  // namespace cryptofactor
