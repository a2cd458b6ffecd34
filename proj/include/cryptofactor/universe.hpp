#pragma once

#include <array>
#include <string>
#include <vector>

#include "cryptofactor/marketdata.hpp"
#include "cryptofactor/types.hpp"

namespace cryptofactor {

/// The six inclusion criteria applied on the first day of each month.
/// All volume/cap thresholds are strict inequalities ("above").
struct InclusionCriteria {
    int trailing_weeks = 12;
    double min_median_weekly_volume_usd = 500000.0;
    double mcap_floor_bps_of_total = 1.0;
    std::vector<std::string> quote_whitelist = {"USD", "USDC", "USDT"};
    std::vector<std::string> exchange_whitelist;  // empty = any exchange
    bool require_nonzero_volume_all_weeks = true;
};

/// Criterion indices used in diagnostics, in the order the rules are
/// stated: trailing history, whitelisted market, not stablecoin/synthetic,
/// cap floor, nonzero weekly volume, median weekly volume.
enum class Criterion : int {
    TrailingHistory = 0,
    WhitelistedMarket = 1,
    NotStablecoinOrSynthetic = 2,
    CapFloor = 3,
    NonzeroWeeklyVolume = 4,
    MedianWeeklyVolume = 5,
};

inline constexpr int kCriterionCount = 6;
const char* criterion_name(Criterion c);

struct UniverseSnapshot {
    YearMonth effective_month;
    std::vector<std::string> members;  // lexicographically sorted

    struct Diagnostic {
        std::string asset_id;
        std::array<bool, kCriterionCount> pass{};
        bool all_pass() const {
            for (bool p : pass)
                if (!p) return false;
            return true;
        }
    };
    std::vector<Diagnostic> diagnostics;  // one per dataset asset, sorted

    bool is_member(const std::string& asset_id) const;
};

/// Sum of the latest known free-float caps (forward-filled up to 7 days)
/// across all assets at t. Throws std::runtime_error when no asset has a
/// cap at or before t.
double total_market_cap(const MarketData& md, TimePoint t);
double total_market_cap(const Dataset& d, TimePoint t);

/// Applies all six criteria on the first day of `month`. Trailing weeks
/// are the 12 contiguous 7-day blocks ending the day before the month's
/// first day; the cap criterion averages asset and total caps daily over
/// the 91 days ending the same day. Throws when the month starts before
/// data start + trailing_weeks.
UniverseSnapshot build_snapshot(const MarketData& md, const std::vector<AssetMeta>& meta,
                                YearMonth month, const InclusionCriteria& criteria);
UniverseSnapshot build_snapshot(const Dataset& d, YearMonth month,
                                const InclusionCriteria& criteria);

std::vector<UniverseSnapshot> build_universe_series(const MarketData& md,
                                                    const std::vector<AssetMeta>& meta,
                                                    YearMonth first, YearMonth last,
                                                    const InclusionCriteria& criteria);
std::vector<UniverseSnapshot> build_universe_series(const Dataset& d, YearMonth first,
                                                    YearMonth last,
                                                    const InclusionCriteria& criteria);

/// Snapshot whose effective month covers `month`; falls back to the
/// earliest snapshot for months before the first one. nullptr when the
/// series is empty.
const UniverseSnapshot* snapshot_for(const std::vector<UniverseSnapshot>& series, YearMonth month);

}  // namespace cryptofactor
