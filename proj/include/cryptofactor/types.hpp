#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cryptofactor/time.hpp"

namespace cryptofactor {

/// One asset x exchange x hour market observation.
struct HourlyBar {
    TimePoint timestamp = 0;  // whole UTC hour start
    std::string asset_id;
    std::string exchange_id;
    double mid_price = 0.0;   // > 0
    double volume_usd = 0.0;  // >= 0
    std::optional<double> market_cap_usd;  // free-float; may be absent
};

struct AssetMeta {
    std::string asset_id;
    bool is_stablecoin = false;
    bool is_synthetic = false;
    std::string industry;
    std::string usage;
    std::vector<std::pair<std::string, std::string>> listed_markets;  // (exchange, quote)
    bool vc_owned = false;
};

struct RawFeedRow {
    TimePoint timestamp = 0;  // UTC day start
    std::string asset_id;
    std::string feed_name;
    std::optional<double> value;
};

struct ReferencePoint {
    TimePoint timestamp = 0;
    double value = 0.0;
};

struct ReferenceSeries {
    std::string name;  // risk_free_1m, nasdaq, sp500, gold, expected_inflation_1y, ...
    std::vector<ReferencePoint> points;  // strictly increasing timestamps
};

/// Loaded, validated raw inputs. Immutable once built; safe to share
/// across threads. Row orderings are pinned so serialization round-trips
/// byte for byte:
///   bars   by (asset_id, timestamp, exchange_id)
///   meta   by asset_id
///   feeds  by (asset_id, feed_name, timestamp)
///   references sorted by name, points by timestamp
struct Dataset {
    std::vector<HourlyBar> bars;
    std::vector<AssetMeta> meta;
    std::vector<RawFeedRow> feeds;
    std::vector<ReferenceSeries> references;

    const AssetMeta* meta_for(const std::string& asset_id) const;
    const ReferenceSeries* reference(const std::string& name) const;
    std::vector<std::string> asset_ids() const;  // sorted unique, from bars + meta
};

}  // namespace cryptofactor
