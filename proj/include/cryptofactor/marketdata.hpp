#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "cryptofactor/types.hpp"

namespace cryptofactor {

/// Per-asset hourly series merged across exchanges: volume-weighted mid
/// price, summed dollar volume, and a market cap forward-filled for up to
/// seven days (NaN where still unknown). Derived once from a Dataset and
/// shared read-only.
struct AssetHourly {
    std::string asset_id;
    std::vector<TimePoint> ts;  // sorted unique hours
    std::vector<double> price;
    std::vector<double> volume_usd;
    std::vector<double> cap;  // forward-filled <= 7 days, NaN when absent

    /// Latest price at or before t, NaN if none within `max_stale` seconds.
    double price_at(TimePoint t, TimePoint max_stale = 24 * kSecondsPerHour) const;
    /// Forward-filled cap at or before t (7-day staleness), NaN if none.
    double cap_at(TimePoint t) const;
    /// Sum of hourly dollar volume over [from, to).
    double volume_in(TimePoint from, TimePoint to) const;
    /// Index of last hour <= t, or -1.
    std::ptrdiff_t index_at(TimePoint t) const;
};

class MarketData {
public:
    explicit MarketData(const Dataset& d);

    std::span<const AssetHourly> assets() const { return assets_; }
    const AssetHourly* find(const std::string& asset_id) const;

    TimePoint first_hour() const { return first_hour_; }
    TimePoint last_hour() const { return last_hour_; }

private:
    std::vector<AssetHourly> assets_;  // sorted by asset_id
    TimePoint first_hour_ = 0;
    TimePoint last_hour_ = 0;
};

/// Daily raw-feed values indexed by (asset, feed). Absent values are kept
/// as NaN points so windows can distinguish "no observation" from zero.
class FeedTable {
public:
    explicit FeedTable(const Dataset& d);

    struct Series {
        std::vector<TimePoint> day;
        std::vector<double> value;  // NaN = absent observation
    };

    const Series* series(const std::string& asset_id, const std::string& feed) const;

    /// Sum of daily values with day in [from, to); NaN if no finite
    /// observation falls in the window.
    double window_sum(const std::string& asset_id, const std::string& feed, TimePoint from,
                      TimePoint to) const;

    /// Latest finite value with day < t within `stale` seconds; NaN if none.
    double level_before(const std::string& asset_id, const std::string& feed, TimePoint t,
                        TimePoint stale = 7 * kSecondsPerDay) const;

private:
    std::map<std::pair<std::string, std::string>, Series> series_;
};

class ReferenceTable {
public:
    explicit ReferenceTable(const Dataset& d);

    /// Latest value at or before t; NaN if the series is missing or starts
    /// after t.
    double value_at(const std::string& name, TimePoint t) const;

    const ReferenceSeries* series(const std::string& name) const;

private:
    const Dataset* dataset_;
};

/// De-annualizes an annually-quoted rate over `days` calendar days by
/// compounding on a 365-day year: (1 + annual)^(days/365) - 1.
double deannualize(double annual_rate, double days);

}  // namespace cryptofactor
