#include "cryptofactor/marketdata.hpp"

#include <algorithm>
#include <cmath>

namespace cryptofactor {

namespace {
// Largest index i with v[i] <= t, or -1.
std::ptrdiff_t last_at_or_before(const std::vector<TimePoint>& v, TimePoint t) {
    auto it = std::upper_bound(v.begin(), v.end(), t);
    return static_cast<std::ptrdiff_t>(it - v.begin()) - 1;
}
}  // namespace

double AssetHourly::price_at(TimePoint t, TimePoint max_stale) const {
    auto i = last_at_or_before(ts, t);
    if (i < 0 || t - ts[i] > max_stale) return std::nan("");
    return price[i];
}

double AssetHourly::cap_at(TimePoint t) const {
    auto i = last_at_or_before(ts, t);
    if (i < 0) return std::nan("");
    return cap[i];
}

double AssetHourly::volume_in(TimePoint from, TimePoint to) const {
    auto lo = std::lower_bound(ts.begin(), ts.end(), from) - ts.begin();
    auto hi = std::lower_bound(ts.begin(), ts.end(), to) - ts.begin();
    double sum = 0.0;
    for (auto i = lo; i < hi; ++i) sum += volume_usd[i];
    return sum;
}

std::ptrdiff_t AssetHourly::index_at(TimePoint t) const { return last_at_or_before(ts, t); }

MarketData::MarketData(const Dataset& d) {
    // Bars arrive sorted by (asset, timestamp, exchange); merge each
    // asset-hour group into one VWAP observation.
    std::size_t i = 0;
    while (i < d.bars.size()) {
        const std::string& asset = d.bars[i].asset_id;
        AssetHourly series;
        series.asset_id = asset;
        while (i < d.bars.size() && d.bars[i].asset_id == asset) {
            TimePoint hour = d.bars[i].timestamp;
            double pv = 0.0, v = 0.0, psum = 0.0;
            int n = 0;
            double cap = std::nan("");
            while (i < d.bars.size() && d.bars[i].asset_id == asset &&
                   d.bars[i].timestamp == hour) {
                const auto& b = d.bars[i];
                pv += b.mid_price * b.volume_usd;
                v += b.volume_usd;
                psum += b.mid_price;
                ++n;
                if (std::isnan(cap) && b.market_cap_usd) cap = *b.market_cap_usd;
                ++i;
            }
            series.ts.push_back(hour);
            series.price.push_back(v > 0.0 ? pv / v : psum / n);
            series.volume_usd.push_back(v);
            series.cap.push_back(cap);
        }
        // Forward-fill caps up to 7 days.
        double last_cap = std::nan("");
        TimePoint last_cap_ts = 0;
        for (std::size_t k = 0; k < series.ts.size(); ++k) {
            if (!std::isnan(series.cap[k])) {
                last_cap = series.cap[k];
                last_cap_ts = series.ts[k];
            } else if (!std::isnan(last_cap) && series.ts[k] - last_cap_ts <= 7 * kSecondsPerDay) {
                series.cap[k] = last_cap;
            }
        }
        assets_.push_back(std::move(series));
    }
    first_hour_ = 0;
    last_hour_ = 0;
    bool first = true;
    for (const auto& a : assets_) {
        if (a.ts.empty()) continue;
        if (first || a.ts.front() < first_hour_) first_hour_ = a.ts.front();
        if (first || a.ts.back() > last_hour_) last_hour_ = a.ts.back();
        first = false;
    }
}

const AssetHourly* MarketData::find(const std::string& asset_id) const {
    auto it = std::lower_bound(assets_.begin(), assets_.end(), asset_id,
                               [](const AssetHourly& a, const std::string& id) {
                                   return a.asset_id < id;
                               });
    return (it != assets_.end() && it->asset_id == asset_id) ? &*it : nullptr;
}

FeedTable::FeedTable(const Dataset& d) {
    for (const auto& row : d.feeds) {
        auto& s = series_[{row.asset_id, row.feed_name}];
        s.day.push_back(floor_day(row.timestamp));
        s.value.push_back(row.value ? *row.value : std::nan(""));
    }
}

const FeedTable::Series* FeedTable::series(const std::string& asset_id,
                                           const std::string& feed) const {
    auto it = series_.find({asset_id, feed});
    return it == series_.end() ? nullptr : &it->second;
}

double FeedTable::window_sum(const std::string& asset_id, const std::string& feed, TimePoint from,
                             TimePoint to) const {
    const Series* s = series(asset_id, feed);
    if (!s) return std::nan("");
    auto lo = std::lower_bound(s->day.begin(), s->day.end(), from) - s->day.begin();
    auto hi = std::lower_bound(s->day.begin(), s->day.end(), to) - s->day.begin();
    double sum = 0.0;
    bool any = false;
    for (auto i = lo; i < hi; ++i) {
        if (std::isnan(s->value[i])) continue;
        sum += s->value[i];
        any = true;
    }
    return any ? sum : std::nan("");
}

double FeedTable::level_before(const std::string& asset_id, const std::string& feed, TimePoint t,
                               TimePoint stale) const {
    const Series* s = series(asset_id, feed);
    if (!s) return std::nan("");
    auto it = std::lower_bound(s->day.begin(), s->day.end(), t);
    auto i = static_cast<std::ptrdiff_t>(it - s->day.begin()) - 1;
    while (i >= 0 && t - s->day[i] <= stale) {
        if (!std::isnan(s->value[i])) return s->value[i];
        --i;
    }
    return std::nan("");
}

ReferenceTable::ReferenceTable(const Dataset& d) : dataset_(&d) {}

const ReferenceSeries* ReferenceTable::series(const std::string& name) const {
    return dataset_->reference(name);
}

double ReferenceTable::value_at(const std::string& name, TimePoint t) const {
    const ReferenceSeries* s = series(name);
    if (!s || s->points.empty()) return std::nan("");
    auto it = std::upper_bound(s->points.begin(), s->points.end(), t,
                               [](TimePoint tt, const ReferencePoint& p) {
                                   return tt < p.timestamp;
                               });
    if (it == s->points.begin()) return std::nan("");
    return std::prev(it)->value;
}

double deannualize(double annual_rate, double days) {
    return std::pow(1.0 + annual_rate, days / 365.0) - 1.0;
}

}  // namespace cryptofactor
