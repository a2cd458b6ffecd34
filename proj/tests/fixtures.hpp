// Hand-built datasets used by the universe/panel/acceptance suites.
#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <tuple>
#include <vector>

#include "cryptofactor/types.hpp"

namespace fixtures {

using cryptofactor::Dataset;
using cryptofactor::HourlyBar;
using cryptofactor::TimePoint;
using cryptofactor::kSecondsPerDay;
using cryptofactor::kSecondsPerHour;

class DatasetBuilder {
public:
    // price_fn(t) must be positive; vol_fn(t) >= 0; cap_fn(t) NaN = absent.
    void add_hourly_bars(const std::string& asset, TimePoint t0, TimePoint t1,
                         const std::function<double(TimePoint)>& price_fn,
                         const std::function<double(TimePoint)>& vol_fn,
                         const std::function<double(TimePoint)>& cap_fn,
                         const std::string& exchange = "ex1") {
        for (TimePoint t = t0; t < t1; t += kSecondsPerHour) {
            HourlyBar b;
            b.timestamp = t;
            b.asset_id = asset;
            b.exchange_id = exchange;
            b.mid_price = price_fn(t);
            b.volume_usd = vol_fn(t);
            double cap = cap_fn(t);
            if (!std::isnan(cap)) b.market_cap_usd = cap;
            d.bars.push_back(std::move(b));
        }
    }

    void add_meta(const std::string& asset, bool stable = false, bool synthetic = false,
                  const std::string& industry = "payments", const std::string& quote = "USD",
                  bool vc = false, const std::string& exchange = "ex1") {
        cryptofactor::AssetMeta m;
        m.asset_id = asset;
        m.is_stablecoin = stable;
        m.is_synthetic = synthetic;
        m.industry = industry;
        m.usage = "currency";
        m.listed_markets = {{exchange, quote}};
        m.vc_owned = vc;
        d.meta.push_back(std::move(m));
    }

    void add_feed(const std::string& asset, const std::string& feed, TimePoint day, double v) {
        d.feeds.push_back(cryptofactor::RawFeedRow{day, asset, feed, v});
    }

    void add_reference(const std::string& name, TimePoint t, double v) {
        for (auto& s : d.references)
            if (s.name == name) {
                s.points.push_back({t, v});
                return;
            }
        d.references.push_back({name, {{t, v}}});
    }

    Dataset build() {
        std::sort(d.bars.begin(), d.bars.end(), [](const HourlyBar& a, const HourlyBar& b) {
            return std::tie(a.asset_id, a.timestamp, a.exchange_id) <
                   std::tie(b.asset_id, b.timestamp, b.exchange_id);
        });
        std::sort(d.meta.begin(), d.meta.end(),
                  [](const auto& a, const auto& b) { return a.asset_id < b.asset_id; });
        std::sort(d.feeds.begin(), d.feeds.end(), [](const auto& a, const auto& b) {
            return std::tie(a.asset_id, a.feed_name, a.timestamp) <
                   std::tie(b.asset_id, b.feed_name, b.timestamp);
        });
        std::sort(d.references.begin(), d.references.end(),
                  [](const auto& a, const auto& b) { return a.name < b.name; });
        return std::move(d);
    }

    Dataset d;
};

// The ten-asset inclusion-criteria fixture. One year of hourly bars
// (2021), volume arriving as a single spike every Friday noon so any
// 7-day block holds exactly one spike, caps constant and summing to 1e10
// so the 1bp floor lands exactly on LOWCAP's cap, and the $500,000
// median boundary hit exactly by MEDVOL.
//
//   GOOD, SMALL  pass everything all year
//   MEDVOL       median weekly volume exactly $500,000 (strict > fails)
//   LOWCAP       cap exactly 1bp of the total (fails once every asset
//                carries a cap, i.e. from the October snapshot on)
//   STABLE/SYNTH flagged assets
//   QUOTE        only a EUR market
//   YOUNG        listed 2021-06-15 (history floor)
//   ZEROWEEK     no spike on Friday 2021-09-10 (zero-volume week)
//   REENTER      low spikes during June-July (exits, then re-enters)
struct CriteriaFixture {
    Dataset dataset;
    TimePoint start = cryptofactor::parse_timestamp("2021-01-01");
    TimePoint end = cryptofactor::parse_timestamp("2022-01-01");
};

inline CriteriaFixture make_criteria_fixture() {
    using cryptofactor::parse_timestamp;
    CriteriaFixture fx;
    DatasetBuilder b;

    const TimePoint t0 = fx.start, t1 = fx.end;
    auto price = [](TimePoint) { return 10.0; };
    auto cap_daily = [](double cap) {
        return [cap](TimePoint t) {
            return t == cryptofactor::floor_day(t) ? cap : std::nan("");
        };
    };
    // Friday 12:00 spike of `usd`, except weeks listed in `skip` (the
    // Friday date identifies the week).
    auto spikes = [](double usd, std::vector<std::pair<TimePoint, TimePoint>> low_ranges = {},
                     double low_usd = 0.0, std::vector<TimePoint> skip = {}) {
        return [=](TimePoint t) -> double {
            if (cryptofactor::weekday(t) != 4 || t - cryptofactor::floor_day(t) != 12 * kSecondsPerHour)
                return 0.0;
            TimePoint day = cryptofactor::floor_day(t);
            for (TimePoint s : skip)
                if (s == day) return 0.0;
            for (auto [lo, hi] : low_ranges)
                if (day >= lo && day <= hi) return low_usd;
            return usd;
        };
    };

    b.add_hourly_bars("GOOD", t0, t1, price, spikes(2e6), cap_daily(4e9));
    b.add_meta("GOOD");
    b.add_hourly_bars("SMALL", t0, t1, price, spikes(2e6), cap_daily(5e8));
    b.add_meta("SMALL");
    b.add_hourly_bars("MEDVOL", t0, t1, price, spikes(5e5), cap_daily(1e9));
    b.add_meta("MEDVOL");
    b.add_hourly_bars("LOWCAP", t0, t1, price, spikes(2e6), cap_daily(1e6));
    b.add_meta("LOWCAP");
    b.add_hourly_bars("STABLE", t0, t1, price, spikes(2e6), cap_daily(1e9));
    b.add_meta("STABLE", true, false);
    b.add_hourly_bars("SYNTH", t0, t1, price, spikes(2e6), cap_daily(5e8));
    b.add_meta("SYNTH", false, true);
    b.add_hourly_bars("QUOTE", t0, t1, price, spikes(2e6), cap_daily(5e8));
    b.add_meta("QUOTE", false, false, "payments", "EUR");
    b.add_hourly_bars("YOUNG", parse_timestamp("2021-06-15"), t1, price, spikes(2e6),
                      cap_daily(1e9));
    b.add_meta("YOUNG");
    b.add_hourly_bars("ZEROWEEK", t0, t1, price,
                      spikes(2e6, {}, 0.0, {parse_timestamp("2021-09-10")}), cap_daily(999e6));
    b.add_meta("ZEROWEEK");
    b.add_hourly_bars("REENTER", t0, t1, price,
                      spikes(2e6, {{parse_timestamp("2021-06-01"), parse_timestamp("2021-07-31")}},
                             1e5),
                      cap_daily(5e8));
    b.add_meta("REENTER");

    for (TimePoint d = t0; d < t1; d += kSecondsPerDay)
        b.add_reference("risk_free_1m", d, 0.0);

    fx.dataset = b.build();
    return fx;
}

}  // namespace fixtures
