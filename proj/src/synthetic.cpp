#include "cryptofactor/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <tuple>

#include "cryptofactor/csv.hpp"
#include "cryptofactor/factors.hpp"
#include "cryptofactor/rng.hpp"

namespace cryptofactor {

namespace {

// Substream tags.
constexpr std::uint64_t kTagMarket = 1;
constexpr std::uint64_t kTagParams = 2;
constexpr std::uint64_t kTagRefs = 4;
constexpr std::uint64_t kTagEvents = 5;
constexpr std::uint64_t kTagAssetBase = 1'000'000;
constexpr std::uint64_t kTagVolumeBase = 2'000'000;
constexpr std::uint64_t kTagFeedBase = 3'000'000;

const char* kIndustries[] = {"payments", "smart_contracts", "defi", "infrastructure", "gaming"};
const char* kUsages[] = {"currency", "platform", "utility"};

// Count-like feeds emitted as log-normal daily values around a per-asset
// scale. Level-like feeds (percentages, supply, book stats) are handled
// separately.
const char* kCountFeeds[] = {
    "tx_volume", "active_addresses", "new_addresses", "circulation", "age_destroyed",
    "entity_transfers", "holder_transfers", "exchange_inflow", "exchange_outflow",
    "social_volume", "social_volume_reddit", "social_volume_twitter", "sentiment_pos_reddit",
    "sentiment_pos_twitter", "sentiment_neg_reddit", "sentiment_neg_twitter",
    "developer_activity", "trades",
};

const char* kWalkFeeds[] = {
    "flow_cex", "flow_dex", "flow_defi", "flow_whales",
    "holders_small", "holders_medium", "holders_large", "holders_whale",
};

const char* kPctFeeds[] = {
    "pct_supply_in_profit", "pct_supply_cex", "pct_supply_dex", "pct_supply_defi",
    "pct_supply_traders",
};

std::string asset_name(int i) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "A%03d", i);
    return buf;
}

}  // namespace

std::string feed_for_characteristic(const std::string& char_name) {
    // Trailing-sum characteristics carry a _tm7 suffix over the feed name.
    static const std::map<std::string, std::string> extra = {
        {"total_addresses", "total_addresses"},
        {"pct_supply_in_profit", "pct_supply_in_profit"},
        {"pct_supply_cex", "pct_supply_cex"},
        {"pct_supply_dex", "pct_supply_dex"},
        {"pct_supply_defi", "pct_supply_defi"},
        {"pct_supply_traders", "pct_supply_traders"},
        {"num_trading_pairs", "num_trading_pairs"},
        {"spread_bps", "spread_bps"},
        {"ask_size", "ask_size"},
        {"bid_size", "bid_size"},
        {"mvrv", "mvrv"},
        {"trades_tm7", "trades"},
    };
    auto it = extra.find(char_name);
    if (it != extra.end()) return it->second;
    if (char_name.size() > 4 && char_name.ends_with("_tm7")) {
        std::string feed = char_name.substr(0, char_name.size() - 4);
        for (const char* f : kCountFeeds)
            if (feed == f) return feed;
    }
    return "";
}

SyntheticResult generate_synthetic(const SyntheticConfig& cfg, std::uint64_t seed) {
    if (cfg.n_assets < 1) throw std::invalid_argument("generate_synthetic: need >= 1 asset");
    if (cfg.end - cfg.start < 12 * kSecondsPerWeek)
        throw std::invalid_argument(
            "generate_synthetic: date range shorter than 12 weeks; universe construction "
            "impossible");
    const TimePoint start = floor_hour(cfg.start);
    const auto n_hours = static_cast<std::size_t>((cfg.end - start) / kSecondsPerHour);
    const auto n_days = static_cast<std::size_t>((cfg.end - start) / kSecondsPerDay);
    const int n = cfg.n_assets;

    SyntheticResult out;
    Dataset& d = out.dataset;

    // Per-asset parameters.
    Rng params = Rng::derive(seed, kTagParams);
    std::vector<double> beta(n), price0(n), supply(n), vol_scale(n), score(n);
    std::vector<int> industry_idx(n), usage_idx(n);
    std::vector<bool> vc(n);
    for (int i = 0; i < n; ++i) {
        beta[i] = params.uniform(cfg.beta_min, cfg.beta_max);
        price0[i] = std::exp(params.uniform(std::log(cfg.price0_min), std::log(cfg.price0_max)));
        supply[i] = std::exp(params.uniform(std::log(cfg.supply_min), std::log(cfg.supply_max)));
        vol_scale[i] = std::exp(
            params.uniform(std::log(cfg.volume_hourly_min), std::log(cfg.volume_hourly_max)));
        score[i] = params.uniform(-1.0, 1.0);
        industry_idx[i] = static_cast<int>(params.bounded(std::size(kIndustries)));
        usage_idx[i] = static_cast<int>(params.bounded(std::size(kUsages)));
        // First two assets pin both flag values so the vc_owned column is
        // never degenerate on small fixtures.
        bool draw = params.uniform01() < 0.4;
        vc[i] = i == 0 ? false : i == 1 ? true : draw;
    }

    // Planted premium: quintile of the latent score, spread = lambda.
    std::vector<double> premium_hourly_log(n, 0.0);
    std::vector<int> quintile(n, 0);
    const bool planted = !cfg.planted_char.empty() && cfg.planted_lambda_weekly != 0.0;
    if (planted) {
        std::vector<std::string> ids(n);
        for (int i = 0; i < n; ++i) ids[i] = asset_name(i);
        std::vector<int> q = assign_quintiles(score, ids);
        for (int i = 0; i < n; ++i) {
            quintile[i] = q[i];
            double weekly = cfg.planted_lambda_weekly * (q[i] - 3) / 4.0;
            premium_hourly_log[i] = std::log1p(weekly) / 168.0;
        }
    }

    // Market path.
    Rng market_rng = Rng::derive(seed, kTagMarket);
    std::vector<double> market_log(n_hours);
    for (auto& r : market_log)
        r = cfg.market_drift_hourly + cfg.market_vol_hourly * market_rng.normal();

    // Bars, asset by asset; caps reported on day boundaries only.
    d.bars.reserve(static_cast<std::size_t>(n) * n_hours);
    for (int i = 0; i < n; ++i) {
        Rng idio = Rng::derive(seed, kTagAssetBase + static_cast<std::uint64_t>(i));
        Rng volr = Rng::derive(seed, kTagVolumeBase + static_cast<std::uint64_t>(i));
        double log_price = std::log(price0[i]);
        for (std::size_t h = 0; h < n_hours; ++h) {
            if (h > 0) {
                double shock = cfg.idio_vol_hourly != 0.0 ? cfg.idio_vol_hourly * idio.normal()
                                                          : 0.0;
                log_price += cfg.alpha_hourly + beta[i] * market_log[h] +
                             premium_hourly_log[i] + shock;
            }
            TimePoint ts = start + static_cast<TimePoint>(h) * kSecondsPerHour;
            double growth = std::pow(1.0 + cfg.volume_growth_annual,
                                     static_cast<double>(ts - start) / (365.0 * kSecondsPerDay));
            double vol = vol_scale[i] * growth *
                         std::exp(cfg.volume_noise * volr.normal() -
                                  0.5 * cfg.volume_noise * cfg.volume_noise);
            HourlyBar bar;
            bar.timestamp = ts;
            bar.asset_id = asset_name(i);
            bar.exchange_id = cfg.exchange_id;
            bar.mid_price = std::exp(log_price);
            bar.volume_usd = vol;
            if (ts == floor_day(ts)) bar.market_cap_usd = supply[i] * bar.mid_price;
            d.bars.push_back(std::move(bar));
        }
    }

    // Meta. Stablecoin/synthetic flags occupy the tail of the id range.
    for (int i = 0; i < n; ++i) {
        AssetMeta m;
        m.asset_id = asset_name(i);
        m.is_stablecoin = i >= n - cfg.stablecoin_count;
        m.is_synthetic = !m.is_stablecoin && i >= n - cfg.stablecoin_count - cfg.synthetic_count;
        m.industry = kIndustries[industry_idx[i]];
        m.usage = kUsages[usage_idx[i]];
        m.listed_markets = {{cfg.exchange_id, cfg.quote}};
        m.vc_owned = vc[i];
        d.meta.push_back(std::move(m));
    }
    std::sort(d.meta.begin(), d.meta.end(),
              [](const AssetMeta& a, const AssetMeta& b) { return a.asset_id < b.asset_id; });

    // Daily feeds. The planted feed, when any, is a noiseless monotone
    // function of the latent score so characteristic ranks equal score
    // ranks every week.
    const std::string planted_feed = planted ? feed_for_characteristic(cfg.planted_char) : "";
    for (int i = 0; i < n; ++i) {
        const std::string id = asset_name(i);
        std::uint64_t feed_tag = kTagFeedBase + static_cast<std::uint64_t>(i) * 100;
        auto push = [&](const std::string& feed, TimePoint day, double v) {
            if (cfg.planted_feed_only && feed != planted_feed) return;
            d.feeds.push_back(RawFeedRow{day, id, feed, v});
        };
        int tag_offset = 0;
        for (const char* feed : kCountFeeds) {
            Rng rng = Rng::derive(seed, feed_tag + static_cast<std::uint64_t>(tag_offset++));
            double scale = std::exp(rng.uniform(std::log(10.0), std::log(1e6)));
            bool is_planted = planted_feed == feed;
            std::vector<double> values(n_days);
            double cum = 0.0;
            for (std::size_t day = 0; day < n_days; ++day) {
                double v = is_planted ? 100.0 * std::exp(score[i])
                                      : scale * std::exp(0.3 * rng.normal() - 0.045);
                values[day] = v;
                cum += v;
                TimePoint ts = floor_day(start) + static_cast<TimePoint>(day) * kSecondsPerDay;
                push(feed, ts, v);
                if (std::string(feed) == "new_addresses") push("total_addresses", ts, cum + scale);
            }
        }
        for (const char* feed : kWalkFeeds) {
            Rng rng = Rng::derive(seed, feed_tag + static_cast<std::uint64_t>(tag_offset++));
            double level = std::exp(rng.uniform(std::log(100.0), std::log(1e5)));
            for (std::size_t day = 0; day < n_days; ++day) {
                level = std::max(1.0, level * std::exp(0.05 * rng.normal()));
                push(feed, floor_day(start) + static_cast<TimePoint>(day) * kSecondsPerDay,
                     level);
            }
        }
        for (const char* feed : kPctFeeds) {
            Rng rng = Rng::derive(seed, feed_tag + static_cast<std::uint64_t>(tag_offset++));
            double level = rng.uniform(0.05, 0.6);
            for (std::size_t day = 0; day < n_days; ++day) {
                level = std::clamp(level + 0.01 * rng.normal(), 0.001, 0.999);
                push(feed, floor_day(start) + static_cast<TimePoint>(day) * kSecondsPerDay,
                     level);
            }
        }
        {
            Rng rng = Rng::derive(seed, feed_tag + static_cast<std::uint64_t>(tag_offset++));
            double pairs = 1.0 + static_cast<double>(rng.bounded(50));
            double spread = rng.uniform(1.0, 80.0);
            double ask = std::exp(rng.uniform(std::log(1e3), std::log(1e6)));
            double bid = std::exp(rng.uniform(std::log(1e3), std::log(1e6)));
            double age = rng.uniform(50.0, 900.0);
            double hash = std::exp(rng.uniform(std::log(1e6), std::log(1e9)));
            for (std::size_t day = 0; day < n_days; ++day) {
                TimePoint ts = floor_day(start) + static_cast<TimePoint>(day) * kSecondsPerDay;
                push("num_trading_pairs", ts, pairs);
                push("spread_bps", ts, spread * std::exp(0.1 * rng.normal()));
                push("ask_size", ts, ask * std::exp(0.2 * rng.normal()));
                push("bid_size", ts, bid * std::exp(0.2 * rng.normal()));
                push("circulating_supply", ts, supply[i]);
                push("mvrv", ts, 1.2 * std::exp(0.2 * rng.normal()));
                push("utxo_median_age", ts, age + 0.2 * static_cast<double>(day));
                push("miner_hash_rate", ts, hash * std::exp(0.05 * rng.normal()));
            }
        }
    }

    // Reference series: constant risk-free level, GBM benchmarks, AR(1)
    // expected inflation.
    Rng refs = Rng::derive(seed, kTagRefs);
    auto add_reference = [&](const std::string& name, auto value_fn) {
        ReferenceSeries s;
        s.name = name;
        for (std::size_t day = 0; day < n_days; ++day) {
            TimePoint ts = floor_day(start) + static_cast<TimePoint>(day) * kSecondsPerDay;
            s.points.push_back(ReferencePoint{ts, value_fn(day)});
        }
        d.references.push_back(std::move(s));
    };
    add_reference("risk_free_1m", [&](std::size_t) { return cfg.rf_annual; });
    {
        double level = cfg.inflation_level0;
        std::vector<double> inflation(n_days);
        for (std::size_t day = 0; day < n_days; ++day) {
            level = cfg.inflation_level0 +
                    cfg.inflation_rho * (level - cfg.inflation_level0) +
                    cfg.inflation_shock * refs.normal();
            inflation[day] = level;
        }
        add_reference("expected_inflation_1y", [&](std::size_t day) { return inflation[day]; });
    }
    for (const char* bench : {"nasdaq", "sp500", "gold"}) {
        std::vector<double> path(n_days);
        double log_level = std::log(refs.uniform(1000.0, 5000.0));
        for (std::size_t day = 0; day < n_days; ++day) {
            log_level += 0.0001 + 0.01 * refs.normal();
            path[day] = std::exp(log_level);
        }
        add_reference(bench, [&](std::size_t day) { return path[day]; });
    }
    std::sort(d.references.begin(), d.references.end(),
              [](const ReferenceSeries& a, const ReferenceSeries& b) { return a.name < b.name; });

    // Bars/feeds into the Dataset's pinned orders.
    std::sort(d.bars.begin(), d.bars.end(), [](const HourlyBar& a, const HourlyBar& b) {
        return std::tie(a.asset_id, a.timestamp, a.exchange_id) <
               std::tie(b.asset_id, b.timestamp, b.exchange_id);
    });
    std::sort(d.feeds.begin(), d.feeds.end(), [](const RawFeedRow& a, const RawFeedRow& b) {
        return std::tie(a.asset_id, a.feed_name, a.timestamp) <
               std::tie(b.asset_id, b.feed_name, b.timestamp);
    });

    // Event dates in the interior of the span.
    Rng events = Rng::derive(seed, kTagEvents);
    TimePoint lo = floor_day(start) + 90 * kSecondsPerDay;
    TimePoint hi = floor_day(start) + static_cast<TimePoint>(n_days) * kSecondsPerDay -
                   90 * kSecondsPerDay;
    for (int e = 0; e < cfg.n_event_dates && hi > lo; ++e)
        out.event_dates.push_back(
            lo + static_cast<TimePoint>(events.bounded(
                     static_cast<std::uint64_t>((hi - lo) / kSecondsPerDay))) *
                     kSecondsPerDay);
    std::sort(out.event_dates.begin(), out.event_dates.end());

    // Manifest: everything a downstream check needs to recover.
    auto& man = out.manifest;
    man["seed"] = std::to_string(seed);
    man["n_assets"] = std::to_string(n);
    man["start"] = format_timestamp(start);
    man["end"] = format_timestamp(cfg.end);
    man["market_drift_hourly"] = format_double(cfg.market_drift_hourly);
    man["market_vol_hourly"] = format_double(cfg.market_vol_hourly);
    man["idio_vol_hourly"] = format_double(cfg.idio_vol_hourly);
    man["alpha_hourly"] = format_double(cfg.alpha_hourly);
    man["rf_annual"] = format_double(cfg.rf_annual);
    man["volume_growth_annual"] = format_double(cfg.volume_growth_annual);
    man["planted_char"] = cfg.planted_char;
    man["planted_lambda_weekly"] = format_double(cfg.planted_lambda_weekly);
    for (int i = 0; i < n; ++i) {
        man["asset." + asset_name(i) + ".beta"] = format_double(beta[i]);
        if (planted)
            man["asset." + asset_name(i) + ".planted_quintile"] = std::to_string(quintile[i]);
    }
    return out;
}

void write_manifest(const std::map<std::string, std::string>& manifest,
                    const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open file for writing: " + path);
    for (const auto& [k, v] : manifest) out << k << "=" << v << "\n";
}

std::map<std::string, std::string> read_manifest(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    std::map<std::string, std::string> out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("malformed manifest line in " + path + ": " + line);
        out[line.substr(0, eq)] = line.substr(eq + 1);
    }
    return out;
}

}  // namespace cryptofactor
